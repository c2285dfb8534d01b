#include "dlalab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dlalab/errors.hpp"
#include "dlalab/mathutil.hpp"

namespace dlalab {

void EnsembleSpec::validate() const {
    params.validate();
    if (horizon < 1) throw ValidationError("horizon must be >= 1");
    if (trajectories < 1) throw ValidationError("trajectories must be >= 1");
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
        throw ValidationError("checkpoints must be sorted");
    }
    for (std::int64_t cp : checkpoints) {
        if (cp < 1 || cp > horizon) {
            throw ValidationError("checkpoint " + std::to_string(cp) +
                                  " outside [1, horizon]");
        }
    }
    if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 0.5)) throw ValidationError("delta must lie in (0, 1/2)");
    if (!(delta_bar > 0.0 && delta_bar < 0.5)) {
        throw ValidationError("delta_bar must lie in (0, 1/2)");
    }
    if (!(s_scale > 0.0)) throw ValidationError("s_scale must be positive");
    if (!(beta > 0.0 && beta <= 1.0)) throw ValidationError("beta must lie in (0, 1]");
    if (trajectories > max_work / horizon) {
        throw ResourceCapError("trajectories * horizon exceeds the work cap " +
                               std::to_string(max_work));
    }
}

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials) {
    if (trials < 1) throw ValidationError("wilson interval needs trials >= 1");
    constexpr double z = 1.959963984540054;  // 95%
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {center - half, center + half};
}

namespace {

struct Tables {
    std::vector<double> n_alpha;  // i^alpha
    std::vector<double> thr_e1;   // i^{1/2 - delta}
    std::vector<double> thr_e2;   // i^{1/2 + delta_bar}
};

Tables make_tables(const EnsembleSpec& spec) {
    const std::size_t len = static_cast<std::size_t>(spec.horizon) + 1;
    Tables t;
    t.n_alpha.resize(len);
    t.thr_e1.resize(len);
    t.thr_e2.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double x = static_cast<double>(i);
        t.n_alpha[i] = std::pow(x, spec.params.alpha);
        t.thr_e1[i] = std::pow(x, 0.5 - spec.delta);
        t.thr_e2[i] = std::pow(x, 0.5 + spec.delta_bar);
    }
    return t;
}

}  // namespace

std::vector<TrajectoryRecord> run_range(const EnsembleSpec& spec,
                                        std::int64_t first, std::int64_t last) {
    spec.validate();
    if (first < 0 || last > spec.trajectories || first > last) {
        throw ValidationError("bad trajectory range");
    }
    const Tables tables = make_tables(spec);
    const std::size_t ncp = spec.checkpoints.size();
    std::vector<std::int64_t> e2_lo(ncp);
    for (std::size_t c = 0; c < ncp; ++c) {
        e2_lo[c] = ceil_index(2.0 * spec.eps * static_cast<double>(spec.checkpoints[c]));
    }

    std::vector<TrajectoryRecord> records(static_cast<std::size_t>(last - first));
    std::vector<char> e2_ok(ncp);
    for (std::int64_t idx = first; idx < last; ++idx) {
        TrajectoryRecord& rec = records[static_cast<std::size_t>(idx - first)];
        rec.at.resize(ncp);
        std::fill(e2_ok.begin(), e2_ok.end(), 1);

        UnitStream stream(split_seed(spec.base_seed, static_cast<std::uint64_t>(idx)));
        ChainWalker walker(spec.params, false, true, &tables.n_alpha);
        std::int64_t occ = 0;
        std::size_t next_cp = 0;
        for (std::int64_t i = 1; i <= spec.horizon; ++i) {
            const std::int64_t prev_d = walker.d();
            walker.advance(stream);
            if (walker.d() != prev_d + 1) rec.last_descent = i - 1;
            const std::size_t ui = static_cast<std::size_t>(i);
            if (static_cast<double>(walker.d()) >= tables.thr_e1[ui]) ++occ;
            const double m = walker.m();
            if (std::abs(m) > tables.thr_e2[ui]) {
                for (std::size_t c = 0; c < ncp; ++c) {
                    if (e2_lo[c] <= i && i <= spec.checkpoints[c]) e2_ok[c] = 0;
                }
            }
            if (next_cp < ncp && i == spec.checkpoints[next_cp]) {
                TrajectoryRecord::Checkpoint& cp = rec.at[next_cp];
                cp.occ_frac = static_cast<double>(occ) / static_cast<double>(i);
                cp.m = m;
                cp.d = walker.d();
                cp.e2 = e2_ok[next_cp] != 0;
                ++next_cp;
            }
        }
    }
    return records;
}

EnsembleSummary finalize(const EnsembleSpec& spec,
                         std::vector<TrajectoryRecord> records) {
    const std::int64_t t = static_cast<std::int64_t>(records.size());
    if (t != spec.trajectories) {
        throw ValidationError("record count does not match the spec");
    }
    EnsembleSummary summary;
    summary.spec = spec;
    const double tn = static_cast<double>(t);
    std::vector<double> occ_values(records.size());
    for (std::size_t c = 0; c < spec.checkpoints.size(); ++c) {
        CheckpointStats st;
        st.n = spec.checkpoints[c];
        const double threshold =
            spec.s_scale * std::pow(static_cast<double>(st.n), spec.beta);
        std::int64_t ge = 0, e1 = 0, e2 = 0, frozen = 0;
        double occ_sum = 0.0, m_sum = 0.0;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& cp = records[i].at[c];
            if (static_cast<double>(cp.d) >= threshold) ++ge;
            if (cp.occ_frac >= 1.0 - spec.eps) ++e1;
            if (cp.e2) ++e2;
            if (records[i].last_descent < st.n) ++frozen;
            occ_sum += cp.occ_frac;
            m_sum += cp.m;
            occ_values[i] = cp.occ_frac;
        }
        st.p_ge_threshold = static_cast<double>(ge) / tn;
        st.ge_ci = wilson_interval(ge, t);
        st.e1_freq = static_cast<double>(e1) / tn;
        st.e2_freq = static_cast<double>(e2) / tn;
        st.occ_mean = occ_sum / tn;
        st.frozen_frac = static_cast<double>(frozen) / tn;
        const std::size_t p05_idx =
            static_cast<std::size_t>(0.05 * static_cast<double>(records.size() - 1));
        std::nth_element(occ_values.begin(),
                         occ_values.begin() + static_cast<std::ptrdiff_t>(p05_idx),
                         occ_values.end());
        st.occ_p05 = occ_values[p05_idx];
        st.m_mean = m_sum / tn;
        if (t > 1) {
            double ss = 0.0;
            for (const auto& rec : records) {
                const double dm = rec.at[c].m - st.m_mean;
                ss += dm * dm;
            }
            st.m_stderr = std::sqrt(ss / static_cast<double>(t - 1) / tn);
        }
        summary.checkpoints.push_back(st);
    }
    return summary;
}

EnsembleSummary run_ensemble(const EnsembleSpec& spec) {
    return finalize(spec, run_range(spec, 0, spec.trajectories));
}

void write_summary_csv(std::ostream& out, const EnsembleSummary& summary) {
    out << "n,p_ge_threshold,wilson_lo,wilson_hi,e1_freq,e2_freq,occ_mean,"
           "occ_p05,m_mean,m_stderr,frozen_frac\n";
    out.precision(17);
    for (const auto& st : summary.checkpoints) {
        out << st.n << ',' << st.p_ge_threshold << ',' << st.ge_ci.lo << ','
            << st.ge_ci.hi << ',' << st.e1_freq << ',' << st.e2_freq << ','
            << st.occ_mean << ',' << st.occ_p05 << ',' << st.m_mean << ','
            << st.m_stderr << ',' << st.frozen_frac << '\n';
    }
}

double occupation_fraction(const Trajectory& traj, std::int64_t n, double delta) {
    if (n < 1 || n >= static_cast<std::int64_t>(traj.d.size())) {
        throw ValidationError("n outside the trajectory");
    }
    std::int64_t occ = 0;
    for (std::int64_t m = 1; m <= n; ++m) {
        if (static_cast<double>(traj.d[static_cast<std::size_t>(m)]) >=
            std::pow(static_cast<double>(m), 0.5 - delta)) {
            ++occ;
        }
    }
    return static_cast<double>(occ) / static_cast<double>(n);
}

bool event_e1(const Trajectory& traj, std::int64_t n, double eps, double delta) {
    return occupation_fraction(traj, n, delta) >= 1.0 - eps;
}

bool event_e2(const Trajectory& traj, std::int64_t n, double eps, double delta_bar) {
    if (!traj.has_doob()) throw ValidationError("trajectory carries no Doob parts");
    if (n < 1 || n >= static_cast<std::int64_t>(traj.d.size())) {
        throw ValidationError("n outside the trajectory");
    }
    const std::int64_t lo = ceil_index(2.0 * eps * static_cast<double>(n));
    for (std::int64_t j = std::max<std::int64_t>(lo, 1); j <= n; ++j) {
        if (std::abs(traj.m[static_cast<std::size_t>(j)]) >
            std::pow(static_cast<double>(j), 0.5 + delta_bar)) {
            return false;
        }
    }
    return true;
}

std::optional<std::int64_t> freeze_time(const Trajectory& traj) {
    std::optional<std::int64_t> last;
    for (std::size_t i = 1; i + 1 < traj.d.size(); ++i) {
        if (traj.d[i + 1] != traj.d[i] + 1) last = static_cast<std::int64_t>(i);
    }
    return last;
}

ConditionalMonotone conditional_monotone_frequency(const EnsembleSpec& spec,
                                                   std::int64_t start) {
    spec.validate();
    if (start < 1 || start >= spec.horizon) {
        throw ValidationError("start must lie in [1, horizon)");
    }
    const Tables tables = make_tables(spec);
    const double threshold = std::pow(static_cast<double>(start), spec.beta);

    ConditionalMonotone result;
    for (std::int64_t idx = 0; idx < spec.trajectories; ++idx) {
        UnitStream stream(split_seed(spec.base_seed, static_cast<std::uint64_t>(idx)));
        ChainWalker walker(spec.params, false, false, &tables.n_alpha);
        std::int64_t d_at_start = 0;
        bool descent_after = false;
        for (std::int64_t i = 1; i <= spec.horizon; ++i) {
            const std::int64_t prev_d = walker.d();
            walker.advance(stream);
            if (i == start) d_at_start = walker.d();
            if (i > start && walker.d() != prev_d + 1) descent_after = true;
        }
        if (static_cast<double>(d_at_start) >= threshold) {
            ++result.conditioned;
            if (!descent_after) ++result.monotone;
        }
    }
    if (result.conditioned > 0) {
        result.sufficient = true;
        result.freq = static_cast<double>(result.monotone) /
                      static_cast<double>(result.conditioned);
        result.ci = wilson_interval(result.monotone, result.conditioned);
    }
    return result;
}

}  // namespace dlalab

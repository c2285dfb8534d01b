#include "dlalab/chain.hpp"

#include <cmath>
#include <limits>

#include "dlalab/errors.hpp"

namespace dlalab {

void ChainParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    if (allow_degenerate_c0 ? !(c >= 0.0) : !(c > 0.0)) {
        throw ValidationError("c must be positive (or zero with the degenerate flag), got " +
                              std::to_string(c));
    }
    if (!std::isfinite(alpha) || !std::isfinite(c)) {
        throw ValidationError("non-finite chain parameter");
    }
}

namespace {

double down_probability(std::int64_t n, std::int64_t d, const ChainParams& p,
                        double n_alpha) {
    if (d == 0) return 0.0;
    const double x = p.c * static_cast<double>(d) / n_alpha;
    if (!std::isfinite(x)) throw ValidationError("non-finite drift exponent");
    return 0.5 * std::exp(-x);
}

}  // namespace

TransitionProbs transition_probs(ChainState state, const ChainParams& params) {
    params.validate();
    if (state.n < 1) {
        throw ValidationError("transition undefined at n = 0; D_1 = 1 is an initial condition");
    }
    if (state.d < 0) throw ValidationError("negative chain value");
    const double down = down_probability(
        state.n, state.d, params, std::pow(static_cast<double>(state.n), params.alpha));
    return {1.0 - down, down};
}

ChainState step(ChainState state, const ChainParams& params, double u) {
    const TransitionProbs p = transition_probs(state, params);
    if (state.d == 0) return {state.n + 1, 1};
    return {state.n + 1, u < p.down ? state.d - 1 : state.d + 1};
}

ChainWalker::ChainWalker(const ChainParams& params, bool with_coupling,
                         bool with_doob, const std::vector<double>* pow_table)
    : params_(params),
      pow_table_(pow_table),
      with_coupling_(with_coupling),
      with_doob_(with_doob) {
    params_.validate();
}

void ChainWalker::advance(UnitStream& stream) {
    if (n_ == 0) {  // initial condition D_1 = 1
        n_ = 1;
        d_ = 1;
        s_ = with_coupling_ ? 1 : 0;
        if (with_doob_) a_ = 1.0;
        last_up_ = true;
        return;
    }
    const double n_alpha =
        pow_table_ ? (*pow_table_)[static_cast<std::size_t>(n_)]
                   : std::pow(static_cast<double>(n_), params_.alpha);
    const double p_down = down_probability(n_, d_, params_, n_alpha);
    const double u = stream.next();
    if (with_doob_) a_ += (d_ == 0) ? 1.0 : 1.0 - 2.0 * p_down;
    const bool chain_up = d_ == 0 || u >= p_down;
    if (with_coupling_) {
        // Same u drives the reflected walk; p_down <= 1/2 makes the chain
        // move up whenever the walk does, so d dominates |S| pathwise.
        const bool walk_up = s_ == 0 || u >= 0.5;
        s_ += walk_up ? 1 : -1;
    }
    d_ += chain_up ? 1 : -1;
    last_up_ = chain_up;
    ++n_;
}

Trajectory simulate(const ChainParams& params, std::int64_t horizon,
                    std::uint64_t seed, bool with_coupling, bool with_doob) {
    params.validate();
    if (horizon < 1) throw ValidationError("horizon must be >= 1");
    if (horizon > std::numeric_limits<std::int64_t>::max() / 2) {
        throw ValidationError("horizon overflows the index type");
    }

    Trajectory traj;
    traj.params = params;
    traj.seed = seed;
    const std::size_t len = static_cast<std::size_t>(horizon) + 1;
    traj.d.reserve(len);
    if (with_doob) {
        traj.a.reserve(len);
        traj.m.reserve(len);
    }
    if (with_coupling) traj.s_abs.reserve(len);

    UnitStream stream(seed);
    ChainWalker walker(params, with_coupling, with_doob);
    auto record = [&] {
        traj.d.push_back(walker.d());
        if (with_doob) {
            traj.a.push_back(walker.a());
            traj.m.push_back(walker.m());
        }
        if (with_coupling) traj.s_abs.push_back(walker.s_abs());
    };
    record();
    for (std::int64_t i = 0; i < horizon; ++i) {
        walker.advance(stream);
        record();
    }
    return traj;
}

ExactDistribution exact_distribution(const ChainParams& params,
                                     std::int64_t horizon, std::int64_t cap) {
    params.validate();
    if (horizon < 1) throw ValidationError("horizon must be >= 1");
    if (horizon > cap) {
        throw ResourceCapError("horizon " + std::to_string(horizon) +
                               " exceeds the DP cap " + std::to_string(cap));
    }

    const std::size_t len = static_cast<std::size_t>(horizon) + 1;
    std::vector<double> cur(len, 0.0), next(len, 0.0);
    cur[0] = 1.0;  // D_0 = 0
    for (std::int64_t i = 0; i < horizon; ++i) {
        std::fill(next.begin(), next.end(), 0.0);
        const double n_alpha = std::pow(static_cast<double>(i), params.alpha);
        for (std::int64_t k = 0; k <= i; ++k) {
            const double p = cur[static_cast<std::size_t>(k)];
            if (p == 0.0) continue;
            if (i == 0 || k == 0) {
                next[static_cast<std::size_t>(k + 1)] += p;
                continue;
            }
            const double down = down_probability(i, k, params, n_alpha);
            next[static_cast<std::size_t>(k - 1)] += p * down;
            next[static_cast<std::size_t>(k + 1)] += p * (1.0 - down);
        }
        cur.swap(next);
    }
    return {horizon, std::move(cur)};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "step,d";
    if (traj.has_doob()) out << ",a,m";
    if (traj.has_coupling()) out << ",s_abs";
    out << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < traj.d.size(); ++i) {
        out << i << ',' << traj.d[i];
        if (traj.has_doob()) out << ',' << traj.a[i] << ',' << traj.m[i];
        if (traj.has_coupling()) out << ',' << traj.s_abs[i];
        out << '\n';
    }
}

}  // namespace dlalab

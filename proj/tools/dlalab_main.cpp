#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "dlalab/bounds.hpp"
#include "dlalab/chain.hpp"
#include "dlalab/errors.hpp"
#include "dlalab/estimators.hpp"
#include "dlalab/io.hpp"
#include "dlalab/wedge.hpp"

namespace {

using dlalab::ValidationError;
using json = nlohmann::ordered_json;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Resolved key=value lines; reparsing them as a config file reproduces the run.
struct ConfigEcho {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(const std::string& key, const std::string& value) {
        entries.emplace_back(key, value);
    }
    void add(const std::string& key, double value) { add(key, fmt_double(value)); }
    void add(const std::string& key, std::int64_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

    std::string as_comments() const {
        std::string out;
        for (const auto& [k, v] : entries) out += "# " + k + "=" + v + "\n";
        return out;
    }
    json as_json() const {
        json j;
        for (const auto& [k, v] : entries) j[k] = v;
        return j;
    }
};

std::filesystem::path resolve_out(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("DLALAB_OUT_DIR")) p = std::filesystem::path(dir) / p;
    }
    return p;
}

struct SimulateOpts {
    double alpha = 0.5;
    double c = 1.0;
    bool allow_c0 = false;
    std::int64_t horizon = 0;
    std::uint64_t seed = 0;
    bool no_coupling = false;
    bool no_doob = false;
    std::string out;
};

int run_simulate(const SimulateOpts& o) {
    dlalab::ChainParams params{o.alpha, o.c, o.allow_c0};
    const auto traj =
        dlalab::simulate(params, o.horizon, o.seed, !o.no_coupling, !o.no_doob);

    ConfigEcho echo;
    echo.add("alpha", o.alpha);
    echo.add("c", o.c);
    echo.add("allow-c0", o.allow_c0);
    echo.add("horizon", o.horizon);
    echo.add("seed", o.seed);
    echo.add("no-coupling", o.no_coupling);
    echo.add("no-doob", o.no_doob);

    std::ostringstream body;
    body << echo.as_comments();
    dlalab::write_trajectory_csv(body, traj);
    dlalab::atomic_write(resolve_out(o.out), body.str());
    std::cout << "simulate: horizon=" << o.horizon << " seed=" << o.seed
              << " d_final=" << traj.d.back() << " -> " << o.out << "\n";
    return 0;
}

struct BoundsOpts {
    double alpha = 0.5;
    double c = 1.0;
    std::string out;
};

int run_bounds(const BoundsOpts& o) {
    const auto prof = dlalab::derive_profile(o.alpha, o.c);
    ConfigEcho echo;
    echo.add("alpha", o.alpha);
    echo.add("c", o.c);

    json j;
    j["alpha"] = prof.alpha;
    j["delta"] = prof.delta;
    j["K"] = prof.k_max;
    j["delta_bar"] = prof.delta_bar;
    j["beta_ladder"] = prof.beta_ladder;
    j["beta"] = prof.beta;
    j["s1"] = prof.s1;
    j["conditions"] = {{"c1", prof.cond1},
                       {"c2", prof.cond2},
                       {"c3", prof.cond3},
                       {"c4", prof.cond4}};
    j["config"] = echo.as_json();
    const std::string text = j.dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << text;
    } else {
        dlalab::atomic_write(resolve_out(o.out), text);
        std::cout << "bounds: alpha=" << o.alpha << " beta=" << prof.beta << " -> "
                  << o.out << "\n";
    }
    return 0;
}

struct EnsembleOpts {
    double alpha = 0.5;
    double c = 1.0;
    bool allow_c0 = false;
    std::int64_t horizon = 0;
    std::int64_t trajectories = 0;
    std::uint64_t seed = 0;
    double eps = 0.05;
    double s_scale = 1.0;
    double delta = -1.0;      // < 0: take from the derived profile
    double delta_bar = -1.0;  // < 0: take from the derived profile
    double beta = -1.0;       // < 0: take from the derived profile
    std::vector<std::int64_t> checkpoints;
    std::string out;
};

int run_ensemble_cmd(EnsembleOpts o) {
    if (o.delta < 0.0 || o.delta_bar < 0.0 || o.beta < 0.0) {
        const auto prof = dlalab::derive_profile(o.alpha, o.c > 0.0 ? o.c : 1.0);
        if (o.delta < 0.0) o.delta = prof.delta;
        if (o.delta_bar < 0.0) o.delta_bar = prof.delta_bar;
        if (o.beta < 0.0) o.beta = prof.beta;
    }
    if (o.checkpoints.empty()) o.checkpoints = {o.horizon};

    dlalab::EnsembleSpec spec;
    spec.params = {o.alpha, o.c, o.allow_c0};
    spec.horizon = o.horizon;
    spec.trajectories = o.trajectories;
    spec.base_seed = o.seed;
    spec.checkpoints = o.checkpoints;
    spec.eps = o.eps;
    spec.delta = o.delta;
    spec.delta_bar = o.delta_bar;
    spec.s_scale = o.s_scale;
    spec.beta = o.beta;
    spec.validate();
    const auto summary = dlalab::run_ensemble(spec);

    ConfigEcho echo;
    echo.add("alpha", o.alpha);
    echo.add("c", o.c);
    echo.add("allow-c0", o.allow_c0);
    echo.add("horizon", o.horizon);
    echo.add("trajectories", o.trajectories);
    echo.add("seed", o.seed);
    echo.add("eps", o.eps);
    echo.add("s-scale", o.s_scale);
    echo.add("delta", o.delta);
    echo.add("delta-bar", o.delta_bar);
    echo.add("beta", o.beta);
    {
        std::string cps;
        for (std::size_t i = 0; i < o.checkpoints.size(); ++i) {
            if (i) cps += ' ';
            cps += std::to_string(o.checkpoints[i]);
        }
        echo.add("checkpoints", cps);
    }

    std::ostringstream csv;
    csv << echo.as_comments();
    dlalab::write_summary_csv(csv, summary);
    dlalab::atomic_write(resolve_out(o.out + ".csv"), csv.str());

    json j;
    j["config"] = echo.as_json();
    j["checkpoints"] = json::array();
    for (const auto& st : summary.checkpoints) {
        j["checkpoints"].push_back({{"n", st.n},
                                    {"p_ge_threshold", st.p_ge_threshold},
                                    {"wilson_lo", st.ge_ci.lo},
                                    {"wilson_hi", st.ge_ci.hi},
                                    {"e1_freq", st.e1_freq},
                                    {"e2_freq", st.e2_freq},
                                    {"occ_mean", st.occ_mean},
                                    {"occ_p05", st.occ_p05},
                                    {"m_mean", st.m_mean},
                                    {"m_stderr", st.m_stderr},
                                    {"frozen_frac", st.frozen_frac}});
    }
    dlalab::atomic_write(resolve_out(o.out + ".json"), j.dump(2) + "\n");
    std::cout << "ensemble: trajectories=" << o.trajectories << " horizon=" << o.horizon
              << " -> " << o.out << ".{csv,json}\n";
    return 0;
}

struct DlaOpts {
    double alpha = 0.5;
    std::int64_t particles = 0;
    std::uint64_t seed = 0;
    std::int64_t launch_margin = 64;
    std::int64_t step_budget = 10'000'000;
    int resample_cap = 1000;
    std::vector<double> ends_radii;
    std::string pgm;
    std::string out;
};

std::string ends_report(const dlalab::WedgeAggregate& agg,
                        const std::vector<double>& radii, const json& config) {
    json j;
    j["config"] = config;
    j["ends"] = json::array();
    for (double r : radii) {
        j["ends"].push_back({{"r", r}, {"components", dlalab::ends_estimate(agg, r)}});
    }
    return j.dump(2) + "\n";
}

void write_pgm(const dlalab::WedgeAggregate& agg, const std::filesystem::path& path) {
    std::int64_t max_x = 0, max_y = 0;
    for (const auto& p : agg.sites()) {
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    const std::int64_t w = max_x + 1, h = max_y + 1;
    std::vector<char> grid(static_cast<std::size_t>(w * h), '0');
    for (const auto& p : agg.sites()) {
        grid[static_cast<std::size_t>((max_y - p.y) * w + p.x)] = '1';
    }
    std::ostringstream out;
    out << "P2\n" << w << ' ' << h << "\n1\n";
    for (std::int64_t row = 0; row < h; ++row) {
        for (std::int64_t col = 0; col < w; ++col) {
            if (col) out << ' ';
            out << grid[static_cast<std::size_t>(row * w + col)];
        }
        out << '\n';
    }
    dlalab::atomic_write(path, out.str());
}

int run_dla(const DlaOpts& o) {
    if (o.particles < 1) throw ValidationError("particles must be >= 1");
    dlalab::WedgeGeometry geom{o.alpha};
    geom.validate();
    dlalab::WalkConfig walk{o.launch_margin, o.step_budget, o.resample_cap};
    dlalab::WedgeAggregate agg;
    dlalab::ColumnHeights heights(geom);
    dlalab::UnitStream stream(o.seed);

    std::ostringstream tips;
    tips << "k,l,r,gap,r_defined\n";
    for (std::int64_t k = 1; k <= o.particles; ++k) {
        dlalab::attach_particle(agg, geom, stream, walk, &heights);
        const auto gap = dlalab::tip_gap(agg);
        tips << k << ',' << gap.l << ',' << gap.r << ',' << gap.gap << ','
             << (gap.r_defined ? 1 : 0) << '\n';
    }

    ConfigEcho echo;
    echo.add("alpha", o.alpha);
    echo.add("particles", o.particles);
    echo.add("seed", o.seed);
    echo.add("launch-margin", o.launch_margin);
    echo.add("step-budget", o.step_budget);
    echo.add("resample-cap", static_cast<std::int64_t>(o.resample_cap));

    std::ostringstream sites;
    sites << echo.as_comments() << "k,x,y\n";
    const auto all = agg.sites();
    for (std::size_t k = 0; k < all.size(); ++k) {
        sites << k << ',' << all[k].x << ',' << all[k].y << '\n';
    }
    dlalab::atomic_write(resolve_out(o.out + "_sites.csv"), sites.str());
    dlalab::atomic_write(resolve_out(o.out + "_tips.csv"),
                         echo.as_comments() + tips.str());
    if (!o.ends_radii.empty()) {
        dlalab::atomic_write(resolve_out(o.out + "_ends.json"),
                             ends_report(agg, o.ends_radii, echo.as_json()));
    }
    if (!o.pgm.empty()) write_pgm(agg, resolve_out(o.pgm));
    const auto gap = dlalab::tip_gap(agg);
    std::cout << "dla: particles=" << o.particles << " L=" << gap.l
              << " R=" << (gap.r_defined ? std::to_string(gap.r) : "undefined")
              << " -> " << o.out << "_{sites,tips}.csv\n";
    return 0;
}

struct EndsOpts {
    std::string sites;
    std::vector<double> radii;
    std::string out;
};

int run_ends(const EndsOpts& o) {
    std::ifstream in(o.sites);
    if (!in) throw ValidationError("cannot open sites file " + o.sites);
    dlalab::WedgeAggregate agg;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("k,", 0) == 0) continue;
        std::istringstream row(line);
        std::string field;
        std::int64_t vals[3] = {0, 0, 0};
        for (int i = 0; i < 3 && std::getline(row, field, ','); ++i) {
            vals[i] = std::stoll(field);
        }
        if (vals[1] == 0 && vals[2] == 0) continue;  // the seed is implicit
        agg.add_site({vals[1], vals[2]});
    }

    ConfigEcho echo;
    echo.add("sites", o.sites);
    const std::string text = ends_report(agg, o.radii, echo.as_json());
    if (o.out.empty()) {
        std::cout << text;
    } else {
        dlalab::atomic_write(resolve_out(o.out), text);
        std::cout << "ends: sites=" << agg.size() << " -> " << o.out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and numerical-verification lab for a birth-death "
                 "chain with vanishing down-drift, and lattice DLA in a "
                 "sub-linear wedge"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "ini file with one [subcommand] section of key=value lines");

    SimulateOpts sim;
    auto* sim_cmd = app.add_subcommand("simulate", "simulate one trajectory");
    sim_cmd->add_option("--alpha", sim.alpha, "exponent in (0,1)")
        ->required()
        ->check(CLI::Range(0.0, 1.0).description("(0,1)"));
    sim_cmd->add_option("--c", sim.c, "drift coefficient")->required();
    sim_cmd->add_flag("--allow-c0", sim.allow_c0, "permit c = 0");
    sim_cmd->add_option("--horizon", sim.horizon, "steps")->required();
    sim_cmd->add_option("--seed", sim.seed, "RNG seed");
    sim_cmd->add_flag("--no-coupling", sim.no_coupling, "skip the reflected walk");
    sim_cmd->add_flag("--no-doob", sim.no_doob, "skip the Doob parts");
    sim_cmd->add_option("--out", sim.out, "output CSV")->required();

    BoundsOpts bnd;
    auto* bnd_cmd = app.add_subcommand("bounds", "derived-constants profile");
    bnd_cmd->add_option("--alpha", bnd.alpha, "exponent in (0,1)")->required();
    bnd_cmd->add_option("--c", bnd.c, "drift coefficient");
    bnd_cmd->add_option("--out", bnd.out, "output JSON (default stdout)");

    EnsembleOpts ens;
    auto* ens_cmd = app.add_subcommand("ensemble", "Monte Carlo ensemble");
    ens_cmd->add_option("--alpha", ens.alpha, "exponent in (0,1)")->required();
    ens_cmd->add_option("--c", ens.c, "drift coefficient")->required();
    ens_cmd->add_flag("--allow-c0", ens.allow_c0, "permit c = 0");
    ens_cmd->add_option("--horizon", ens.horizon, "steps per trajectory")->required();
    ens_cmd->add_option("--trajectories", ens.trajectories, "ensemble size")->required();
    ens_cmd->add_option("--seed", ens.seed, "base seed");
    ens_cmd->add_option("--eps", ens.eps, "event epsilon");
    ens_cmd->add_option("--s-scale", ens.s_scale, "threshold scale s");
    ens_cmd->add_option("--delta", ens.delta, "occupation exponent offset");
    ens_cmd->add_option("--delta-bar", ens.delta_bar, "martingale envelope offset");
    ens_cmd->add_option("--beta", ens.beta, "growth exponent");
    ens_cmd->add_option("--checkpoints", ens.checkpoints, "checkpoint steps");
    ens_cmd->add_option("--out", ens.out, "output prefix")->required();

    DlaOpts dla;
    auto* dla_cmd = app.add_subcommand("dla", "wedge DLA aggregate");
    dla_cmd->add_option("--alpha", dla.alpha, "wedge exponent in (0,1)")->required();
    dla_cmd->add_option("--particles", dla.particles, "attachments")->required();
    dla_cmd->add_option("--seed", dla.seed, "RNG seed");
    dla_cmd->add_option("--launch-margin", dla.launch_margin, "launch column offset");
    dla_cmd->add_option("--step-budget", dla.step_budget, "walk steps per attempt");
    dla_cmd->add_option("--resample-cap", dla.resample_cap, "relaunch attempts");
    dla_cmd->add_option("--ends-radii", dla.ends_radii, "radii for the ends report");
    dla_cmd->add_option("--pgm", dla.pgm, "occupancy raster dump");
    dla_cmd->add_option("--out", dla.out, "output prefix")->required();

    EndsOpts ends;
    auto* ends_cmd = app.add_subcommand("ends", "ends report for a site CSV");
    ends_cmd->add_option("--sites", ends.sites, "site list CSV")->required();
    ends_cmd->add_option("--radii", ends.radii, "radii grid")->required();
    ends_cmd->add_option("--out", ends.out, "output JSON (default stdout)");

    try {
        app.parse(argc, argv);
        if (sim_cmd->parsed()) return run_simulate(sim);
        if (bnd_cmd->parsed()) return run_bounds(bnd);
        if (ens_cmd->parsed()) return run_ensemble_cmd(ens);
        if (dla_cmd->parsed()) return run_dla(dla);
        if (ends_cmd->parsed()) return run_ends(ends);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    } catch (const dlalab::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const dlalab::ResourceCapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const dlalab::InvariantError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "dlalab/chain.hpp"

namespace dlalab {

// A Monte Carlo run: trajectory i is driven by split_seed(base_seed, i).
struct EnsembleSpec {
    ChainParams params;
    std::int64_t horizon = 0;
    std::int64_t trajectories = 0;
    std::uint64_t base_seed = 0;
    std::vector<std::int64_t> checkpoints;  // sorted, within [1, horizon]
    double eps = 0.05;
    double delta = 0.25;       // occupation threshold exponent 1/2 - delta
    double delta_bar = 0.125;  // martingale envelope exponent 1/2 + delta_bar
    double s_scale = 1.0;      // threshold s * n^beta
    double beta = 0.75;
    std::int64_t max_work = 4'000'000'000;  // cap on trajectories * horizon

    void validate() const;
};

struct WilsonInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval at 95%.
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials);

// Everything one trajectory contributes to the summary: one slot per
// checkpoint plus the last descent step (0 when the path is monotone
// from step 1; right-censored at the horizon).
struct TrajectoryRecord {
    struct Checkpoint {
        double occ_frac = 0.0;
        double m = 0.0;
        std::int64_t d = 0;
        bool e2 = false;
    };
    std::vector<Checkpoint> at;
    std::int64_t last_descent = 0;
};

struct CheckpointStats {
    std::int64_t n = 0;
    double p_ge_threshold = 0.0;  // empirical P(D_n >= s * n^beta)
    WilsonInterval ge_ci;
    double e1_freq = 0.0;
    double e2_freq = 0.0;
    double occ_mean = 0.0;
    double occ_p05 = 0.0;  // 5th percentile of the occupation fraction
    double m_mean = 0.0;
    double m_stderr = 0.0;
    double frozen_frac = 0.0;  // fraction with no descent at steps >= n
};

struct EnsembleSummary {
    EnsembleSpec spec;
    std::vector<CheckpointStats> checkpoints;
};

// Per-trajectory records for indices [first, last); slot i - first holds
// trajectory i. Partial runs concatenated in any order and finalized give
// identical statistics (finalize folds in index order).
std::vector<TrajectoryRecord> run_range(const EnsembleSpec& spec,
                                        std::int64_t first, std::int64_t last);

EnsembleSummary finalize(const EnsembleSpec& spec,
                         std::vector<TrajectoryRecord> records);

EnsembleSummary run_ensemble(const EnsembleSpec& spec);

void write_summary_csv(std::ostream& out, const EnsembleSummary& summary);

// |{0 < m <= n : d[m] >= m^{1/2 - delta}}| / n.
double occupation_fraction(const Trajectory& traj, std::int64_t n, double delta);

// occupation_fraction >= 1 - eps (inclusive).
bool event_e1(const Trajectory& traj, std::int64_t n, double eps, double delta);

// |m[j]| <= j^{1/2 + delta_bar} for every ceil(2 eps n) <= j <= n.
bool event_e2(const Trajectory& traj, std::int64_t n, double eps, double delta_bar);

// Largest n with d[n+1] != d[n] + 1, or nullopt when the path is monotone
// from step 1. Right-censored at the trajectory horizon.
std::optional<std::int64_t> freeze_time(const Trajectory& traj);

struct ConditionalMonotone {
    std::int64_t conditioned = 0;  // trajectories with d[start] >= start^beta
    std::int64_t monotone = 0;     // of those, strictly monotone on [start, horizon]
    bool sufficient = false;
    double freq = 0.0;
    WilsonInterval ci;
};

ConditionalMonotone conditional_monotone_frequency(const EnsembleSpec& spec,
                                                   std::int64_t start);

}  // namespace dlalab

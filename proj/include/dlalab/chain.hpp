#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "dlalab/rng.hpp"

namespace dlalab {

// Parameters (alpha, c) of the chain: from a nonzero state d at step n >= 1
// the chain moves down with probability (1/2)exp(-c*d/n^alpha), up otherwise;
// from d = 0 it moves to 1 deterministically.
struct ChainParams {
    double alpha = 0.5;
    double c = 1.0;
    bool allow_degenerate_c0 = false;  // permits c = 0 (reflected simple walk)

    void validate() const;  // throws ValidationError
};

struct ChainState {
    std::int64_t n = 0;  // step index
    std::int64_t d = 0;  // chain value, 0 <= d <= n
};

struct TransitionProbs {
    double up;
    double down;
};

// Transition kernel at (n, d), n >= 1.
TransitionProbs transition_probs(ChainState state, const ChainParams& params);

// One step driven by a uniform variate u in [0, 1). Convention: u < p_down
// moves down; d = 0 moves to 1 for any u. The convention is normative — the
// reflected-walk coupling below relies on it.
ChainState step(ChainState state, const ChainParams& params, double u);

// A realized path D_0..D_N with its Doob decomposition d = a + m and the
// optional coupled reflected walk |S|.
struct Trajectory {
    ChainParams params;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> d;
    std::vector<double> a;        // predictable part, empty when Doob disabled
    std::vector<double> m;        // martingale part, m[i] = d[i] - a[i]
    std::vector<std::int64_t> s_abs;  // coupled |S|, empty when coupling disabled

    bool has_doob() const { return !a.empty(); }
    bool has_coupling() const { return !s_abs.empty(); }
};

// Incremental chain state shared by simulate() and the ensemble engine.
// One uniform variate is consumed per step, including forced steps, so the
// coupled reflected walk sees the same stream. The step 0 -> 1 is the
// initial condition and consumes nothing.
class ChainWalker {
public:
    // pow_table, when given, holds i^alpha for 0 <= i <= horizon.
    ChainWalker(const ChainParams& params, bool with_coupling, bool with_doob,
                const std::vector<double>* pow_table = nullptr);

    void advance(UnitStream& stream);

    std::int64_t n() const { return n_; }
    std::int64_t d() const { return d_; }
    double a() const { return a_; }
    double m() const { return static_cast<double>(d_) - a_; }
    std::int64_t s_abs() const { return s_; }
    bool last_step_up() const { return last_up_; }

private:
    ChainParams params_;
    const std::vector<double>* pow_table_;
    std::int64_t n_ = 0;
    std::int64_t d_ = 0;
    std::int64_t s_ = 0;
    double a_ = 0.0;
    bool with_coupling_;
    bool with_doob_;
    bool last_up_ = true;
};

// Simulates D_0..D_horizon from a fresh stream seeded with `seed`.
Trajectory simulate(const ChainParams& params, std::int64_t horizon,
                    std::uint64_t seed, bool with_coupling = true,
                    bool with_doob = true);

// Law of D_n computed by exact forward propagation of the kernel over the
// full triangle {(i, d) : 0 <= d <= i}.
struct ExactDistribution {
    std::int64_t n = 0;
    std::vector<double> probs;  // probs[k] = P(D_n = k), size n + 1

    double prob(std::int64_t k) const {
        return (k >= 0 && k < static_cast<std::int64_t>(probs.size()))
                   ? probs[static_cast<std::size_t>(k)]
                   : 0.0;
    }
};

inline constexpr std::int64_t kDefaultDpCap = 2000;

ExactDistribution exact_distribution(const ChainParams& params,
                                     std::int64_t horizon,
                                     std::int64_t cap = kDefaultDpCap);

// Columnar CSV (step, d[, a, m][, s_abs]); absent columns are omitted.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace dlalab

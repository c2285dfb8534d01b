#pragma once

#include <cstdint>
#include <vector>

namespace dlalab {

// Derived constants for a given (alpha, c): the exponent delta, the ladder
// depth K, the Azuma exponent delta_bar = (1 - alpha - delta)/8, the ladder
// beta_k = 1/2 - delta + k(1 - alpha) and its final value beta = beta_K.
struct BoundsProfile {
    double alpha = 0.0;
    double c = 0.0;
    double delta = 0.0;
    int k_max = 0;
    double delta_bar = 0.0;
    std::vector<double> beta_ladder;  // beta_1 .. beta_K
    double beta = 0.0;
    double s1 = 0.0;  // base drift constant c/2

    // Conditions (1)-(4): (1) 0 < delta < 1/2,
    // (2) 1/2 - delta + (1-alpha) > 1/2,
    // (3) 1/2 - delta + K(1-alpha) > alpha,
    // (4) 1/2 - delta + (K-1)(1-alpha) < alpha.
    bool cond1 = false;
    bool cond2 = false;
    bool cond3 = false;
    bool cond4 = false;  // recorded, not enforced (vacuous for small alpha)
};

// Piecewise recipe: K = max(floor((alpha-1/2)/(1-alpha)) + 1, 1); delta by the
// three-way case split on alpha <= 1/2 / ratio integer / ratio non-integer.
// Throws InvariantError if conditions (1)-(3) or alpha < beta < 1 fail.
BoundsProfile derive_profile(double alpha, double c);

// 2 exp(-m^{2 delta_bar} / 8), clamped to [0, 1].
double azuma_tail(std::int64_t m, double delta_bar);

// Lower bound on P(E2): max(0, 1 - 2n exp(-ceil(2 eps n)^{2 delta_bar} / 8)).
double e2_union_bound(std::int64_t n, double eps, double delta_bar);

// Certified lower bound exp(-S) on the conditional monotone-growth
// probability, where S upper-bounds sum_{k >= start} exp(-c k^{beta-alpha})
// (partial sum plus an integral tail). Requires beta > alpha.
double monotone_tail_bound(std::int64_t start, double c, double alpha, double beta);

}  // namespace dlalab

#include "dlalab/bounds.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "dlalab/errors.hpp"
#include "dlalab/mathutil.hpp"

namespace dlalab {

BoundsProfile derive_profile(double alpha, double c) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    if (!(c > 0.0)) {
        throw ValidationError("c must be positive, got " + std::to_string(c));
    }

    BoundsProfile prof;
    prof.alpha = alpha;
    prof.c = c;
    prof.s1 = c / 2.0;

    const double ratio = (alpha - 0.5) / (1.0 - alpha);
    const bool ratio_integer = std::abs(ratio - std::round(ratio)) < 1e-12;
    // snap near-integer ratios so floor does not lose a rung
    const double ratio_eff = ratio_integer ? std::round(ratio) : ratio;
    prof.k_max = std::max(static_cast<int>(std::floor(ratio_eff)) + 1, 1);

    if (alpha <= 0.5) {
        prof.delta = 0.5 * (1.0 - alpha);
    } else if (ratio_integer) {
        prof.delta = (1.0 - alpha) / 8.0;
    } else {
        prof.delta = std::min((0.5 + prof.k_max * (1.0 - alpha) - alpha) / 8.0,
                              (1.0 - alpha) / 8.0);
    }

    prof.delta_bar = (1.0 - alpha - prof.delta) / 8.0;
    prof.beta_ladder.reserve(static_cast<std::size_t>(prof.k_max));
    for (int k = 1; k <= prof.k_max; ++k) {
        prof.beta_ladder.push_back(0.5 - prof.delta + k * (1.0 - alpha));
    }
    prof.beta = prof.beta_ladder.back();

    prof.cond1 = prof.delta > 0.0 && prof.delta < 0.5;
    prof.cond2 = 0.5 - prof.delta + (1.0 - alpha) > 0.5;
    prof.cond3 = prof.beta > alpha;
    prof.cond4 = 0.5 - prof.delta + (prof.k_max - 1) * (1.0 - alpha) < alpha;

    if (!prof.cond1 || !prof.cond2 || !prof.cond3) {
        throw InvariantError("bounds recipe violated a stated condition at alpha = " +
                             std::to_string(alpha));
    }
    if (!(alpha < prof.beta && prof.beta < 1.0)) {
        throw InvariantError("beta outside (alpha, 1) at alpha = " + std::to_string(alpha));
    }
    return prof;
}

double azuma_tail(std::int64_t m, double delta_bar) {
    if (m < 1) throw ValidationError("m must be >= 1");
    if (!(delta_bar > 0.0 && delta_bar < 0.5)) {
        throw ValidationError("delta_bar must lie in (0, 1/2)");
    }
    const double b =
        2.0 * std::exp(-std::pow(static_cast<double>(m), 2.0 * delta_bar) / 8.0);
    return std::clamp(b, 0.0, 1.0);
}

double e2_union_bound(std::int64_t n, double eps, double delta_bar) {
    if (n < 1) throw ValidationError("n must be >= 1");
    if (!(eps > 0.0 && eps < 0.5)) throw ValidationError("eps must lie in (0, 1/2)");
    if (!(delta_bar > 0.0 && delta_bar < 0.5)) {
        throw ValidationError("delta_bar must lie in (0, 1/2)");
    }
    const double lo =
        static_cast<double>(ceil_index(2.0 * eps * static_cast<double>(n)));
    const double b = 1.0 - 2.0 * static_cast<double>(n) *
                               std::exp(-std::pow(lo, 2.0 * delta_bar) / 8.0);
    return std::max(0.0, b);
}

double monotone_tail_bound(std::int64_t start, double c, double alpha, double beta) {
    if (start < 1) throw ValidationError("start must be >= 1");
    if (!(c > 0.0)) throw ValidationError("c must be positive");
    if (!(beta > alpha)) throw ValidationError("beta must exceed alpha (sum diverges)");

    const double g = beta - alpha;
    // Partial sum until terms drop below 1e-18, capped so a tiny exponent
    // cannot stall; the remainder is covered by the integral either way.
    constexpr double kTermFloor = 1e-18;
    constexpr std::int64_t kMaxTerms = 10'000'000;
    double sum = 0.0;
    std::int64_t k = start;
    for (std::int64_t taken = 0; taken < kMaxTerms; ++taken, ++k) {
        const double term = std::exp(-c * std::pow(static_cast<double>(k), g));
        sum += term;
        if (term < kTermFloor) break;
    }
    // Terms are decreasing, so sum_{j > k-1} <= integral_{k-1}^inf; with the
    // substitution u = c x^g the integral is (c^{-1/g}/g) * Gamma(1/g, c k^g),
    // keeping the total a certified upper bound on the series.
    const double lo = static_cast<double>(k - 1);
    const double z = c * std::pow(lo, g);
    double tail;
    try {
        tail = std::pow(c, -1.0 / g) / g * boost::math::tgamma(1.0 / g, z);
    } catch (const std::overflow_error&) {
        tail = std::numeric_limits<double>::infinity();
    }
    // An overflowing tail means the series is effectively divergent at this
    // scale; 0 is still a valid lower bound.
    return std::exp(-(sum + tail));
}

}  // namespace dlalab

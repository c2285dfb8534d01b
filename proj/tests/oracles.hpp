// Independent oracles used by the tests. Nothing here may call back into the
// implementation paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dlalab/rng.hpp"
#include "dlalab/wedge.hpp"

namespace oracles {

// Law of the reflected simple walk (|S_n| with |S|=0 forced to 1) by direct
// forward recursion; the c = 0 chain must match it.
inline std::vector<double> reflected_walk_law(std::int64_t n) {
    std::vector<double> cur(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> next(cur.size(), 0.0);
    cur[0] = 1.0;
    for (std::int64_t i = 0; i < n; ++i) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::int64_t k = 0; k <= i; ++k) {
            const double p = cur[static_cast<std::size_t>(k)];
            if (p == 0.0) continue;
            if (k == 0) {
                next[1] += p;
            } else {
                next[static_cast<std::size_t>(k - 1)] += 0.5 * p;
                next[static_cast<std::size_t>(k + 1)] += 0.5 * p;
            }
        }
        cur.swap(next);
    }
    return cur;
}

// Brute-force evaluation of sum_{k >= start} exp(-c k^g) in extended
// precision; terms below 1e-22 are dropped, which for the g used in tests
// leaves a remainder far inside the comparison tolerance.
inline long double tail_sum_brute(std::int64_t start, long double c, long double g) {
    long double sum = 0.0L;
    std::int64_t k = start;
    while (true) {
        const long double term = std::exp(-c * std::pow(static_cast<long double>(k), g));
        sum += term;
        ++k;
        if (term < 1e-22L) break;
    }
    return sum;
}

// Occupation-fraction samples of a +-1 walk: fraction of steps j in [1, n]
// with |W_j| >= thresholds[j]. Driven by raw generator bits.
inline std::vector<double> walk_occupation_samples(std::size_t samples,
                                                   std::int64_t steps,
                                                   const std::vector<double>& thresholds,
                                                   std::uint64_t base_seed) {
    std::vector<double> out(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        std::mt19937_64 gen(dlalab::split_seed(base_seed, s));
        std::int64_t w = 0;
        std::int64_t occ = 0;
        std::uint64_t bits = 0;
        int available = 0;
        for (std::int64_t j = 1; j <= steps; ++j) {
            if (available == 0) {
                bits = gen();
                available = 64;
            }
            w += (bits & 1u) ? 1 : -1;
            bits >>= 1;
            --available;
            const std::int64_t a = w < 0 ? -w : w;
            if (static_cast<double>(a) >= thresholds[static_cast<std::size_t>(j)]) ++occ;
        }
        out[s] = static_cast<double>(occ) / static_cast<double>(steps);
    }
    return out;
}

// Two-sample Kolmogorov-Smirnov distance.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) {
            ++i;
        } else {
            ++j;
        }
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

// Exact attachment law for one DLA particle against a fixed occupied set:
// solves the absorbing-walk linear system on the truncated wedge graph,
// mirroring the simulator's launch column, neighbor order and resample rule.
// Returns the probability that the particle attaches at `target`.
inline double attachment_hit_prob(const dlalab::WedgeGeometry& geom,
                                  const dlalab::WalkConfig& config,
                                  const std::vector<dlalab::LatticePoint>& occupied,
                                  dlalab::LatticePoint target) {
    auto pack = [](dlalab::LatticePoint p) {
        return (static_cast<std::uint64_t>(p.x) << 32) |
               static_cast<std::uint64_t>(p.y);
    };
    std::unordered_set<std::uint64_t> occ;
    std::int64_t l_tip = 0;
    for (const auto& p : occupied) {
        occ.insert(pack(p));
        if (p.x > l_tip) l_tip = p.x;
    }
    const std::int64_t x_launch = 2 * l_tip + config.launch_margin;
    const std::int64_t x_limit = 2 * x_launch;

    std::vector<std::int64_t> height(static_cast<std::size_t>(x_limit) + 2);
    for (std::int64_t x = 0; x < static_cast<std::int64_t>(height.size()); ++x) {
        height[static_cast<std::size_t>(x)] = dlalab::wedge_column_height(x, geom);
    }
    // state index for unoccupied (x, y), x in [1, x_limit]
    std::unordered_map<std::uint64_t, std::size_t> state;
    for (std::int64_t x = 1; x <= x_limit; ++x) {
        for (std::int64_t y = 0; y <= height[static_cast<std::size_t>(x)]; ++y) {
            const auto key = pack({x, y});
            if (!occ.count(key)) state.emplace(key, state.size());
        }
    }
    auto idx = [&](dlalab::LatticePoint p) { return state.at(pack(p)); };
    const std::size_t launch_var = state.size();  // p_launch as an extra unknown
    const std::size_t n = state.size() + 1;

    // Row-major dense system A p = rhs.
    std::vector<double> a(n * n, 0.0);
    std::vector<double> rhs(n, 0.0);
    for (const auto& [key, row] : state) {
        const std::int64_t x = static_cast<std::int64_t>(key >> 32);
        const std::int64_t y = static_cast<std::int64_t>(key & 0xffffffffu);
        a[row * n + row] = 1.0;
        // neighbor order mirrors the simulator: right, left, up, down
        std::vector<dlalab::LatticePoint> nbrs;
        nbrs.push_back({x + 1, y});
        if (x - 1 >= 0 && y <= height[static_cast<std::size_t>(x - 1)]) {
            nbrs.push_back({x - 1, y});
        }
        if (y + 1 <= height[static_cast<std::size_t>(x)]) nbrs.push_back({x, y + 1});
        if (y - 1 >= 0) nbrs.push_back({x, y - 1});
        const double w = 1.0 / static_cast<double>(nbrs.size());
        for (const auto& q : nbrs) {
            if (occ.count(pack(q))) {
                // absorbed; attachment site is the current state
                if (x == target.x && y == target.y) rhs[row] += w;
            } else if (q.x > x_limit) {
                a[row * n + launch_var] -= w;
            } else {
                a[row * n + idx(q)] -= w;
            }
        }
    }
    a[launch_var * n + launch_var] = 1.0;
    const std::int64_t y_max = height[static_cast<std::size_t>(x_launch)];
    const double w_launch = 1.0 / static_cast<double>(y_max + 1);
    for (std::int64_t y = 0; y <= y_max; ++y) {
        a[launch_var * n + idx({x_launch, y})] -= w_launch;
    }

    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        }
        if (piv != col) {
            for (std::size_t c2 = 0; c2 < n; ++c2) std::swap(a[col * n + c2], a[piv * n + c2]);
            std::swap(rhs[col], rhs[piv]);
        }
        const double d = a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / d;
            if (f == 0.0) continue;
            for (std::size_t c2 = col; c2 < n; ++c2) a[r * n + c2] -= f * a[col * n + c2];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> p(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double v = rhs[r];
        for (std::size_t c2 = r + 1; c2 < n; ++c2) v -= a[r * n + c2] * p[c2];
        p[r] = v / a[r * n + r];
    }
    return p[launch_var];
}

}  // namespace oracles

#pragma once

#include <cstdint>
#include <vector>

#include "dlalab/rng.hpp"

namespace dlalab {

struct LatticePoint {
    std::int64_t x = 0;
    std::int64_t y = 0;

    bool operator==(const LatticePoint&) const = default;
};

// The region {(x, y) : x >= 0, 0 <= y <= x^alpha}.
struct WedgeGeometry {
    double alpha = 0.5;

    void validate() const;
};

bool in_wedge(LatticePoint p, const WedgeGeometry& geom);

// Largest y with (x, y) in the wedge.
std::int64_t wedge_column_height(std::int64_t x, const WedgeGeometry& geom);

// Lazily extended table of column heights; the walk loop cannot afford a pow
// per neighbor test.
class ColumnHeights {
public:
    explicit ColumnHeights(const WedgeGeometry& geom) : geom_(geom) {}

    std::int64_t operator()(std::int64_t x) {
        if (x >= static_cast<std::int64_t>(heights_.size())) extend(x);
        return heights_[static_cast<std::size_t>(x)];
    }

private:
    void extend(std::int64_t x);

    WedgeGeometry geom_;
    std::vector<std::int64_t> heights_;
};

// Knobs of the walk-from-infinity approximation: walks launch uniformly on
// the column x = 2 * L + launch_margin and are resampled from it when they
// pass x = 2 * x_launch or exhaust the step budget.
struct WalkConfig {
    std::int64_t launch_margin = 64;
    std::int64_t step_budget = 10'000'000;
    int resample_cap = 1000;
};

// Aggregate grown from A_0 = {(0, 0)} by attaching, per particle, the last
// vertex a confined random walk visits before hitting the aggregate.
class WedgeAggregate {
public:
    WedgeAggregate();  // the seed aggregate {(0, 0)}

    std::size_t size() const { return particles_.size() + 1; }
    const std::vector<LatticePoint>& particles() const { return particles_; }

    bool occupied(LatticePoint p) const {
        if (p.x < 0 || p.y < 0 ||
            p.x >= static_cast<std::int64_t>(columns_.size())) {
            return false;
        }
        const auto& col = columns_[static_cast<std::size_t>(p.x)];
        return p.y < static_cast<std::int64_t>(col.size()) &&
               col[static_cast<std::size_t>(p.y)];
    }

    std::int64_t l_tip() const { return l_tip_; }
    std::int64_t r_tip() const { return r_tip_; }
    bool r_defined() const { return r_defined_; }
    std::int64_t column_count(std::int64_t x) const;

    // Also used for synthetic test configurations; site must be unoccupied.
    void add_site(LatticePoint p);

    // All occupied sites, seed first then attachment order.
    std::vector<LatticePoint> sites() const;

private:
    std::vector<LatticePoint> particles_;        // a_1..a_n, excludes the seed
    std::vector<std::vector<bool>> columns_;     // occupancy bitmap per column
    std::vector<std::int32_t> column_counts_;
    std::int64_t l_tip_ = 0;
    std::int64_t r_tip_ = 0;
    bool r_defined_ = false;
};

// One DLA attachment. Passing a ColumnHeights cache amortizes the boundary
// table across attachments. Throws ResourceCapError at the resample cap.
void attach_particle(WedgeAggregate& agg, const WedgeGeometry& geom,
                     UnitStream& stream, const WalkConfig& config = {},
                     ColumnHeights* heights = nullptr);

struct TipGap {
    std::int64_t l = 0;
    std::int64_t r = 0;
    bool r_defined = false;
    std::int64_t gap = 0;  // l - r when r is defined, else l
};

TipGap tip_gap(const WedgeAggregate& agg);

// Lattice-connected components of the aggregate minus the closed Euclidean
// ball of radius r.
int ends_estimate(const WedgeAggregate& agg, double r);

}  // namespace dlalab

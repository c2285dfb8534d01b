#include "dlalab/wedge.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "dlalab/errors.hpp"

namespace dlalab {

namespace {

std::uint64_t pack(LatticePoint p) {
    return (static_cast<std::uint64_t>(p.x) << 32) | static_cast<std::uint64_t>(p.y);
}

// Union-find with path halving.
struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void merge(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

void WedgeGeometry::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("wedge alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

bool in_wedge(LatticePoint p, const WedgeGeometry& geom) {
    if (p.x < 0 || p.y < 0) return false;
    if (p.x == 0) return p.y == 0;
    if (p.y == 0) return true;
    if (geom.alpha == 0.5) {
        // exact on the boundary, e.g. (4, 2)
        return p.y * p.y <= p.x;
    }
    const double bound = std::pow(static_cast<double>(p.x), geom.alpha);
    return static_cast<double>(p.y) <= bound * (1.0 + 1e-12);
}

std::int64_t wedge_column_height(std::int64_t x, const WedgeGeometry& geom) {
    if (x < 0) throw ValidationError("negative column");
    if (x == 0) return 0;
    std::int64_t h = static_cast<std::int64_t>(
        std::floor(std::pow(static_cast<double>(x), geom.alpha)));
    while (in_wedge({x, h + 1}, geom)) ++h;
    while (h > 0 && !in_wedge({x, h}, geom)) --h;
    return h;
}

void ColumnHeights::extend(std::int64_t x) {
    const std::size_t old = heights_.size();
    heights_.resize(static_cast<std::size_t>(x) + 1);
    for (std::size_t i = old; i < heights_.size(); ++i) {
        heights_[i] = wedge_column_height(static_cast<std::int64_t>(i), geom_);
    }
}

WedgeAggregate::WedgeAggregate() {
    columns_.push_back({true});
    column_counts_.push_back(1);
}

std::int64_t WedgeAggregate::column_count(std::int64_t x) const {
    if (x < 0 || x >= static_cast<std::int64_t>(column_counts_.size())) return 0;
    return column_counts_[static_cast<std::size_t>(x)];
}

void WedgeAggregate::add_site(LatticePoint p) {
    if (p.x < 0 || p.y < 0) throw ValidationError("site outside the quadrant");
    if (p.x >= static_cast<std::int64_t>(columns_.size())) {
        columns_.resize(static_cast<std::size_t>(p.x) + 1);
        column_counts_.resize(static_cast<std::size_t>(p.x) + 1, 0);
    }
    auto& col = columns_[static_cast<std::size_t>(p.x)];
    if (p.y >= static_cast<std::int64_t>(col.size())) {
        col.resize(static_cast<std::size_t>(p.y) + 1, false);
    }
    if (col[static_cast<std::size_t>(p.y)]) throw InvariantError("site already occupied");
    col[static_cast<std::size_t>(p.y)] = true;
    particles_.push_back(p);
    const std::int32_t count = ++column_counts_[static_cast<std::size_t>(p.x)];
    if (count == 1 && p.x > l_tip_) l_tip_ = p.x;
    if (count == 2) {
        r_defined_ = true;
        if (p.x > r_tip_) r_tip_ = p.x;
    }
}

std::vector<LatticePoint> WedgeAggregate::sites() const {
    std::vector<LatticePoint> all;
    all.reserve(size());
    all.push_back({0, 0});
    all.insert(all.end(), particles_.begin(), particles_.end());
    return all;
}

void attach_particle(WedgeAggregate& agg, const WedgeGeometry& geom,
                     UnitStream& stream, const WalkConfig& config,
                     ColumnHeights* heights) {
    geom.validate();
    ColumnHeights local(geom);
    ColumnHeights& h = heights ? *heights : local;

    const std::int64_t x_launch = 2 * agg.l_tip() + config.launch_margin;
    const std::int64_t x_limit = 2 * x_launch;
    const std::int64_t y_max = h(x_launch);

    for (int attempt = 0; attempt <= config.resample_cap; ++attempt) {
        LatticePoint pos{x_launch,
                         static_cast<std::int64_t>(
                             stream.next_below(static_cast<std::uint64_t>(y_max) + 1))};
        for (std::int64_t s = 0; s < config.step_budget; ++s) {
            // In-wedge neighbors; heights are non-decreasing in x, so the
            // right neighbor is always admissible.
            LatticePoint nbrs[4];
            int count = 0;
            nbrs[count++] = {pos.x + 1, pos.y};
            if (pos.x > 0 && pos.y <= h(pos.x - 1)) nbrs[count++] = {pos.x - 1, pos.y};
            if (pos.y + 1 <= h(pos.x)) nbrs[count++] = {pos.x, pos.y + 1};
            if (pos.y > 0) nbrs[count++] = {pos.x, pos.y - 1};

            const LatticePoint next =
                nbrs[stream.next_below(static_cast<std::uint64_t>(count))];
            if (agg.occupied(next)) {
                // the last vertex visited before hitting
                agg.add_site(pos);
                return;
            }
            pos = next;
            if (pos.x > x_limit) break;  // wandered off, resample
        }
    }
    throw ResourceCapError("resample cap exceeded while attaching a particle");
}

TipGap tip_gap(const WedgeAggregate& agg) {
    TipGap gap;
    gap.l = agg.l_tip();
    gap.r_defined = agg.r_defined();
    gap.r = gap.r_defined ? agg.r_tip() : 0;
    gap.gap = gap.r_defined ? gap.l - gap.r : gap.l;
    return gap;
}

int ends_estimate(const WedgeAggregate& agg, double r) {
    if (r < 0.0) throw ValidationError("radius must be >= 0");
    const double r2 = r * r;
    std::vector<LatticePoint> survivors;
    std::unordered_map<std::uint64_t, std::size_t> index;
    for (const LatticePoint& p : agg.sites()) {
        const double norm2 = static_cast<double>(p.x) * static_cast<double>(p.x) +
                             static_cast<double>(p.y) * static_cast<double>(p.y);
        if (norm2 > r2) {
            index.emplace(pack(p), survivors.size());
            survivors.push_back(p);
        }
    }
    if (survivors.empty()) return 0;

    UnionFind uf(survivors.size());
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        const LatticePoint p = survivors[i];
        for (const LatticePoint q : {LatticePoint{p.x + 1, p.y}, LatticePoint{p.x, p.y + 1}}) {
            const auto it = index.find(pack(q));
            if (it != index.end()) uf.merge(i, it->second);
        }
    }
    int components = 0;
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        if (uf.find(i) == i) ++components;
    }
    return components;
}

}  // namespace dlalab

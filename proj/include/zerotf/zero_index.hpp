#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "zerotf/hyperbolic.hpp"
#include "zerotf/zeros.hpp"

namespace zerotf {

/// Spatial index over a point pattern in the upper half-plane. Points are
/// bucketed by their y value (zero sets live on the grid's scale rows) with
/// x sorted within each bucket, so pseudo-hyperbolic disk queries reduce to a
/// chord interval per intersected row via the Euclidean-disk identity.
///
/// Ring tables precompute, per point, the number of pattern points inside a
/// pseudo-hyperbolic annulus around it; prefix sums then answer "sum of ring
/// counts over all points inside a query disk" in the same row-chord sweep.
///
/// Mutation (construction, add_ring_table) is single-threaded; afterwards all
/// queries are const and safe to run concurrently.
class ZeroIndex {
public:
    ZeroIndex() = default;

    explicit ZeroIndex(const std::vector<UHPPoint>& pts) {
        std::vector<UHPPoint> sorted = pts;
        std::sort(sorted.begin(), sorted.end(), [](const UHPPoint& a, const UHPPoint& b) {
            return a.y < b.y || (a.y == b.y && a.x < b.x);
        });
        for (const auto& p : sorted) {
            if (rows_.empty() || rows_.back().y != p.y) rows_.push_back({p.y, {}, {}});
            rows_.back().xs.push_back(p.x);
        }
        row_y_.reserve(rows_.size());
        for (const auto& r : rows_) row_y_.push_back(r.y);
        n_points_ = sorted.size();
    }

    explicit ZeroIndex(const ZeroSet& zs) : ZeroIndex(zs.points) {}

    std::size_t size() const { return n_points_; }

    /// Number of points with d_ph(center, .) < r (or <= r when inclusive).
    std::size_t count_in_disk(const UHPPoint& center, double r, bool inclusive = false) const {
        if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("count_in_disk: r must be in [0,1)");
        std::size_t total = 0;
        sweep_disk(center, r, inclusive, [&](const Row& row, std::size_t lo, std::size_t hi) {
            total += hi - lo;
            (void)row;
        });
        return total;
    }

    /// Number of points with |d_ph(center, .) - r0| < h, i.e. the open annulus
    /// r0-h < d < r0+h. The center itself never qualifies (d = 0 is excluded
    /// for r0 >= h), so rings around pattern points exclude self-pairs.
    std::size_t count_in_ring(const UHPPoint& center, double r0, double h) const {
        if (!(h > 0.0 && h <= r0)) throw std::invalid_argument("count_in_ring: need 0 < h <= r0");
        if (!(r0 + h < 1.0)) throw std::invalid_argument("count_in_ring: need r0 + h < 1");
        return count_in_disk(center, r0 + h, false) - count_in_disk(center, r0 - h, true);
    }

    /// Precompute a ring table: per pattern point, its count_in_ring(r0, h).
    /// Returns the table id used by ring_sum_in_disk.
    std::size_t add_ring_table(double r0, double h) {
        const std::size_t id = table_meta_.size();
        table_meta_.push_back({r0, h});
        for (auto& row : rows_) {
            std::vector<double> prefix(row.xs.size() + 1, 0.0);
            for (std::size_t i = 0; i < row.xs.size(); ++i) {
                const auto c = count_in_ring({row.xs[i], row.y}, r0, h);
                prefix[i + 1] = prefix[i] + static_cast<double>(c);
            }
            row.ring_prefix.push_back(std::move(prefix));
        }
        return id;
    }

    /// Sum of the precomputed ring counts over all pattern points inside the
    /// open disk D_ph(center, r1).
    double ring_sum_in_disk(const UHPPoint& center, double r1, std::size_t table) const {
        if (table >= table_meta_.size()) throw std::invalid_argument("ring_sum_in_disk: bad table id");
        double total = 0.0;
        sweep_disk(center, r1, false, [&](const Row& row, std::size_t lo, std::size_t hi) {
            const auto& p = row.ring_prefix[table];
            total += p[hi] - p[lo];
        });
        return total;
    }

    /// Pattern points inside the open disk (for brute-force comparisons).
    std::vector<UHPPoint> points_in_disk(const UHPPoint& center, double r) const {
        std::vector<UHPPoint> out;
        sweep_disk(center, r, false, [&](const Row& row, std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) out.push_back({row.xs[i], row.y});
        });
        return out;
    }

private:
    struct Row {
        double y;
        std::vector<double> xs;                        // sorted
        std::vector<std::vector<double>> ring_prefix;  // one prefix array per table
    };

    template <typename Fn>
    void sweep_disk(const UHPPoint& center, double r, bool inclusive, const Fn& fn) const {
        if (!(center.y > 0.0)) throw std::domain_error("disk query: center must have y > 0");
        if (r == 0.0 && !inclusive) return;
        const double ecy = euclidean_center_y(center.y, r);
        const double R = euclidean_radius(center.y, r);
        const auto first = std::lower_bound(row_y_.begin(), row_y_.end(), ecy - R) - row_y_.begin();
        for (std::size_t i = static_cast<std::size_t>(first); i < rows_.size(); ++i) {
            const Row& row = rows_[i];
            const double dy = row.y - ecy;
            if (dy > R) break;
            const double w2 = R * R - dy * dy;
            if (w2 < 0.0 || (!inclusive && w2 == 0.0)) continue;
            const double w = std::sqrt(w2);
            std::size_t lo, hi;
            if (inclusive) {  // |x - cx| <= w
                lo = std::lower_bound(row.xs.begin(), row.xs.end(), center.x - w) - row.xs.begin();
                hi = std::upper_bound(row.xs.begin(), row.xs.end(), center.x + w) - row.xs.begin();
            } else {  // |x - cx| < w
                lo = std::upper_bound(row.xs.begin(), row.xs.end(), center.x - w) - row.xs.begin();
                hi = std::lower_bound(row.xs.begin(), row.xs.end(), center.x + w) - row.xs.begin();
            }
            if (hi > lo) fn(row, lo, hi);
        }
    }

    std::vector<Row> rows_;
    std::vector<double> row_y_;
    struct TableMeta {
        double r0, h;
    };
    std::vector<TableMeta> table_meta_;
    std::size_t n_points_ = 0;
};

}  // namespace zerotf

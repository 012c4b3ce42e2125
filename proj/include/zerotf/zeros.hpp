#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "zerotf/cwt.hpp"
#include "zerotf/grid.hpp"

namespace zerotf {

/// Point z = x + iy in the upper half-plane (x time in seconds, y scale).
struct UHPPoint {
    double x;
    double y;
};

/// Zero pattern of a scalogram: strict local minima of the modulus. Points sit
/// on grid nodes (anchor indices kept for re-verification); with optional
/// quadratic refinement they move by at most half a cell.
struct ZeroSet {
    std::vector<UHPPoint> points;
    std::vector<std::size_t> rows;  ///< anchor scale index per point
    std::vector<std::size_t> cols;  ///< anchor time index per point
    TimeScaleGrid source_grid;

    std::size_t size() const { return points.size(); }
};

/// 4-neighbor detection is the default; the 8-neighbor variant exists for
/// experiments only (diagonal comparisons add cost without accuracy).
enum class Neighborhood { four, eight };

namespace detail {

/// Vertex offset of the parabola through (-1,a),(0,b),(1,c); clamped to half a cell.
inline double parabola_offset(double a, double b, double c) {
    const double denom = a - 2.0 * b + c;
    if (denom <= 0.0) return 0.0;
    double d = 0.5 * (a - c) / denom;
    if (d < -0.5) d = -0.5;
    if (d > 0.5) d = 0.5;
    return d;
}

/// Scan three consecutive modulus-squared rows for strict minima in the middle
/// row; emits (col, dx_cells, dy_cells) with offsets zero unless refinement is
/// requested.
template <typename Emit>
inline void scan_min_rows(const std::vector<double>& below, const std::vector<double>& mid,
                          const std::vector<double>& above, bool refine, Neighborhood nb,
                          const Emit& emit) {
    const std::size_t n = mid.size();
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double c = mid[k];
        if (!(c < mid[k - 1] && c < mid[k + 1] && c < below[k] && c < above[k])) continue;
        if (nb == Neighborhood::eight &&
            !(c < below[k - 1] && c < below[k + 1] && c < above[k - 1] && c < above[k + 1]))
            continue;
        double dx = 0.0, dy = 0.0;
        if (refine) {
            dx = parabola_offset(mid[k - 1], c, mid[k + 1]);
            dy = parabola_offset(below[k], c, above[k]);
        }
        emit(k, dx, dy);
    }
}

}  // namespace detail

/// All interior grid points where |W| is strictly smaller than at the 4 axis
/// neighbors. Boundary rows/columns are never reported; ties produce nothing.
/// Comparison uses |W|^2 (strictly monotone in the modulus).
///
/// refine=true shifts each zero to the vertex of the 1D parabolas through the
/// minimum and its neighbors (off by default; grid positions keep count
/// statistics directly comparable across runs).
inline ZeroSet extract_zeros(const Scalogram& sc, bool refine = false,
                             Neighborhood nb = Neighborhood::four) {
    if (sc.n_scales() < 3 || sc.n_times() < 3)
        throw std::invalid_argument("extract_zeros: scalogram must be at least 3x3");
    ZeroSet zs;
    zs.source_grid = sc.grid;
    const double log_ratio = std::log(sc.grid.scale_ratio());
    const double dt = sc.grid.time_step();
    std::vector<std::vector<double>> mod2(sc.n_scales());
    for (std::size_t j = 0; j < sc.n_scales(); ++j) {
        mod2[j].resize(sc.n_times());
        for (std::size_t k = 0; k < sc.n_times(); ++k) mod2[j][k] = std::norm(sc.values[j][k]);
    }
    for (std::size_t j = 1; j + 1 < sc.n_scales(); ++j) {
        detail::scan_min_rows(mod2[j - 1], mod2[j], mod2[j + 1], refine, nb,
                              [&](std::size_t k, double dx, double dy) {
                                  zs.points.push_back({sc.grid.times[k] + dx * dt,
                                                       sc.grid.scales[j] * std::exp(dy * log_ratio)});
                                  zs.rows.push_back(j);
                                  zs.cols.push_back(k);
                              });
    }
    return zs;
}

/// Zero extraction straight from the signal, keeping only three modulus rows
/// in memory. Produces the same zero set as extract_zeros(forward_cwt(...)).
inline ZeroSet extract_zeros_streaming(const SignalBuffer& signal, const WaveletParams& params,
                                       const TimeScaleGrid& grid, bool refine = false,
                                       double max_support_fraction = 1.0,
                                       Neighborhood nb = Neighborhood::four) {
    if (grid.scales.size() < 3 || grid.times.size() < 3)
        throw std::invalid_argument("extract_zeros: grid must be at least 3x3");
    ZeroSet zs;
    zs.source_grid = grid;
    const double log_ratio = std::log(grid.scale_ratio());
    const double dt = grid.time_step();
    std::vector<std::vector<double>> buf;
    scan_cwt(signal, params, grid,
             [&](std::size_t j, const std::vector<cplx>& row) {
                 std::vector<double> mod2(row.size());
                 for (std::size_t k = 0; k < row.size(); ++k) mod2[k] = std::norm(row[k]);
                 buf.push_back(std::move(mod2));
                 if (buf.size() == 3) {
                     const std::size_t mid = j - 1;
                     detail::scan_min_rows(buf[0], buf[1], buf[2], refine, nb,
                                           [&](std::size_t k, double dx, double dy) {
                                               zs.points.push_back({grid.times[k] + dx * dt,
                                                                    grid.scales[mid] *
                                                                        std::exp(dy * log_ratio)});
                                               zs.rows.push_back(mid);
                                               zs.cols.push_back(k);
                                           });
                     buf.erase(buf.begin());
                 }
             },
             max_support_fraction);
    return zs;
}

/// Axis-aligned window in the upper half-plane.
struct Window {
    double t_min, t_max;
    double y_min, y_max;

    bool contains(const UHPPoint& p) const {
        return p.x >= t_min && p.x <= t_max && p.y >= y_min && p.y <= y_max;
    }
};

/// Number of zeros inside a rectangular window.
inline std::size_t zero_density_map(const ZeroSet& zs, const Window& window) {
    std::size_t n = 0;
    for (const auto& p : zs.points)
        if (window.contains(p)) ++n;
    return n;
}

}  // namespace zerotf

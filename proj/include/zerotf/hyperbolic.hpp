#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "zerotf/common.hpp"
#include "zerotf/zeros.hpp"

namespace zerotf {

/// Pseudo-hyperbolic distance |z-w| / |z - conj(w)| on the upper half-plane.
/// Symmetric, in [0,1), zero iff the points coincide; invariant under joint
/// horizontal translation and positive scaling.
inline double ph_distance(const UHPPoint& z, const UHPPoint& w) {
    if (!(z.y > 0.0) || !(w.y > 0.0))
        throw std::domain_error("ph_distance: points must lie in the upper half-plane");
    const double dx = z.x - w.x;
    const double num = std::hypot(dx, z.y - w.y);
    const double den = std::hypot(dx, z.y + w.y);
    return num / den;
}

/// Disk of pseudo-hyperbolic radius r (open ball convention throughout).
struct PHDisk {
    UHPPoint center;
    double radius;  ///< in (0,1)

    void validate() const {
        if (!(radius > 0.0 && radius < 1.0))
            throw std::invalid_argument("PHDisk: radius must be in (0,1)");
        if (!(center.y > 0.0)) throw std::invalid_argument("PHDisk: center must have y > 0");
    }
};

inline bool ph_ball_contains(const PHDisk& disk, const UHPPoint& z) {
    return ph_distance(disk.center, z) < disk.radius;
}

/// The invariant size factor r^2 / (1-r^2) of a pseudo-hyperbolic disk; the
/// expected zero count is alpha times this. Independent of the center.
inline double hyperbolic_area(const PHDisk& disk) {
    disk.validate();
    const double r2 = disk.radius * disk.radius;
    return r2 / (1.0 - r2);
}

/// A pseudo-hyperbolic disk is a Euclidean disk with shifted center:
/// D_ph(u+iv, r) = D_euc(u + i v(1+r^2)/(1-r^2), 2rv/(1-r^2)).
inline double euclidean_center_y(double v, double r) { return v * (1.0 + r * r) / (1.0 - r * r); }
inline double euclidean_radius(double v, double r) { return 2.0 * r * v / (1.0 - r * r); }

/// Observation window with a pseudo-hyperbolic standoff from its boundary.
/// Points qualify when their distance to every boundary edge exceeds margin
/// *and* they clear a per-scale time margin of time_margin_factor * y from the
/// vertical edges (the circular-convolution wrap region of the transform).
struct RegionOfInterest {
    Window window;
    double margin = 0.0;              ///< pseudo-hyperbolic standoff, in [0,1)
    double time_margin_factor = 6.0;  ///< wrap margin per scale, in units of y

    void validate() const {
        if (!(margin >= 0.0 && margin < 1.0))
            throw std::invalid_argument("RegionOfInterest: margin must be in [0,1)");
        if (!(window.y_min > 0.0) || !(window.y_max > window.y_min) ||
            !(window.t_max > window.t_min))
            throw std::invalid_argument("RegionOfInterest: malformed window");
    }
};

namespace detail {

/// Distance to a horizontal boundary segment y = c, t in [t0,t1]. The foot of
/// the minimum is directly above/below the point; corners take over outside
/// the segment's span.
inline double ph_distance_to_hseg(const UHPPoint& z, double c, double t0, double t1) {
    const double t = std::clamp(z.x, t0, t1);
    return ph_distance(z, {t, c});
}

/// Distance to a vertical boundary segment t = c, y in [y0,y1]. Along the
/// full line the minimizer is at height hypot(x-c, y), giving distance
/// sqrt((v-y)/(v+y)); the segment clamps that height to its range.
inline double ph_distance_to_vseg(const UHPPoint& z, double c, double y0, double y1) {
    const double v = std::clamp(std::hypot(z.x - c, z.y), y0, y1);
    return ph_distance(z, {c, v});
}

}  // namespace detail

/// Minimum pseudo-hyperbolic distance from a point to the window boundary,
/// evaluated per edge in closed form (the per-edge minimizers above). Dense
/// sampling of the edges converges to this from above and is used as the test
/// oracle.
inline double boundary_ph_distance(const Window& w, const UHPPoint& z) {
    double d = detail::ph_distance_to_hseg(z, w.y_min, w.t_min, w.t_max);
    d = std::min(d, detail::ph_distance_to_hseg(z, w.y_max, w.t_min, w.t_max));
    d = std::min(d, detail::ph_distance_to_vseg(z, w.t_min, w.y_min, w.y_max));
    d = std::min(d, detail::ph_distance_to_vseg(z, w.t_max, w.y_min, w.y_max));
    return d;
}

/// Sampled variant: minimum over n geometric samples per vertical segment and
/// n uniform samples per horizontal segment.
inline double boundary_ph_distance_sampled(const Window& w, const UHPPoint& z, std::size_t n) {
    double d = 1.0;
    const double lr = std::log(w.y_max / w.y_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = w.t_min + (w.t_max - w.t_min) * static_cast<double>(i) /
                                       static_cast<double>(n - 1);
        d = std::min(d, ph_distance(z, {t, w.y_min}));
        d = std::min(d, ph_distance(z, {t, w.y_max}));
        const double y = w.y_min * std::exp(lr * static_cast<double>(i));
        d = std::min(d, ph_distance(z, {w.t_min, y}));
        d = std::min(d, ph_distance(z, {w.t_max, y}));
    }
    return d;
}

inline bool roi_contains(const RegionOfInterest& roi, const UHPPoint& z) {
    if (!roi.window.contains(z)) return false;
    if (z.x - roi.window.t_min <= roi.time_margin_factor * z.y) return false;
    if (roi.window.t_max - z.x <= roi.time_margin_factor * z.y) return false;
    return boundary_ph_distance(roi.window, z) > roi.margin;
}

inline std::vector<UHPPoint> roi_filter(const std::vector<UHPPoint>& pts,
                                        const RegionOfInterest& roi) {
    roi.validate();
    std::vector<UHPPoint> out;
    out.reserve(pts.size());
    for (const auto& p : pts)
        if (roi_contains(roi, p)) out.push_back(p);
    return out;
}

inline ZeroSet roi_filter(const ZeroSet& zs, const RegionOfInterest& roi) {
    roi.validate();
    ZeroSet out;
    out.source_grid = zs.source_grid;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if (roi_contains(roi, zs.points[i])) {
            out.points.push_back(zs.points[i]);
            out.rows.push_back(zs.rows[i]);
            out.cols.push_back(zs.cols[i]);
        }
    }
    return out;
}

/// ROI over the detectable part of a grid: minima are only reported at
/// interior nodes, so the window shrinks by one row/column on each side.
inline RegionOfInterest default_roi(const TimeScaleGrid& grid, double margin,
                                    double time_margin_factor = 6.0) {
    if (grid.times.size() < 4 || grid.scales.size() < 4)
        throw std::invalid_argument("default_roi: grid too small");
    RegionOfInterest roi;
    roi.window = {grid.times[1], grid.times[grid.times.size() - 2], grid.scales[1],
                  grid.scales[grid.scales.size() - 2]};
    roi.margin = margin;
    roi.time_margin_factor = time_margin_factor;
    roi.validate();
    return roi;
}

}  // namespace zerotf

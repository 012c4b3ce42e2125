#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "zerotf/common.hpp"
#include "zerotf/wavelet.hpp"

namespace zerotf {

/// Time-scale sampling grid. Times map to the horizontal coordinate x and
/// scales to the vertical coordinate y of the upper half-plane. Scales are
/// geometrically spaced (constant ratio), matching the scale invariance of
/// the hyperbolic measure.
struct TimeScaleGrid {
    std::vector<double> times;   ///< strictly increasing, seconds
    std::vector<double> scales;  ///< strictly increasing, positive

    std::size_t n_times() const { return times.size(); }
    std::size_t n_scales() const { return scales.size(); }

    /// Common ratio of the geometric scale ladder.
    double scale_ratio() const {
        if (scales.size() < 2) throw std::invalid_argument("grid needs >= 2 scales");
        return scales[1] / scales[0];
    }

    double time_step() const {
        if (times.size() < 2) throw std::invalid_argument("grid needs >= 2 times");
        return times[1] - times[0];
    }

    void validate() const {
        if (times.size() < 2 || scales.size() < 2)
            throw std::invalid_argument("TimeScaleGrid: need at least 2 times and 2 scales");
        for (std::size_t i = 0; i + 1 < times.size(); ++i)
            if (!(times[i] < times[i + 1]))
                throw std::invalid_argument("TimeScaleGrid: times must strictly increase");
        if (!(scales.front() > 0.0))
            throw std::invalid_argument("TimeScaleGrid: scales must be positive");
        const double r = scales[1] / scales[0];
        for (std::size_t j = 0; j + 1 < scales.size(); ++j) {
            double rr = scales[j + 1] / scales[j];
            if (std::abs(rr / r - 1.0) > 1e-9)
                throw std::invalid_argument("TimeScaleGrid: scales must be geometric");
        }
    }
};

/// Geometric scale ladder covering [f_min, f_max] (peak-frequency convention)
/// with the times of the given sampling. Scales run from high frequency (small
/// y) to low frequency (large y).
inline TimeScaleGrid build_grid(const WaveletParams& params, std::size_t length,
                                double sample_interval, double origin_time,
                                double f_min_hz, double f_max_hz,
                                unsigned voices_per_octave) {
    if (!(f_min_hz > 0.0) || !(f_max_hz > f_min_hz))
        throw std::invalid_argument("build_grid: need 0 < f_min < f_max");
    if (voices_per_octave == 0) throw std::invalid_argument("build_grid: voices must be >= 1");
    TimeScaleGrid g;
    g.times.resize(length);
    for (std::size_t l = 0; l < length; ++l)
        g.times[l] = origin_time + static_cast<double>(l) * sample_interval;
    const double y_min = params.scale_for_frequency(f_max_hz);
    const double y_max = params.scale_for_frequency(f_min_hz);
    const double ratio = std::pow(2.0, 1.0 / static_cast<double>(voices_per_octave));
    const auto n = static_cast<std::size_t>(
                       std::ceil(std::log(y_max / y_min) / std::log(ratio))) + 1;
    g.scales.resize(n);
    for (std::size_t j = 0; j < n; ++j) g.scales[j] = y_min * std::pow(ratio, static_cast<double>(j));
    return g;
}

/// Same scale ladder, times decimated by an integer stride (used for mask and
/// statistic evaluation where per-sample time resolution is unnecessary).
inline TimeScaleGrid decimate_times(const TimeScaleGrid& g, std::size_t stride) {
    if (stride == 0) throw std::invalid_argument("decimate_times: stride must be >= 1");
    TimeScaleGrid out;
    out.scales = g.scales;
    for (std::size_t k = 0; k < g.times.size(); k += stride) out.times.push_back(g.times[k]);
    return out;
}

}  // namespace zerotf

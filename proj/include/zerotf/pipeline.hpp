#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "zerotf/cwt.hpp"
#include "zerotf/grid.hpp"
#include "zerotf/hyperbolic.hpp"
#include "zerotf/mask.hpp"
#include "zerotf/signal.hpp"
#include "zerotf/wavelet.hpp"
#include "zerotf/zeros.hpp"

namespace zerotf {

/// Everything needed to rebuild an analysis grid; doubles as the grid
/// descriptor stored in calibration profiles (masks are only valid against
/// the family they were calibrated on).
///
/// voices_per_octave trades vertical resolution against cost: count
/// statistics converge to the continuum values as the ladder refines (64 is
/// table-grade, 16 is fine for filtering where thresholds are calibrated on
/// the same grid anyway).
struct PipelineConfig {
    double alpha = 300.0;
    double sample_rate = 44100.0;
    std::size_t n_samples = 88200;
    double f_min = 100.0;
    double f_max = 10000.0;
    unsigned voices_per_octave = 16;
    std::size_t mask_time_stride = 64;   ///< statistic grid decimation in time
    double time_margin_factor = 6.0;     ///< circular-wrap exclusion, units of y
    double max_support_fraction = 1.0;

    double sample_interval() const { return 1.0 / sample_rate; }
    double duration() const { return static_cast<double>(n_samples) / sample_rate; }

    bool same_family(const PipelineConfig& o) const {
        return alpha == o.alpha && sample_rate == o.sample_rate && n_samples == o.n_samples &&
               f_min == o.f_min && f_max == o.f_max && voices_per_octave == o.voices_per_octave &&
               mask_time_stride == o.mask_time_stride &&
               time_margin_factor == o.time_margin_factor;
    }
};

inline WaveletParams wavelet_of(const PipelineConfig& c) { return WaveletParams::make(c.alpha); }

inline TimeScaleGrid full_grid(const PipelineConfig& c) {
    return build_grid(wavelet_of(c), c.n_samples, c.sample_interval(), 0.0, c.f_min, c.f_max,
                      c.voices_per_octave);
}

inline TimeScaleGrid mask_grid(const PipelineConfig& c) {
    return decimate_times(full_grid(c), c.mask_time_stride);
}

/// ROI sized to a mask configuration so that every disk and ring query from an
/// admitted center stays inside the detectable zero coverage.
inline RegionOfInterest roi_for(const PipelineConfig& c, const TimeScaleGrid& grid,
                                const MaskConfig& mask_cfg) {
    return default_roi(grid, mask_cfg.query_reach(), c.time_margin_factor);
}

/// White-noise zeros under a configuration (streaming; the scalogram is never
/// materialized).
inline ZeroSet zeros_from_noise(const PipelineConfig& c, NoiseKind kind, std::uint64_t seed,
                                bool refine = false) {
    const SignalBuffer noise =
        generate_white_noise(c.n_samples, c.sample_interval(), kind, seed);
    return extract_zeros_streaming(noise, wavelet_of(c), full_grid(c), refine,
                                   c.max_support_fraction);
}

inline ZeroSet zeros_of_signal(const PipelineConfig& c, const SignalBuffer& sig,
                               bool refine = false) {
    return extract_zeros_streaming(sig, wavelet_of(c), full_grid(c), refine,
                                   c.max_support_fraction);
}

}  // namespace zerotf

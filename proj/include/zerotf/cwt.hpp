#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "zerotf/common.hpp"
#include "zerotf/fft.hpp"
#include "zerotf/grid.hpp"
#include "zerotf/signal.hpp"
#include "zerotf/wavelet.hpp"

namespace zerotf {

/// Complex transform values on a time-scale grid, values[j][k] at
/// (times[k], scales[j]). Normalization: the analyzing wavelet is
/// L2-normalized per scale and the row is divided by T_s, so white noise of
/// per-sample variance T_s yields unit per-pixel variance at every scale.
struct Scalogram {
    TimeScaleGrid grid;
    std::vector<std::vector<cplx>> values;  ///< [scale][time]
    WaveletParams params;

    std::size_t n_scales() const { return values.size(); }
    std::size_t n_times() const { return values.empty() ? 0 : values.front().size(); }
};

namespace detail {

/// Angular DFT frequency of bin k for an L-point transform at spacing T_s.
inline double dft_xi(std::size_t k, std::size_t n, double sample_interval) {
    const auto kk = (k <= n / 2) ? static_cast<double>(k)
                                 : static_cast<double>(k) - static_cast<double>(n);
    return 2.0 * pi * kk / (static_cast<double>(n) * sample_interval);
}

/// Per-scale frequency multiplier sqrt(y) psi_hat(y xi_k); zero on xi <= 0.
inline std::vector<double> scale_multiplier(const WaveletParams& p, double scale,
                                            std::size_t n, double sample_interval) {
    std::vector<double> m(n, 0.0);
    const double sy = std::sqrt(scale);
    for (std::size_t k = 1; k <= n / 2; ++k)
        m[k] = sy * wavelet_freq(p, scale * dft_xi(k, n, sample_interval));
    return m;
}

inline void check_forward_args(const SignalBuffer& signal, const TimeScaleGrid& grid,
                               double max_support_fraction) {
    if (signal.size() == 0) throw std::invalid_argument("forward_cwt: empty signal");
    if (grid.times.size() != signal.size())
        throw std::invalid_argument("forward_cwt: grid times must match the signal sampling");
    const double ts = signal.sample_interval;
    if (std::abs(grid.times.front() - signal.origin_time) > 1e-9 * ts ||
        std::abs(grid.time_step() - ts) > 1e-9 * ts)
        throw std::invalid_argument("forward_cwt: grid times must match the signal sampling");
    // A scale is boundary-dominated once the circular-wrap margin (about 6*y of
    // heavy wavelet tail on each side) swallows the whole record.
    const double limit = max_support_fraction * signal.duration();
    if (6.0 * grid.scales.back() > limit)
        throw std::invalid_argument("forward_cwt: largest scale is boundary-dominated for this signal length");
}

}  // namespace detail

/// Stream the transform one scale row at a time (smallest scale first) without
/// materializing the full matrix. One forward FFT of the signal, then one
/// multiply + inverse FFT per scale. Boundary handling is circular.
inline void scan_cwt(const SignalBuffer& signal, const WaveletParams& params,
                     const TimeScaleGrid& grid,
                     const std::function<void(std::size_t, const std::vector<cplx>&)>& on_row,
                     double max_support_fraction = 1.0) {
    detail::check_forward_args(signal, grid, max_support_fraction);
    const std::size_t n = signal.size();
    const std::vector<cplx> spectrum = Fft::forward(signal.samples);
    std::vector<cplx> prod(n);
    const double inv_ts = 1.0 / signal.sample_interval;
    for (std::size_t j = 0; j < grid.scales.size(); ++j) {
        const auto m = detail::scale_multiplier(params, grid.scales[j], n, signal.sample_interval);
        for (std::size_t k = 0; k < n; ++k) prod[k] = spectrum[k] * m[k];
        std::vector<cplx> row = Fft::inverse(prod);
        for (auto& v : row) v *= inv_ts;
        on_row(j, row);
    }
}

/// Full transform on the grid; linear in the signal.
inline Scalogram forward_cwt(const SignalBuffer& signal, const WaveletParams& params,
                             const TimeScaleGrid& grid, double max_support_fraction = 1.0) {
    Scalogram sc;
    sc.grid = grid;
    sc.params = params;
    sc.values.resize(grid.scales.size());
    scan_cwt(signal, params, grid,
             [&](std::size_t j, const std::vector<cplx>& row) { sc.values[j] = row; },
             max_support_fraction);
    return sc;
}

/// Dual-frame Riemann-sum reconstruction
///   s(t) = (1/C_psi) sum_{j,k} W[j][k] psi_{x_k,y_j}(t) dx dy_j / y_j^2
/// with dy_j = y_j log(ratio) for the geometric ladder, evaluated per row in
/// the frequency domain. Returns the analytic (positive-frequency) signal;
/// real inputs are recovered as 2*Re (see to_real_signal).
inline SignalBuffer inverse_cwt(const Scalogram& sc) {
    if (sc.n_scales() < 8)
        throw std::invalid_argument("inverse_cwt: need at least 8 scales for reconstruction");
    const std::size_t n = sc.n_times();
    if (n == 0) throw std::invalid_argument("inverse_cwt: empty scalogram");
    const double ts = sc.grid.time_step();
    const double log_ratio = std::log(sc.grid.scale_ratio());
    std::vector<cplx> acc(n, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < sc.n_scales(); ++j) {
        const auto m = detail::scale_multiplier(sc.params, sc.grid.scales[j], n, ts);
        const std::vector<cplx> rowhat = Fft::forward(sc.values[j]);
        const double w = 1.0 / sc.grid.scales[j];
        for (std::size_t k = 1; k <= n / 2; ++k) acc[k] += rowhat[k] * (m[k] * w);
    }
    SignalBuffer out;
    out.sample_interval = ts;
    out.origin_time = sc.grid.times.front();
    out.samples = Fft::inverse(acc);
    const double gain = ts * log_ratio / sc.params.admissibility;
    for (auto& v : out.samples) v *= gain;
    return out;
}

/// Real signal from an analytic reconstruction (doubles the positive-frequency
/// part; exact for zero-mean real inputs without Nyquist content).
inline std::vector<double> to_real_signal(const SignalBuffer& analytic) {
    std::vector<double> out(analytic.size());
    for (std::size_t l = 0; l < out.size(); ++l) out[l] = 2.0 * analytic.samples[l].real();
    return out;
}

}  // namespace zerotf

#pragma once

#include <cmath>
#include <stdexcept>

#include "zerotf/common.hpp"

namespace zerotf {

/// Analytic wavelet of order alpha with frequency profile xi^((alpha-1)/2) exp(-xi)
/// on xi >= 0. All derived constants refer to the L2-normalized wavelet.
///
/// Fourier convention: s_hat(xi) = integral s(t) exp(-i xi t) dt with angular
/// frequency xi, so ||psi||^2 = (1/2pi) integral |psi_hat|^2 dxi.
struct WaveletParams {
    double alpha;          ///< order, > 1 (admissible regime)
    double log_l2_norm;    ///< log of the time-domain L2 norm of the raw profile
    double admissibility;  ///< C_psi of the normalized wavelet
    double peak_xi;        ///< argmax of the frequency profile, (alpha-1)/2

    static WaveletParams make(double alpha) {
        if (!(alpha > 1.0))
            throw std::invalid_argument("WaveletParams: alpha must be > 1");
        WaveletParams p;
        p.alpha = alpha;
        // ||psi||^2 = Gamma(alpha) / (2pi * 2^alpha)
        p.log_l2_norm = 0.5 * (std::lgamma(alpha) - alpha * std::log(2.0) - std::log(2.0 * pi));
        p.admissibility = 4.0 * pi / (alpha - 1.0);
        p.peak_xi = 0.5 * (alpha - 1.0);
        return p;
    }

    /// Frequency (Hz) associated with scale y via the profile peak.
    double peak_frequency(double scale) const { return peak_xi / (2.0 * pi * scale); }
    /// Scale associated with a frequency in Hz.
    double scale_for_frequency(double hz) const { return peak_xi / (2.0 * pi * hz); }
};

/// L2-normalized frequency profile, evaluated in the log domain so that orders
/// up to alpha ~ 1000 neither overflow nor lose the peak. Returns 0 at xi = 0.
inline double wavelet_freq(const WaveletParams& p, double xi) {
    if (xi < 0.0) throw std::domain_error("wavelet_freq: xi must be >= 0");
    if (xi == 0.0) return 0.0;
    double e = 0.5 * (p.alpha - 1.0) * std::log(xi) - xi - p.log_l2_norm;
    return std::exp(e);  // underflows gracefully to 0 far in the tail
}

/// Time-domain wavelet under the same conventions,
///   psi(t) = Gamma((alpha+1)/2) / (2pi ||psi||) * (1 - i t)^(-(alpha+1)/2),
/// evaluated via complex logs. Serves as the closed-form counterpart of
/// wavelet_freq for cross-checks.
inline cplx wavelet_time(const WaveletParams& p, double t) {
    const double half = 0.5 * (p.alpha + 1.0);
    // log(1 - i t) = 0.5*log(1+t^2) - i*atan(t)
    const double lre = 0.5 * std::log1p(t * t);
    const double lim = -std::atan(t);
    const double amp = std::lgamma(half) - std::log(2.0 * pi) - p.log_l2_norm - half * lre;
    const double phase = -half * lim;
    return std::exp(amp) * cplx(std::cos(phase), std::sin(phase));
}

}  // namespace zerotf

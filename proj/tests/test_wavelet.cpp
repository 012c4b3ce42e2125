#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "zerotf/fft.hpp"
#include "zerotf/wavelet.hpp"

using namespace zerotf;

TEST_CASE("frequency profile vanishes at the origin and rejects negatives") {
    const auto p = WaveletParams::make(300.0);
    CHECK(wavelet_freq(p, 0.0) == 0.0);
    CHECK_THROWS_AS(wavelet_freq(p, -1.0), std::domain_error);
}

TEST_CASE("profile peaks at (alpha-1)/2") {
    const auto p = WaveletParams::make(300.0);
    CHECK(p.peak_xi == Catch::Approx(149.5));
    const double vpeak = wavelet_freq(p, p.peak_xi);
    for (double xi : {1.0, 50.0, 140.0, 149.0, 150.0, 160.0, 300.0, 1000.0})
        CHECK(wavelet_freq(p, xi) <= vpeak);
    // strictly maximal against a fine sweep around the peak
    for (double d : {-2.0, -1.0, -0.1, 0.1, 1.0, 2.0})
        CHECK(wavelet_freq(p, p.peak_xi + d) < vpeak);
}

TEST_CASE("normalization matches a brute-force quadrature at alpha=3") {
    // trapezoid norm of the raw profile xi*exp(-xi), time-domain L2 via Parseval
    const double dxi = 1e-4;
    double acc = 0.0;
    for (double xi = dxi; xi < 60.0; xi += dxi) {
        const double v = xi * std::exp(-xi);
        acc += v * v * dxi;
    }
    const double norm = std::sqrt(acc / (2.0 * pi));
    const auto p = WaveletParams::make(3.0);
    const double expect = 1.0 * std::exp(-1.0) / norm;
    CHECK(wavelet_freq(p, 1.0) == Catch::Approx(expect).epsilon(1e-8));
}

TEST_CASE("log-domain evaluation stays finite over the working range") {
    for (double alpha : {1.5, 3.0, 30.0, 300.0, 1000.0}) {
        const auto p = WaveletParams::make(alpha);
        CHECK(p.admissibility > 0.0);
        CHECK(std::isfinite(p.admissibility));
        for (double xi : {0.0, 1e-12, 1e-3, 1.0, p.peak_xi, 1e3, 1e6}) {
            const double v = wavelet_freq(p, xi);
            CHECK(std::isfinite(v));
            CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("time-domain wavelet is maximal and real-positive at t=0") {
    const auto p = WaveletParams::make(3.0);
    const cplx v0 = wavelet_time(p, 0.0);
    CHECK(v0.real() > 0.0);
    CHECK(v0.imag() == Catch::Approx(0.0).margin(1e-15));
    for (double t : {-5.0, -1.0, -0.2, 0.3, 1.0, 4.0, 20.0})
        CHECK(std::abs(wavelet_time(p, t)) < std::abs(v0));
}

TEST_CASE("high-order wavelet decays steeply in time") {
    const auto p = WaveletParams::make(300.0);
    CHECK(std::abs(wavelet_time(p, 10.0)) < 1e-3 * std::abs(wavelet_time(p, 0.0)));
}

TEST_CASE("time-domain closed form agrees with the inverse FFT of the profile") {
    // psi(t) = (1/2pi) int psi_hat(xi) e^{i xi t} dxi discretized over a long
    // span so periodization images stay below the tolerance
    const auto p = WaveletParams::make(3.0);
    const std::size_t n = 1u << 22;
    const double span = 4000.0;
    const double dxi = 2.0 * pi / span;
    std::vector<cplx> vals(n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k <= n / 2; ++k) vals[k] = wavelet_freq(p, static_cast<double>(k) * dxi);
    std::vector<cplx> rec = Fft::inverse(vals);
    const double gain = static_cast<double>(n) * dxi / (2.0 * pi);
    double worst = 0.0;
    for (std::size_t m = 0; m < n; m += 7) {
        const double t = (m <= n / 2 ? static_cast<double>(m)
                                     : static_cast<double>(m) - static_cast<double>(n)) *
                         (span / static_cast<double>(n));
        worst = std::max(worst, std::abs(rec[m] * gain - wavelet_time(p, t)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("admissibility requires alpha > 1") {
    CHECK_THROWS_AS(WaveletParams::make(1.0), std::invalid_argument);
    CHECK_THROWS_AS(WaveletParams::make(0.5), std::invalid_argument);
}

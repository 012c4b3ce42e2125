#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <thread>
#include <vector>

#include "zerotf/cwt.hpp"
#include "zerotf/signal.hpp"

using namespace zerotf;

namespace {

struct Setup {
    WaveletParams params = WaveletParams::make(30.0);
    double fs = 4096.0;
    std::size_t n = 4096;
    TimeScaleGrid grid;

    Setup(double fmin = 60.0, double fmax = 700.0, unsigned voices = 16) {
        grid = build_grid(params, n, 1.0 / fs, 0.0, fmin, fmax, voices);
    }

    SignalBuffer noise(std::uint64_t seed) const {
        return generate_white_noise(n, 1.0 / fs, NoiseKind::complex_, seed);
    }
};

// direct evaluation of the transform as a circular discrete sum over samples;
// independent of the FFT path
cplx direct_cwt(const SignalBuffer& sig, const WaveletParams& p, double x, double y) {
    cplx acc(0.0, 0.0);
    for (std::size_t l = 0; l < sig.size(); ++l) {
        const double t = sig.time_of(l);
        acc += sig.samples[l] * std::conj(wavelet_time(p, (t - x) / y));
    }
    return acc / std::sqrt(y);
}

}  // namespace

TEST_CASE("zero signal maps to a zero scalogram") {
    Setup s;
    SignalBuffer sig;
    sig.sample_interval = 1.0 / s.fs;
    sig.samples.assign(s.n, cplx(0.0, 0.0));
    const auto sc = forward_cwt(sig, s.params, s.grid);
    for (const auto& row : sc.values)
        for (const auto& v : row) CHECK(v == cplx(0.0, 0.0));
}

TEST_CASE("transform is linear to machine precision") {
    Setup s;
    const auto a = s.noise(1);
    const auto b = s.noise(2);
    SignalBuffer mix = a;
    for (std::size_t l = 0; l < mix.size(); ++l)
        mix.samples[l] = 2.0 * a.samples[l] + cplx(0.0, -0.5) * b.samples[l];
    const auto wa = forward_cwt(a, s.params, s.grid);
    const auto wb = forward_cwt(b, s.params, s.grid);
    const auto wm = forward_cwt(mix, s.params, s.grid);
    double scale = 0.0, err = 0.0;
    for (std::size_t j = 0; j < wm.n_scales(); ++j)
        for (std::size_t k = 0; k < wm.n_times(); ++k) {
            const cplx want = 2.0 * wa.values[j][k] + cplx(0.0, -0.5) * wb.values[j][k];
            err = std::max(err, std::abs(wm.values[j][k] - want));
            scale = std::max(scale, std::abs(want));
        }
    CHECK(err < 1e-12 * scale);
}

TEST_CASE("impulse response matches the closed-form wavelet") {
    Setup s;
    SignalBuffer sig;
    sig.sample_interval = 1.0 / s.fs;
    sig.samples.assign(s.n, cplx(0.0, 0.0));
    const std::size_t l0 = s.n / 2;
    sig.samples[l0] = cplx(1.0, 0.0);
    const double t0 = sig.time_of(l0);
    const auto sc = forward_cwt(sig, s.params, s.grid);
    // mid scales, interior columns
    for (std::size_t j = s.grid.n_scales() / 4; j < 3 * s.grid.n_scales() / 4;
         j += s.grid.n_scales() / 8) {
        const double y = s.grid.scales[j];
        double worst = 0.0, ref = 0.0;
        for (std::size_t k = s.n / 4; k < 3 * s.n / 4; k += 16) {
            const double expect = std::abs(wavelet_time(s.params, (t0 - s.grid.times[k]) / y)) /
                                  std::sqrt(y);
            worst = std::max(worst, std::abs(std::abs(sc.values[j][k]) - expect));
            ref = std::max(ref, expect);
        }
        CHECK(worst < 1e-3 * ref);
    }
}

TEST_CASE("FFT path equals the direct circular sum on a small grid") {
    Setup s;
    const auto sig = s.noise(3);
    const auto sc = forward_cwt(sig, s.params, s.grid);
    for (std::size_t j : {s.grid.n_scales() / 3, s.grid.n_scales() / 2}) {
        for (std::size_t k : {s.n / 3, s.n / 2, 2 * s.n / 3}) {
            const cplx want = direct_cwt(sig, s.params, s.grid.times[k], s.grid.scales[j]);
            // the direct sum truncates the wavelet tail at the record edges;
            // interior columns at interior scales agree to the tail mass
            CHECK(std::abs(sc.values[j][k] - want) < 1e-6 * std::abs(want) + 1e-9);
        }
    }
}

TEST_CASE("shifting the input shifts interior scalogram columns") {
    Setup s;
    auto sig = s.noise(4);
    SignalBuffer shifted = sig;
    const std::size_t m = 32;
    for (std::size_t l = 0; l < sig.size(); ++l)
        shifted.samples[(l + m) % sig.size()] = sig.samples[l];
    const auto w0 = forward_cwt(sig, s.params, s.grid);
    const auto w1 = forward_cwt(shifted, s.params, s.grid);
    double err = 0.0, ref = 0.0;
    const std::size_t j = s.grid.n_scales() / 2;
    for (std::size_t k = s.n / 4; k < 3 * s.n / 4; ++k) {
        err = std::max(err, std::abs(w1.values[j][k + m] - w0.values[j][k]));
        ref = std::max(ref, std::abs(w0.values[j][k]));
    }
    CHECK(err < 1e-6 * ref);
}

TEST_CASE("roundtrip reconstruction of an in-band multitone reaches 30 dB") {
    Setup s(50.0, 1200.0, 12);
    const auto tone =
        make_multitone(s.n, 1.0 / s.fs, {200.0, 401.0, 333.0}, {1.0, 0.6, 0.3}, {0.1, 1.0, 2.0});
    const auto sc = forward_cwt(tone, s.params, s.grid);
    const auto rec = inverse_cwt(sc);
    const auto out = to_real_signal(rec);
    double ps = 0.0, pe = 0.0;
    for (std::size_t l = s.n / 10; l < s.n - s.n / 10; ++l) {
        const double want = tone.samples[l].real();
        ps += want * want;
        pe += (out[l] - want) * (out[l] - want);
    }
    CHECK(10.0 * std::log10(ps / pe) >= 30.0);
}

TEST_CASE("inverse of a zero scalogram is the zero signal") {
    Setup s;
    Scalogram sc;
    sc.grid = s.grid;
    sc.params = s.params;
    sc.values.assign(s.grid.n_scales(), std::vector<cplx>(s.grid.n_times(), cplx(0, 0)));
    const auto rec = inverse_cwt(sc);
    for (const auto& v : rec.samples) CHECK(v == cplx(0.0, 0.0));
}

TEST_CASE("reconstruction needs at least 8 scales") {
    Setup s;
    Scalogram sc;
    sc.grid = s.grid;
    sc.grid.scales.resize(7);
    sc.params = s.params;
    sc.values.assign(7, std::vector<cplx>(s.grid.n_times(), cplx(0, 0)));
    CHECK_THROWS_AS(inverse_cwt(sc), std::invalid_argument);
}

TEST_CASE("empty signals and boundary-dominated scales are rejected") {
    Setup s;
    SignalBuffer sig;
    sig.sample_interval = 1.0 / s.fs;
    CHECK_THROWS_AS(forward_cwt(sig, s.params, s.grid), std::invalid_argument);

    auto noise = s.noise(5);
    TimeScaleGrid big = s.grid;
    for (auto& y : big.scales) y *= 40.0;  // 6*y beyond the 1 s record
    CHECK_THROWS_AS(forward_cwt(noise, s.params, big), std::invalid_argument);
}

TEST_CASE("concurrent transforms see no shared state") {
    Setup s;
    const auto a = s.noise(8);
    const auto b = s.noise(9);
    const auto ref_a = forward_cwt(a, s.params, s.grid);
    const auto ref_b = forward_cwt(b, s.params, s.grid);
    Scalogram out_a, out_b;
    std::thread ta([&] { out_a = forward_cwt(a, s.params, s.grid); });
    std::thread tb([&] { out_b = forward_cwt(b, s.params, s.grid); });
    ta.join();
    tb.join();
    CHECK(out_a.values == ref_a.values);
    CHECK(out_b.values == ref_b.values);
}

TEST_CASE("streaming scan matches the materialized transform") {
    Setup s;
    const auto sig = s.noise(6);
    const auto sc = forward_cwt(sig, s.params, s.grid);
    scan_cwt(sig, s.params, s.grid, [&](std::size_t j, const std::vector<cplx>& row) {
        REQUIRE(row == sc.values[j]);
    });
}

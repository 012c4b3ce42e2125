#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "zerotf/signal.hpp"

using namespace zerotf;

TEST_CASE("complex white noise has the contracted moments") {
    const std::size_t n = 1'000'000;
    const auto buf = generate_white_noise(n, 1.0, NoiseKind::complex_, 42);
    cplx mean(0.0, 0.0);
    double var = 0.0;
    for (const auto& s : buf.samples) mean += s;
    mean /= static_cast<double>(n);
    for (const auto& s : buf.samples) var += std::norm(s - mean);
    var /= static_cast<double>(n - 1);
    CHECK(std::abs(mean) < 4e-3);
    CHECK(var == Catch::Approx(1.0).epsilon(0.01));
}

TEST_CASE("real white noise variance equals the sample interval") {
    const auto buf = generate_white_noise(200'000, 0.25, NoiseKind::real, 7);
    double var = 0.0;
    for (const auto& s : buf.samples) {
        CHECK(s.imag() == 0.0);
        var += s.real() * s.real();
    }
    var /= static_cast<double>(buf.size());
    CHECK(var == Catch::Approx(0.25).epsilon(0.02));
}

TEST_CASE("single-sample noise is finite") {
    const auto buf = generate_white_noise(1, 0.5, NoiseKind::complex_, 3);
    REQUIRE(buf.size() == 1);
    CHECK(std::isfinite(buf.samples[0].real()));
    CHECK(std::isfinite(buf.samples[0].imag()));
}

TEST_CASE("same seed reproduces the buffer exactly") {
    const auto a = generate_white_noise(4096, 1e-3, NoiseKind::complex_, 99);
    const auto b = generate_white_noise(4096, 1e-3, NoiseKind::complex_, 99);
    REQUIRE(a.samples == b.samples);
    const auto c = generate_white_noise(4096, 1e-3, NoiseKind::complex_, 100);
    CHECK(a.samples != c.samples);
}

TEST_CASE("pair-sum coarsening adds adjacent samples and doubles the interval") {
    SignalBuffer fine;
    fine.sample_interval = 0.5;
    fine.samples = {cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(4, 0)};
    const auto coarse = refine_noise(fine);
    REQUIRE(coarse.size() == 2);
    CHECK(coarse.samples[0] == cplx(3, 0));
    CHECK(coarse.samples[1] == cplx(7, 0));
    CHECK(coarse.sample_interval == 1.0);
    CHECK(coarse.origin_time == Catch::Approx(fine.origin_time + 0.5));
}

TEST_CASE("coarsened noise keeps white-noise scaling") {
    const auto fine = generate_white_noise(400'000, 0.5, NoiseKind::complex_, 11);
    const auto coarse = refine_noise(fine);
    double var = 0.0;
    for (const auto& s : coarse.samples) var += std::norm(s);
    var /= static_cast<double>(coarse.size());
    CHECK(var == Catch::Approx(1.0).epsilon(0.02));  // 2 * T_s
}

TEST_CASE("odd-length coarsening is rejected") {
    SignalBuffer buf;
    buf.sample_interval = 1.0;
    buf.samples.assign(5, cplx(0, 0));
    CHECK_THROWS_AS(refine_noise(buf), std::invalid_argument);
}

TEST_CASE("noise mixing reaches the requested SNR") {
    auto tone = make_multitone(100'000, 1.0 / 8000.0, {440.0}, {1.0}, {0.0});
    const auto noisy = mix_noise_at_snr(tone, 10.0, NoiseKind::real, 5);
    double pn = 0.0, ps = 0.0;
    for (std::size_t i = 0; i < tone.size(); ++i) {
        ps += std::norm(tone.samples[i]);
        pn += std::norm(noisy.samples[i] - tone.samples[i]);
    }
    CHECK(10.0 * std::log10(ps / pn) == Catch::Approx(10.0).margin(0.1));
}

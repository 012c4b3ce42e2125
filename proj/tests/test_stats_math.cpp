#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "zerotf/interp.hpp"
#include "zerotf/quadrature.hpp"
#include "zerotf/stats.hpp"

using namespace zerotf;

namespace {
// the reference radii: the middle one gives an expected count of 5, the others
// are its 3/5 .. 7/5 multiples; ring radii are thirds of the middle one
const double kBase = disk_radius_for_mean(300.0, 5.0);  // 1/sqrt(61)
const std::vector<double> kR1 = {0.6 * kBase, 0.8 * kBase, kBase, 1.2 * kBase, 1.4 * kBase};
const std::vector<double> kR0 = {kBase / 3.0, 2.0 * kBase / 3.0, kBase};
const double kH = kBase / 3.0;
}  // namespace

TEST_CASE("adaptive quadrature hits analytic integrals") {
    CHECK(adaptive_simpson([](double t) { return std::sin(t); }, 0.0, pi, 1e-12) ==
          Catch::Approx(2.0).epsilon(1e-10));
    CHECK(adaptive_simpson([](double t) { return std::exp(-t * t); }, -8.0, 8.0, 1e-12) ==
          Catch::Approx(std::sqrt(pi)).epsilon(1e-10));
}

TEST_CASE("monotone cubic interpolation reproduces nodes and stays monotone") {
    MonotoneCubic f({0.0, 1.0, 2.0, 3.0}, {0.0, 0.5, 2.0, 2.1});
    CHECK(f(1.0) == Catch::Approx(0.5));
    double prev = -1.0;
    for (double x = 0.0; x <= 3.0; x += 0.01) {
        CHECK(f(x) >= prev - 1e-12);
        prev = f(x);
    }
}

TEST_CASE("first intensity formula and homogeneity") {
    CHECK(first_intensity(300.0, {0.0, 1.0}) == Catch::Approx(300.0 / (4.0 * pi)).epsilon(1e-14));
    CHECK(first_intensity(300.0, {0.0, 1.0}) == Catch::Approx(23.8732).margin(1e-4));
    const double a = first_intensity(300.0, {1.0, 0.2});
    CHECK(first_intensity(300.0, {1.0, 0.4}) == Catch::Approx(a / 4.0).epsilon(1e-14));
    CHECK_THROWS_AS(first_intensity(300.0, {0.0, 0.0}), std::domain_error);
}

TEST_CASE("expected counts reproduce the reference column") {
    const std::vector<double> want = {1.781, 3.181, 5.0, 7.253, 9.959};
    for (std::size_t i = 0; i < kR1.size(); ++i)
        CHECK(expected_count(300.0, kR1[i]) == Catch::Approx(want[i]).margin(5e-4));
    CHECK(expected_count(300.0, kBase) == 5.0);  // exact by construction
    CHECK(expected_count(300.0, 0.1280) == Catch::Approx(5.0).margin(5e-3));
    CHECK(expected_count(300.0, 1e-8) < 1e-12);
    CHECK_THROWS_AS(expected_count(300.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(expected_count(300.0, 1.0), std::domain_error);
}

TEST_CASE("count variance integrand has the right removable singularity") {
    for (double r : {0.05, 0.1280369, 0.4}) {
        const double lim = 1.0 / (300.0 * r * r);
        CHECK(count_variance_integrand(300.0, r, 0.0) == lim);
        CHECK(count_variance_integrand(300.0, r, 1e-4) == Catch::Approx(lim).epsilon(1e-4));
    }
}

TEST_CASE("count variance reproduces the reference column") {
    // independently computed via high-precision quadrature of the closed form
    const std::vector<double> want = {0.530949, 0.684242, 0.848558, 1.018779, 1.194312};
    for (std::size_t i = 0; i < kR1.size(); ++i)
        CHECK(count_variance(300.0, kR1[i], 1e-9) == Catch::Approx(want[i]).margin(2e-5));
}

TEST_CASE("count variance approaches the count mean for tiny disks") {
    const double r = 1e-3;
    CHECK(count_variance(300.0, r) / expected_count(300.0, r) == Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("counts are sub-Poissonian at the reference radii") {
    for (double r : kR1) CHECK(count_variance(300.0, r) < expected_count(300.0, r));
}

TEST_CASE("pair correlation reproduces the reference values") {
    const std::vector<double> want = {0.270328, 0.862940, 1.049647};
    for (std::size_t i = 0; i < kR0.size(); ++i)
        CHECK(pair_correlation(300.0, kR0[i]) == Catch::Approx(want[i]).margin(2e-6));
}

TEST_CASE("pair correlation decorrelates at large distance") {
    CHECK(pair_correlation(300.0, 0.9999) == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("pair correlation is small and increasing near zero") {
    // g(r) ~ r^2 (1+alpha)^2 / (2 alpha): repulsion, though not below 0.01 at
    // r = 0.01 for alpha = 300 (the series gives 0.0151)
    const double g001 = pair_correlation(300.0, 0.01);
    CHECK(g001 == Catch::Approx(0.0151).margin(2e-4));
    CHECK(g001 < 0.05);
    CHECK(g001 > 0.0);
    // increasing up to its mild overshoot above 1 (the peak sits near r = 0.13)
    double prev = 0.0;
    for (double r = 0.005; r < 0.125; r += 0.005) {
        const double g = pair_correlation(300.0, r);
        CHECK(g > prev);
        prev = g;
    }
    // series branch joins the direct form continuously
    const double r_switch = std::sqrt(1e-4 / 300.0);
    CHECK(pair_correlation(300.0, r_switch * 0.999) ==
          Catch::Approx(pair_correlation(300.0, r_switch * 1.001)).epsilon(1e-2));
}

TEST_CASE("stable and raw pair correlation forms agree where both are stable") {
    for (double alpha : {2.0, 5.0, 20.0}) {
        for (double r = 0.2; r <= 0.8; r += 0.02) {
            const double a = pair_correlation(alpha, r);
            const double b = pair_correlation_raw(alpha, r);
            CHECK(a == Catch::Approx(b).epsilon(1e-8));
        }
    }
}

TEST_CASE("corrected pcf reproduces the reference values") {
    const std::vector<double> want = {0.488977, 0.861217, 1.021629};
    for (std::size_t i = 0; i < kR0.size(); ++i)
        CHECK(corrected_pcf(300.0, kR0[i], kH) == Catch::Approx(want[i]).margin(2e-6));
}

TEST_CASE("corrected pcf converges to the pair correlation as the ring thins") {
    CHECK(corrected_pcf(300.0, kBase, 1e-5) ==
          Catch::Approx(pair_correlation(300.0, kBase)).margin(1e-3));
    CHECK_THROWS_AS(corrected_pcf(300.0, 0.1, 0.2), std::domain_error);
    CHECK_THROWS_AS(corrected_pcf(300.0, 0.6, 0.5), std::domain_error);
}

TEST_CASE("ring expectation agrees with the quadrature of the pair correlation") {
    struct Case {
        double alpha, a, b, r1;
    };
    for (const auto& c : {Case{300.0, 0.0, 2.0 * kH, kBase}, Case{300.0, 0.04, 0.3, 0.2},
                          Case{20.0, 0.1, 0.5, 0.3}}) {
        const double closed = ring_count_expectation(c.alpha, c.a, c.b, c.r1);
        const double quad =
            expected_count(c.alpha, c.r1) *
            adaptive_simpson(
                [&](double r) {
                    if (r == 0.0) return 0.0;
                    return 2.0 * c.alpha * r * pair_correlation(c.alpha, r) /
                           ((1.0 - r * r) * (1.0 - r * r));
                },
                c.a, c.b, 1e-12);
        CHECK(closed == Catch::Approx(quad).epsilon(1e-6));
    }
    CHECK_THROWS_AS(ring_count_expectation(300.0, 0.0, 1.0 - 1e-12, 0.5), std::domain_error);
}

TEST_CASE("reference stats cache matches direct quadrature") {
    const ReferenceStats ref(300.0);
    for (double r : {0.02, 0.05, 0.0768221, 0.1280369, 0.31, 0.6})
        CHECK(ref.sigma2(r) == Catch::Approx(count_variance(300.0, r)).epsilon(1e-4));
    CHECK(ref.mu(kBase) == 5.0);
    CHECK(ref.g_tilde(kBase, kH) == corrected_pcf(300.0, kBase, kH));
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "zerotf/calibrate.hpp"
#include "zerotf/pipeline.hpp"
#include "zerotf/signal.hpp"
#include "zerotf/tables.hpp"

using namespace zerotf;

TEST_CASE("white-noise pixel variance is scale-independent", "[mc]") {
    PipelineConfig cfg;
    cfg.alpha = 300.0;
    cfg.sample_rate = 44100.0;
    cfg.n_samples = 22050;
    cfg.f_min = 300.0;
    cfg.f_max = 8000.0;
    cfg.voices_per_octave = 8;
    const auto grid = full_grid(cfg);
    const auto params = wavelet_of(cfg);
    std::vector<double> acc(grid.n_scales(), 0.0);
    const std::size_t n_seeds = 150;
    for (std::size_t s = 0; s < n_seeds; ++s) {
        const auto noise = generate_white_noise(cfg.n_samples, cfg.sample_interval(),
                                                NoiseKind::complex_, 9000 + s);
        scan_cwt(noise, params, grid, [&](std::size_t j, const std::vector<cplx>& row) {
            double v = 0.0;
            for (const auto& x : row) v += std::norm(x);
            acc[j] += v / static_cast<double>(row.size());
        });
    }
    // interior scales: per-pixel variance 1 under the per-scale normalization
    for (std::size_t j = 4; j + 4 < grid.n_scales(); ++j)
        CHECK(acc[j] / static_cast<double>(n_seeds) == Catch::Approx(1.0).epsilon(0.02));
}

TEST_CASE("zero counts follow the intensity integral", "[mc]") {
    PipelineConfig cfg;
    cfg.alpha = 300.0;
    cfg.sample_rate = 44100.0;
    cfg.n_samples = 22050;
    cfg.f_min = 300.0;
    cfg.f_max = 8000.0;
    cfg.voices_per_octave = 64;
    const auto grid = full_grid(cfg);
    const double ratio = grid.scale_ratio();
    // zeros reported at interior rows stand for the half-cell-extended band
    const double y_lo = grid.scales[1] / std::sqrt(ratio);
    const double y_hi = grid.scales[grid.n_scales() - 2] * std::sqrt(ratio);
    const double span = grid.times[grid.n_times() - 2] - grid.times[1];
    const double expected = cfg.alpha / (4.0 * pi) * span * (1.0 / y_lo - 1.0 / y_hi);
    double mean = 0.0;
    const std::size_t n_seeds = 8;
    for (std::size_t s = 0; s < n_seeds; ++s)
        mean += static_cast<double>(zeros_from_noise(cfg, NoiseKind::complex_, 40 + s).size()) /
                static_cast<double>(n_seeds);
    CHECK(mean == Catch::Approx(expected).epsilon(0.01));
}

TEST_CASE("white-noise statistic quantiles bracket the reference thresholds", "[mc]") {
    PipelineConfig cfg;  // table-grade grid
    cfg.voices_per_octave = 64;
    const auto prof = calibrate(cfg, default_mask_config(cfg.alpha), 2, 0.999, 77);
    INFO("b_intensity = " << prof.config.b_intensity << ", b_pcf = " << prof.config.b_pcf);
    CHECK(prof.config.b_intensity >= 3.5);
    CHECK(prof.config.b_intensity <= 5.5);
    // the pair-correlation quantile sits higher than the intensity one: the
    // empty-center-disk rule scores holes as maximal deviation and owns the
    // far tail under white noise
    CHECK(prof.config.b_pcf >= 4.3);
    CHECK(prof.config.b_pcf <= 7.5);
    // estimator spread shrinks with the center-disk radius in every ring row
    for (const auto& row : prof.sigma_hat)
        CHECK(row.front() > row.back());
}

TEST_CASE("ring counts and deviation flags behave as the closed forms predict", "[mc]") {
    // small records keep 500 realizations affordable; alpha and radii are the
    // reference ones so the closed forms apply unchanged
    PipelineConfig cfg;
    cfg.alpha = 300.0;
    cfg.sample_rate = 44100.0;
    cfg.n_samples = 11025;
    cfg.f_min = 800.0;
    cfg.f_max = 8000.0;
    cfg.voices_per_octave = 64;
    cfg.mask_time_stride = 96;
    const double base = disk_radius_for_mean(cfg.alpha, 5.0);
    const double h = base / 3.0;
    const double r1 = base;
    const double expect_ring = ring_count_expectation(cfg.alpha, 0.0, 2.0 * h, r1);

    const auto grid = full_grid(cfg);
    RegionOfInterest roi = default_roi(grid, r1 + 2.0 * h, cfg.time_margin_factor);
    const auto mgrid = mask_grid(cfg);

    // pre-registered deviation test: three disks, fixed before the data
    const std::vector<double> deltas = {3.0, 4.0, 5.0};
    double bound = 0.0;
    for (double d : deltas) bound += 1.0 / (d * d);

    const std::size_t n_seeds = 500;
    std::vector<double> seed_means;
    std::size_t flagged_any = 0;
    std::vector<PHDisk> disks;
    for (std::size_t s = 0; s < n_seeds; ++s) {
        const auto zs = zeros_from_noise(cfg, NoiseKind::complex_, 300000 + 7ull * s);
        ZeroIndex idx(zs);
        const auto table = idx.add_ring_table(h, h);  // annulus 0 < d < 2h
        double acc = 0.0;
        std::size_t n = 0;
        for (double y : mgrid.scales) {
            for (double x : mgrid.times) {
                const UHPPoint w{x, y};
                if (!roi_contains(roi, w)) continue;
                acc += idx.ring_sum_in_disk(w, r1, table);
                ++n;
                if (disks.size() < deltas.size()) disks.push_back({w, base});
            }
        }
        REQUIRE(n > 0);
        seed_means.push_back(acc / static_cast<double>(n));
        const auto res = chebyshev_deviation_test(zs, disks, deltas, cfg.alpha);
        bool any = false;
        for (bool f : res.flags) any = any || f;
        if (any) ++flagged_any;
    }
    double mean = 0.0;
    for (double v : seed_means) mean += v / static_cast<double>(n_seeds);
    double var = 0.0;
    for (double v : seed_means) var += (v - mean) * (v - mean) / static_cast<double>(n_seeds - 1);
    const double se = std::sqrt(var / static_cast<double>(n_seeds));
    INFO("ring-sum mean " << mean << " vs closed form " << expect_ring << " (se " << se << ")");
    CHECK(std::abs(mean - expect_ring) <= 3.0 * se + 0.01 * expect_ring);
    // flag frequency stays below the union bound (by a wide margin in practice)
    CHECK(static_cast<double>(flagged_any) / static_cast<double>(n_seeds) <= bound);
}

TEST_CASE("mask filtering improves the SNR of a noisy tone by 10 dB", "[mc]") {
    PipelineConfig cfg;  // filtering-grade grid
    cfg.voices_per_octave = 16;
    const auto prof = calibrate(cfg, default_mask_config(cfg.alpha), 4, 0.999, 999);

    const auto clean = make_multitone(cfg.n_samples, cfg.sample_interval(), {1000.0}, {1.0}, {0.3});
    const auto noisy = mix_noise_at_snr(clean, 0.0, NoiseKind::real, 246);
    const auto sc = forward_cwt(noisy, wavelet_of(cfg), full_grid(cfg));
    const auto zs = extract_zeros(sc);
    Mask mask = build_mask(zs, mask_grid(cfg), MaskKind::combined, prof);
    // dilate vertically to the wavelet's reproducing bandwidth so the masked
    // reconstruction keeps the tone's full amplitude, and in time to close
    // speckle holes along the track (holes amplitude-modulate the tone)
    const std::size_t rows = static_cast<std::size_t>(
        std::ceil(0.35 / std::log(full_grid(cfg).scale_ratio())));
    mask = dilate_mask(mask, rows, 6);
    const auto out = to_real_signal(inverse_cwt(apply_mask(sc, mask)));

    const std::size_t lo = cfg.n_samples / 5, hi = cfg.n_samples - cfg.n_samples / 5;
    double ps = 0.0, pe_in = 0.0, pe_out = 0.0, cross = 0.0;
    for (std::size_t l = lo; l < hi; ++l) {
        const double c = clean.samples[l].real();
        ps += c * c;
        const double din = noisy.samples[l].real() - c;
        pe_in += din * din;
        cross += out[l] * c;
    }
    const double gain = cross / ps;  // mask filtering may shave some amplitude
    for (std::size_t l = lo; l < hi; ++l) {
        const double d = out[l] - gain * clean.samples[l].real();
        pe_out += d * d;
    }
    const double snr_in = 10.0 * std::log10(ps / pe_in);
    const double snr_out = 10.0 * std::log10(gain * gain * ps / pe_out);
    INFO("snr_in = " << snr_in << " dB, snr_out = " << snr_out << " dB, gain = " << gain);
    CHECK(snr_out - snr_in >= 10.0);
    CHECK(gain > 0.5);
}

TEST_CASE("a strong tone survives the combined mask along its scale line", "[mc]") {
    PipelineConfig cfg;  // filtering-grade grid
    cfg.voices_per_octave = 16;
    const auto prof = calibrate(cfg, default_mask_config(cfg.alpha), 4, 0.999, 4242);

    const double f_tone = 1000.0;
    auto tone = make_multitone(cfg.n_samples, cfg.sample_interval(), {f_tone}, {1.0}, {0.3});
    const auto noisy = mix_noise_at_snr(tone, 0.0, NoiseKind::real, 31337);
    const auto zs = zeros_of_signal(cfg, noisy);
    const auto mgrid = mask_grid(cfg);
    const auto mask = build_mask(zs, mgrid, MaskKind::combined, prof);

    const double y_tone = wavelet_of(cfg).scale_for_frequency(f_tone);
    std::size_t row = 0;
    for (std::size_t j = 1; j < mgrid.n_scales(); ++j)
        if (std::abs(std::log(mgrid.scales[j] / y_tone)) <
            std::abs(std::log(mgrid.scales[row] / y_tone)))
            row = j;
    const auto roi = roi_for(cfg, full_grid(cfg), prof.config);
    std::size_t in_roi = 0, covered = 0;
    for (std::size_t k = 0; k < mgrid.n_times(); ++k) {
        if (!roi_contains(roi, {mgrid.times[k], mgrid.scales[row]})) continue;
        ++in_roi;
        if (mask.values[row][k] > 0.0) ++covered;
    }
    REQUIRE(in_roi > 0);
    CHECK(static_cast<double>(covered) / static_cast<double>(in_roi) > 0.5);
}

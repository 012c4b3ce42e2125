#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "zerotf/mask.hpp"
#include "zerotf/pipeline.hpp"
#include "zerotf/stats.hpp"

namespace zerotf {

/// Monte-Carlo calibration output: estimator standard deviations and the
/// white-noise quantile thresholds for every mask kind, tied to the grid
/// family they were computed on.
struct CalibrationProfile {
    int schema_version = 1;
    PipelineConfig grid;
    MaskConfig config;                           ///< thresholds and a_kl filled
    std::vector<std::vector<double>> sigma_hat;  ///< K0 x K1 sample std devs of g_hat
    double quantile_level = 0.999;
    std::size_t n_seeds = 0;
    std::uint64_t seed = 0;
    std::size_t n_centers_pooled = 0;
    NoiseKind noise_kind = NoiseKind::complex_;
};

namespace detail {

/// Order-statistic sample quantile (type 1): the ceil(q n)-th smallest value.
inline double sample_quantile(std::vector<double>& v, double q) {
    if (v.empty()) throw std::invalid_argument("sample_quantile: empty sample");
    const auto n = v.size();
    auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    if (k == 0) k = 1;
    if (k > n) k = n;
    std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
    return v[k - 1];
}

/// Enumerate ROI-admissible nodes of the statistic grid.
template <typename Fn>
inline void for_each_center(const TimeScaleGrid& mgrid, const RegionOfInterest& roi,
                            const Fn& fn) {
    for (double y : mgrid.scales) {
        for (double x : mgrid.times) {
            const UHPPoint w{x, y};
            if (roi_contains(roi, w)) fn(w);
        }
    }
}

}  // namespace detail

/// Calibrate mask thresholds as white-noise sample quantiles.
///
/// Protocol: per seed, generate noise -> transform -> zeros; pool the
/// per-center pair-correlation estimates over all seeds and admissible
/// statistic-grid centers to get sigma_hat (over centers with a nonempty
/// center disk, as in the reference tables), set a_kl = 1/sigma_hat^2, then
/// pool the per-center deviation statistics and take their quantile_level
/// sample quantiles as thresholds. Deterministic given the seed.
inline CalibrationProfile calibrate(const PipelineConfig& cfg, MaskConfig mask_cfg,
                                    std::size_t n_seeds, double quantile_level,
                                    std::uint64_t seed,
                                    NoiseKind kind = NoiseKind::complex_) {
    if (n_seeds < 1) throw std::invalid_argument("calibrate: n_seeds must be >= 1");
    if (!(quantile_level > 0.0 && quantile_level < 1.0))
        throw std::invalid_argument("calibrate: quantile_level must be in (0,1)");
    mask_cfg.validate();
    const ReferenceStats ref(cfg.alpha);
    const TimeScaleGrid mgrid = mask_grid(cfg);
    const RegionOfInterest roi = roi_for(cfg, full_grid(cfg), mask_cfg);
    const std::size_t k0 = mask_cfg.radii_r0.size();
    const std::size_t k1 = mask_cfg.radii_r1.size();

    std::vector<ZeroSet> patterns;
    patterns.reserve(n_seeds);
    for (std::size_t i = 0; i < n_seeds; ++i)
        patterns.push_back(zeros_from_noise(cfg, kind, seed + 1000003ull * i));

    // Pass 1: estimator spread per (r0, r1) cell, over centers with zeros in
    // the center disk (Welford accumulation).
    std::vector<std::vector<double>> mean(k0, std::vector<double>(k1, 0.0));
    std::vector<std::vector<double>> m2(k0, std::vector<double>(k1, 0.0));
    std::vector<std::vector<std::size_t>> cnt(k0, std::vector<std::size_t>(k1, 0));
    for (const auto& zs : patterns) {
        PcfEstimator est(zs, mask_cfg.radii_r0, mask_cfg.h, cfg.alpha);
        detail::for_each_center(mgrid, roi, [&](const UHPPoint& w) {
            for (std::size_t l = 0; l < k1; ++l) {
                if (est.index().count_in_disk(w, mask_cfg.radii_r1[l]) == 0) continue;
                const PCFEstimate e = est.estimate(w, mask_cfg.radii_r1[l]);
                for (std::size_t k = 0; k < k0; ++k) {
                    ++cnt[k][l];
                    const double d = e.g_hat[k] - mean[k][l];
                    mean[k][l] += d / static_cast<double>(cnt[k][l]);
                    m2[k][l] += d * (e.g_hat[k] - mean[k][l]);
                }
            }
        });
    }
    CalibrationProfile prof;
    prof.sigma_hat.assign(k0, std::vector<double>(k1, 0.0));
    for (std::size_t k = 0; k < k0; ++k)
        for (std::size_t l = 0; l < k1; ++l) {
            if (cnt[k][l] < 2) throw data_error("calibrate: too few valid centers for sigma_hat");
            prof.sigma_hat[k][l] = std::sqrt(m2[k][l] / static_cast<double>(cnt[k][l] - 1));
            if (!(prof.sigma_hat[k][l] > 0.0))
                throw numerical_error("calibrate: degenerate sigma_hat cell");
            mask_cfg.a_kl[k][l] = 1.0 / (prof.sigma_hat[k][l] * prof.sigma_hat[k][l]);
        }

    // Pass 2: deviation statistics per center, pooled for the quantiles.
    std::vector<double> t_int, t_pcf, t_comb;
    for (const auto& zs : patterns) {
        MaskEvaluator ev(zs, mask_cfg, ref);
        detail::for_each_center(mgrid, roi, [&](const UHPPoint& w) {
            const double ti = ev.intensity_statistic(w);
            const double tp = ev.pcf_statistic(w);
            t_int.push_back(mask_cfg.a * ti);
            t_pcf.push_back(tp);
            t_comb.push_back(ti + tp);
        });
    }
    if (t_int.size() < 1000)
        throw data_error("calibrate: fewer than 1000 pooled centers; enlarge the grid or seeds");

    mask_cfg.b_intensity = detail::sample_quantile(t_int, quantile_level);
    mask_cfg.b_pcf = detail::sample_quantile(t_pcf, quantile_level);
    mask_cfg.b_combined = detail::sample_quantile(t_comb, quantile_level);

    prof.grid = cfg;
    prof.config = mask_cfg;
    prof.quantile_level = quantile_level;
    prof.n_seeds = n_seeds;
    prof.seed = seed;
    prof.n_centers_pooled = t_int.size();
    prof.noise_kind = kind;
    return prof;
}

/// Clamped per-pixel mask from a zero pattern under a calibrated profile.
/// Grid nodes outside the ROI get 0.
inline Mask build_mask(const ZeroSet& zeros, const TimeScaleGrid& grid, MaskKind kind,
                       const CalibrationProfile& profile) {
    const TimeScaleGrid expect = mask_grid(profile.grid);
    if (grid.scales != expect.scales || grid.times.size() != expect.times.size())
        throw data_error("build_mask: grid does not match the calibration profile family");
    const ReferenceStats ref(profile.grid.alpha);
    const MaskEvaluator ev(zeros, profile.config, ref);
    const RegionOfInterest roi = roi_for(profile.grid, full_grid(profile.grid), profile.config);
    Mask m;
    m.grid = grid;
    m.values.assign(grid.n_scales(), std::vector<double>(grid.n_times(), 0.0));
    const auto& c = profile.config;
    for (std::size_t j = 0; j < grid.n_scales(); ++j) {
        for (std::size_t k = 0; k < grid.n_times(); ++k) {
            const UHPPoint w{grid.times[k], grid.scales[j]};
            if (!roi_contains(roi, w)) continue;
            double v = 0.0;
            switch (kind) {
                case MaskKind::intensity:
                    v = c.a * ev.intensity_statistic(w) - c.b_intensity;
                    break;
                case MaskKind::pcf:
                    v = ev.pcf_statistic(w) - c.b_pcf;
                    break;
                case MaskKind::combined:
                    v = ev.intensity_statistic(w) + ev.pcf_statistic(w) - c.b_combined;
                    break;
            }
            m.values[j][k] = std::clamp(v, 0.0, 1.0);
        }
    }
    return m;
}

// ---- JSON serialization (versioned schema) ----

inline void to_json(nlohmann::json& j, const PipelineConfig& c) {
    j = {{"alpha", c.alpha},
         {"sample_rate", c.sample_rate},
         {"n_samples", c.n_samples},
         {"f_min", c.f_min},
         {"f_max", c.f_max},
         {"voices_per_octave", c.voices_per_octave},
         {"mask_time_stride", c.mask_time_stride},
         {"time_margin_factor", c.time_margin_factor},
         {"max_support_fraction", c.max_support_fraction}};
}

inline void from_json(const nlohmann::json& j, PipelineConfig& c) {
    j.at("alpha").get_to(c.alpha);
    j.at("sample_rate").get_to(c.sample_rate);
    j.at("n_samples").get_to(c.n_samples);
    j.at("f_min").get_to(c.f_min);
    j.at("f_max").get_to(c.f_max);
    j.at("voices_per_octave").get_to(c.voices_per_octave);
    j.at("mask_time_stride").get_to(c.mask_time_stride);
    j.at("time_margin_factor").get_to(c.time_margin_factor);
    j.at("max_support_fraction").get_to(c.max_support_fraction);
}

inline void to_json(nlohmann::json& j, const MaskConfig& c) {
    j = {{"radii_r", c.radii_r},     {"radii_r0", c.radii_r0},
         {"radii_r1", c.radii_r1},   {"h", c.h},
         {"a", c.a},                 {"b_intensity", c.b_intensity},
         {"b_pcf", c.b_pcf},         {"b_combined", c.b_combined},
         {"a_kl", c.a_kl}};
}

inline void from_json(const nlohmann::json& j, MaskConfig& c) {
    j.at("radii_r").get_to(c.radii_r);
    j.at("radii_r0").get_to(c.radii_r0);
    j.at("radii_r1").get_to(c.radii_r1);
    j.at("h").get_to(c.h);
    j.at("a").get_to(c.a);
    j.at("b_intensity").get_to(c.b_intensity);
    j.at("b_pcf").get_to(c.b_pcf);
    j.at("b_combined").get_to(c.b_combined);
    j.at("a_kl").get_to(c.a_kl);
}

inline void to_json(nlohmann::json& j, const CalibrationProfile& p) {
    j = {{"schema_version", p.schema_version},
         {"grid", p.grid},
         {"mask", p.config},
         {"sigma_hat", p.sigma_hat},
         {"quantile_level", p.quantile_level},
         {"n_seeds", p.n_seeds},
         {"seed", p.seed},
         {"n_centers_pooled", p.n_centers_pooled},
         {"noise_kind", p.noise_kind == NoiseKind::real ? "real" : "complex"}};
}

inline void from_json(const nlohmann::json& j, CalibrationProfile& p) {
    j.at("schema_version").get_to(p.schema_version);
    if (p.schema_version != 1) throw data_error("CalibrationProfile: unsupported schema version");
    j.at("grid").get_to(p.grid);
    j.at("mask").get_to(p.config);
    j.at("sigma_hat").get_to(p.sigma_hat);
    j.at("quantile_level").get_to(p.quantile_level);
    j.at("n_seeds").get_to(p.n_seeds);
    j.at("seed").get_to(p.seed);
    j.at("n_centers_pooled").get_to(p.n_centers_pooled);
    p.noise_kind = (j.at("noise_kind").get<std::string>() == "real") ? NoiseKind::real
                                                                     : NoiseKind::complex_;
}

}  // namespace zerotf

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "zerotf/calibrate.hpp"
#include "zerotf/mask.hpp"
#include "zerotf/pipeline.hpp"
#include "zerotf/stats.hpp"

namespace zerotf {

/// Empirical vs closed-form reference statistics of white-noise zero patterns:
/// disk-count mean/variance per center radius, pair-correlation estimator mean
/// and spread per (ring radius, center radius) cell.
struct TableSet {
    std::vector<double> radii_r1;
    std::vector<double> mu;          ///< closed form
    std::vector<double> mu_hat;      ///< sample mean over pooled centers
    std::vector<double> sigma2;      ///< closed form (quadrature)
    std::vector<double> sigma2_hat;  ///< sample variance over pooled centers

    std::vector<double> radii_r0;
    double h = 0.0;
    std::vector<double> g;        ///< pair correlation at r0
    std::vector<double> g_tilde;  ///< ring-estimator target at (r0, h)
    std::vector<std::vector<double>> ghat_mean;  ///< [k0][l1]
    std::vector<std::vector<double>> ghat_std;   ///< [k0][l1]

    std::size_t n_centers = 0;  ///< pooled count-statistic centers
    std::size_t n_seeds = 0;
};

/// Run the reference protocol: per seed, white noise -> transform -> zeros;
/// count zeros in disks around every ROI node of the statistic grid and
/// evaluate the local pair-correlation estimator at every node whose center
/// disk is nonempty; pool over seeds.
inline TableSet compute_tables(const PipelineConfig& cfg, const MaskConfig& mask_cfg,
                               std::size_t n_seeds, std::uint64_t seed,
                               NoiseKind kind = NoiseKind::complex_) {
    const std::size_t k0 = mask_cfg.radii_r0.size();
    const std::size_t k1 = mask_cfg.radii_r1.size();
    TableSet t;
    t.radii_r1 = mask_cfg.radii_r1;
    t.radii_r0 = mask_cfg.radii_r0;
    t.h = mask_cfg.h;
    t.n_seeds = n_seeds;
    for (double r : mask_cfg.radii_r1) {
        t.mu.push_back(expected_count(cfg.alpha, r));
        t.sigma2.push_back(count_variance(cfg.alpha, r));
    }
    for (double r0 : mask_cfg.radii_r0) {
        t.g.push_back(pair_correlation(cfg.alpha, r0));
        t.g_tilde.push_back(corrected_pcf(cfg.alpha, r0, mask_cfg.h));
    }

    const TimeScaleGrid mgrid = mask_grid(cfg);
    const RegionOfInterest roi = roi_for(cfg, full_grid(cfg), mask_cfg);

    // count moments per r1; estimator moments per (r0, r1); Welford
    std::vector<double> cmean(k1, 0.0), cm2(k1, 0.0);
    std::size_t cn = 0;
    std::vector<std::vector<double>> gmean(k0, std::vector<double>(k1, 0.0));
    std::vector<std::vector<double>> gm2(k0, std::vector<double>(k1, 0.0));
    std::vector<std::vector<std::size_t>> gcnt(k0, std::vector<std::size_t>(k1, 0));

    for (std::size_t i = 0; i < n_seeds; ++i) {
        const ZeroSet zs = zeros_from_noise(cfg, kind, seed + 1000003ull * i);
        PcfEstimator est(zs, mask_cfg.radii_r0, mask_cfg.h, cfg.alpha);
        detail::for_each_center(mgrid, roi, [&](const UHPPoint& w) {
            ++cn;
            for (std::size_t l = 0; l < k1; ++l) {
                const auto n = est.index().count_in_disk(w, mask_cfg.radii_r1[l]);
                const double d = static_cast<double>(n) - cmean[l];
                cmean[l] += d / static_cast<double>(cn);
                cm2[l] += d * (static_cast<double>(n) - cmean[l]);
                if (n == 0) continue;
                const PCFEstimate e = est.estimate(w, mask_cfg.radii_r1[l]);
                for (std::size_t k = 0; k < k0; ++k) {
                    ++gcnt[k][l];
                    const double dg = e.g_hat[k] - gmean[k][l];
                    gmean[k][l] += dg / static_cast<double>(gcnt[k][l]);
                    gm2[k][l] += dg * (e.g_hat[k] - gmean[k][l]);
                }
            }
        });
    }
    t.n_centers = cn;
    t.mu_hat = cmean;
    t.sigma2_hat.resize(k1);
    for (std::size_t l = 0; l < k1; ++l)
        t.sigma2_hat[l] = cn > 1 ? cm2[l] / static_cast<double>(cn - 1) : 0.0;
    t.ghat_mean = gmean;
    t.ghat_std.assign(k0, std::vector<double>(k1, 0.0));
    for (std::size_t k = 0; k < k0; ++k)
        for (std::size_t l = 0; l < k1; ++l)
            if (gcnt[k][l] > 1)
                t.ghat_std[k][l] = std::sqrt(gm2[k][l] / static_cast<double>(gcnt[k][l] - 1));
    return t;
}

}  // namespace zerotf

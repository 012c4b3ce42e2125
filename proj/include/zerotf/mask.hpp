#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "zerotf/cwt.hpp"
#include "zerotf/grid.hpp"
#include "zerotf/hyperbolic.hpp"
#include "zerotf/stats.hpp"
#include "zerotf/zero_index.hpp"

namespace zerotf {

/// Radii, ring width, gains and thresholds of the filtering masks.
/// a_kl holds the pair-correlation deviation weights 1/sigma_hat^2, indexed
/// [k0][l1]; thresholds are filled by calibration.
struct MaskConfig {
    std::vector<double> radii_r;   ///< intensity radii r_k
    std::vector<double> radii_r0;  ///< ring radii r_{0,k}
    std::vector<double> radii_r1;  ///< center-disk radii r_{1,l}
    double h = 0.0;                ///< ring half-width
    double a = 1.0;                ///< intensity mask gain
    double b_intensity = 0.0;
    double b_pcf = 0.0;
    double b_combined = 0.0;
    std::vector<std::vector<double>> a_kl;  ///< K0 x K1 weights

    void validate() const {
        auto in01 = [](double r) { return r > 0.0 && r < 1.0; };
        for (double r : radii_r)
            if (!in01(r)) throw std::invalid_argument("MaskConfig: radii_r must be in (0,1)");
        for (double r : radii_r0)
            if (!in01(r)) throw std::invalid_argument("MaskConfig: radii_r0 must be in (0,1)");
        for (double r : radii_r1)
            if (!in01(r)) throw std::invalid_argument("MaskConfig: radii_r1 must be in (0,1)");
        for (double r : radii_r0)
            if (!(h > 0.0 && h <= r)) throw std::invalid_argument("MaskConfig: need 0 < h <= min(r0)");
        if (!(a > 0.0)) throw std::invalid_argument("MaskConfig: a must be > 0");
        if (b_intensity < 0.0 || b_pcf < 0.0 || b_combined < 0.0)
            throw std::invalid_argument("MaskConfig: thresholds must be >= 0");
    }

    /// Pseudo-hyperbolic reach of the widest query from a statistic center.
    double query_reach() const {
        double m = 0.0;
        for (double r : radii_r) m = std::max(m, r);
        double r0max = 0.0, r1max = 0.0;
        for (double r : radii_r0) r0max = std::max(r0max, r);
        for (double r : radii_r1) r1max = std::max(r1max, r);
        return std::max(m, r1max + r0max + h);
    }
};

/// Radii used throughout: the middle radius is chosen so the expected disk
/// count equals 5, the others are the 3/5 .. 7/5 multiples of it; ring radii
/// are its thirds and the ring half-width is the smallest ring radius. For
/// small orders the target count is reduced so the widest query (1.4 base +
/// base + base/3) stays well inside the unit disk.
inline MaskConfig default_mask_config(double alpha) {
    MaskConfig c;
    const double base = disk_radius_for_mean(alpha, std::min(5.0, 0.025 * alpha));
    for (double f : {0.6, 0.8, 1.0, 1.2, 1.4}) c.radii_r.push_back(f * base);
    c.radii_r1 = c.radii_r;
    for (double f : {1.0 / 3.0, 2.0 / 3.0, 1.0}) c.radii_r0.push_back(f * base);
    c.h = base / 3.0;
    c.a = 1.0;
    c.a_kl.assign(c.radii_r0.size(), std::vector<double>(c.radii_r1.size(), 1.0));
    return c;
}

/// Filtering mask on a time-scale grid, values clamped to [0,1].
struct Mask {
    TimeScaleGrid grid;
    std::vector<std::vector<double>> values;  ///< [scale][time]
};

enum class MaskKind { intensity, pcf, combined };

/// Evaluates the two deviation statistics for one zero pattern. Construction
/// precomputes the per-zero ring tables and the reference values; statistic
/// evaluation is then a handful of indexed disk sweeps per center and is safe
/// to call concurrently.
class MaskEvaluator {
public:
    MaskEvaluator(const ZeroSet& zeros, const MaskConfig& config, const ReferenceStats& ref)
        : index_(zeros), cfg_(config) {
        cfg_.validate();
        if (cfg_.a_kl.size() != cfg_.radii_r0.size())
            throw std::invalid_argument("MaskEvaluator: a_kl rows must match radii_r0");
        for (const auto& row : cfg_.a_kl)
            if (row.size() != cfg_.radii_r1.size())
                throw std::invalid_argument("MaskEvaluator: a_kl cols must match radii_r1");
        for (double r : cfg_.radii_r) {
            mu_.push_back(ref.mu(r));
            s2_.push_back(ref.sigma2(r));
        }
        for (double r0 : cfg_.radii_r0) {
            gt_.push_back(ref.g_tilde(r0, cfg_.h));
            tables_.push_back(index_.add_ring_table(r0, cfg_.h));
            pref_.push_back((1.0 - r0 * r0) * (1.0 - r0 * r0) / (4.0 * ref.alpha() * cfg_.h * r0));
        }
    }

    /// Unthresholded intensity deviation,
    ///   (1/K) sum_k (|Z cap D(w, r_k)| - mu_k)^2 / sigma2_k.
    double intensity_statistic(const UHPPoint& w) const {
        double t = 0.0;
        for (std::size_t k = 0; k < cfg_.radii_r.size(); ++k) {
            const double n = static_cast<double>(index_.count_in_disk(w, cfg_.radii_r[k]));
            const double d = n - mu_[k];
            t += d * d / s2_[k];
        }
        return t / static_cast<double>(cfg_.radii_r.size());
    }

    /// Unthresholded pair-correlation deviation,
    ///   (1/(K0 K1)) sum_{k,l} a_kl (g_tilde_k - g_hat_{w,r1_l}(r0_k))^2.
    /// An empty center disk leaves the estimator undefined; it is scored as
    /// g_hat = 0, the maximal deviation (holes are themselves strong evidence
    /// against noise). Calibration applies the same rule.
    double pcf_statistic(const UHPPoint& w1) const {
        double t = 0.0;
        for (std::size_t l = 0; l < cfg_.radii_r1.size(); ++l) {
            const double r1 = cfg_.radii_r1[l];
            const auto n = index_.count_in_disk(w1, r1);
            for (std::size_t k = 0; k < cfg_.radii_r0.size(); ++k) {
                double ghat = 0.0;
                if (n > 0) {
                    const double sum = index_.ring_sum_in_disk(w1, r1, tables_[k]);
                    ghat = pref_[k] * sum / static_cast<double>(n);
                }
                const double d = gt_[k] - ghat;
                t += cfg_.a_kl[k][l] * d * d;
            }
        }
        return t / static_cast<double>(cfg_.radii_r0.size() * cfg_.radii_r1.size());
    }

    const ZeroIndex& index() const { return index_; }
    const MaskConfig& config() const { return cfg_; }

private:
    ZeroIndex index_;
    MaskConfig cfg_;
    std::vector<double> mu_, s2_, gt_, pref_;
    std::vector<std::size_t> tables_;
};

/// Spec-shaped convenience wrappers (tests use these; bulk callers hold a
/// MaskEvaluator).
inline double intensity_statistic(const ZeroSet& zeros, const UHPPoint& w,
                                  const std::vector<double>& radii, const ReferenceStats& ref) {
    MaskConfig c = default_mask_config(ref.alpha());
    c.radii_r = radii;
    MaskEvaluator ev(zeros, c, ref);
    return ev.intensity_statistic(w);
}

inline double pcf_statistic(const ZeroSet& zeros, const UHPPoint& w1, const MaskConfig& config,
                            const ReferenceStats& ref) {
    MaskEvaluator ev(zeros, config, ref);
    return ev.pcf_statistic(w1);
}

/// Morphological dilation (separable max filter) by +-scale_radius rows and
/// +-time_radius columns. The deviation statistics localize a component more
/// tightly than the wavelet's reproducing bandwidth, so reconstruction-grade
/// filtering dilates the mask vertically to at least that bandwidth. Off by
/// default in the pipeline.
inline Mask dilate_mask(const Mask& m, std::size_t scale_radius, std::size_t time_radius) {
    Mask out = m;
    const std::size_t ns = m.values.size();
    const std::size_t nt = ns ? m.values.front().size() : 0;
    if (scale_radius > 0) {
        for (std::size_t k = 0; k < nt; ++k) {
            for (std::size_t j = 0; j < ns; ++j) {
                double v = 0.0;
                const std::size_t lo = j > scale_radius ? j - scale_radius : 0;
                const std::size_t hi = std::min(ns - 1, j + scale_radius);
                for (std::size_t i = lo; i <= hi; ++i) v = std::max(v, m.values[i][k]);
                out.values[j][k] = v;
            }
        }
    }
    if (time_radius > 0) {
        const Mask mid = out;
        for (std::size_t j = 0; j < ns; ++j) {
            for (std::size_t k = 0; k < nt; ++k) {
                double v = 0.0;
                const std::size_t lo = k > time_radius ? k - time_radius : 0;
                const std::size_t hi = std::min(nt - 1, k + time_radius);
                for (std::size_t i = lo; i <= hi; ++i) v = std::max(v, mid.values[j][i]);
                out.values[j][k] = v;
            }
        }
    }
    return out;
}

/// Pointwise product of scalogram and mask. Grids may differ; the mask is then
/// looked up by nearest neighbor in time and scale (each scalogram node takes
/// the mask value of the closest mask node).
inline Scalogram apply_mask(const Scalogram& sc, const Mask& mask,
                            bool allow_interpolation = true) {
    const bool same = sc.grid.times == mask.grid.times && sc.grid.scales == mask.grid.scales;
    if (!same && !allow_interpolation)
        throw data_error("apply_mask: grids differ and interpolation is disabled");
    Scalogram out = sc;
    if (same) {
        for (std::size_t j = 0; j < sc.n_scales(); ++j)
            for (std::size_t k = 0; k < sc.n_times(); ++k) out.values[j][k] *= mask.values[j][k];
        return out;
    }
    auto nearest = [](const std::vector<double>& v, double x) -> std::size_t {
        auto it = std::lower_bound(v.begin(), v.end(), x);
        if (it == v.begin()) return 0;
        if (it == v.end()) return v.size() - 1;
        const auto hi = static_cast<std::size_t>(it - v.begin());
        return (x - v[hi - 1] <= v[hi] - x) ? hi - 1 : hi;
    };
    std::vector<std::size_t> col(sc.n_times());
    for (std::size_t k = 0; k < sc.n_times(); ++k) col[k] = nearest(mask.grid.times, sc.grid.times[k]);
    std::vector<std::size_t> row(sc.n_scales());
    for (std::size_t j = 0; j < sc.n_scales(); ++j)
        row[j] = nearest(mask.grid.scales, sc.grid.scales[j]);
    for (std::size_t j = 0; j < sc.n_scales(); ++j)
        for (std::size_t k = 0; k < sc.n_times(); ++k)
            out.values[j][k] *= mask.values[row[j]][col[k]];
    return out;
}

}  // namespace zerotf

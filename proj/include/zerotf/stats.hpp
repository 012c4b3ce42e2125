#pragma once

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "zerotf/common.hpp"
#include "zerotf/hyperbolic.hpp"
#include "zerotf/interp.hpp"
#include "zerotf/quadrature.hpp"
#include "zerotf/zero_index.hpp"
#include "zerotf/zeros.hpp"

namespace zerotf {

/// First intensity of the white-noise zero process, alpha / (4 pi y^2).
inline double first_intensity(double alpha, const UHPPoint& z) {
    if (!(z.y > 0.0)) throw std::domain_error("first_intensity: y must be > 0");
    return alpha / (4.0 * pi * z.y * z.y);
}

/// Expected zero count in a disk of pseudo-hyperbolic radius r:
/// mu_r = alpha r^2 / (1 - r^2).
inline double expected_count(double alpha, double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("expected_count: r must be in (0,1)");
    return alpha * r * r / (1.0 - r * r);
}

/// Radius whose expected count equals mu (inverse of expected_count).
inline double disk_radius_for_mean(double alpha, double mu) {
    if (!(mu > 0.0) || !(alpha > 0.0))
        throw std::domain_error("disk_radius_for_mean: need positive alpha, mu");
    return std::sqrt(mu / (alpha + mu));
}

/// Integrand of the count-variance integral in its cancellation-free form,
///   4 sin^2(t/2) / ( expm1(alpha log1p(q)) * ((1-r^2)^2 + 4 r^2 sin^2(t/2)) ),
/// q = 4 r^2 sin^2(t/2) / (1-r^2)^2. The factor (1-r^2)^(2 alpha) shared by
/// numerator and denominator gap is cancelled analytically; at alpha = 300 the
/// raw form underflows and cancels catastrophically. The removable singularity
/// at t = 0 takes its analytic limit 1/(alpha r^2).
inline double count_variance_integrand(double alpha, double r, double t) {
    if (t == 0.0) return 1.0 / (alpha * r * r);
    const double s2 = 4.0 * r * r;
    const double sin2 = std::sin(0.5 * t) * std::sin(0.5 * t);
    const double omr2 = 1.0 - r * r;
    const double q = s2 * sin2 / (omr2 * omr2);
    return 4.0 * sin2 / (std::expm1(alpha * std::log1p(q)) * (omr2 * omr2 + s2 * sin2));
}

/// Variance of the zero count in a pseudo-hyperbolic disk of radius r,
///   sigma^2_r = alpha^2 r^4 / (2 pi (1-r^2)^2) * Int_{-pi}^{pi} integrand dt,
/// by adaptive quadrature on (0, pi] doubled by symmetry. Throws
/// numerical_error if the quadrature cannot reach quadrature_tol.
inline double count_variance(double alpha, double r, double quadrature_tol = 1e-9) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("count_variance: r must be in (0,1)");
    if (!(alpha > 1.0)) throw std::domain_error("count_variance: alpha must be > 1");
    const double I =
        adaptive_simpson([&](double t) { return count_variance_integrand(alpha, r, t); }, 0.0,
                         pi, quadrature_tol);
    const double omr2 = 1.0 - r * r;
    return alpha * alpha * r * r * r * r / (2.0 * pi * omr2 * omr2) * 2.0 * I;
}

/// Pair correlation of the zero process as a function of pseudo-hyperbolic
/// distance, in the numerically stable rewriting (s = 1 - r^2):
///   g(r) = [ s^a (a(1-s) - s(1-s^a))^2 + (a s^a (1-s) - (1-s^a))^2 ] / (1-s^a)^3.
/// For alpha r^2 < 1e-4 the leading series r^2 (1+alpha)^2 / (2 alpha) is used;
/// the direct form loses all digits to cancellation there.
inline double pair_correlation(double alpha, double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("pair_correlation: r must be in (0,1)");
    const double eps = alpha * r * r;
    if (eps < 1e-4) return r * r * (1.0 + alpha) * (1.0 + alpha) / (2.0 * alpha);
    const double u = r * r;            // 1 - s
    const double s = 1.0 - u;
    const double sa = std::exp(alpha * std::log(s));
    const double E = -std::expm1(alpha * std::log1p(-u));  // 1 - s^alpha
    const double A = alpha * u - s * E;
    const double B = alpha * sa * u - E;
    return (sa * A * A + B * B) / (E * E * E);
}

/// Literal polynomial form of the pair correlation (stable only for moderate
/// r and alpha; kept as the cross-check route against pair_correlation).
inline double pair_correlation_raw(double alpha, double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("pair_correlation_raw: r must be in (0,1)");
    const double s = 1.0 - r * r;
    const double a = alpha;
    const auto p = [&](double e) { return std::pow(s, e); };
    const double num = 1.0 + (a * a - 2.0 * a - 2.0) * (p(a) + p(2.0 + 2.0 * a)) +
                       (a + 1.0) * (a + 1.0) * (p(2.0 * a) + p(2.0 + a)) -
                       2.0 * a * a * (p(1.0 + a) + p(1.0 + 2.0 * a)) + p(2.0 + 3.0 * a);
    const double E = 1.0 - p(a);
    return num / (E * E * E);
}

namespace detail {

/// Antiderivative bracket of the ring-count integral,
///   [(alpha+1) s^alpha (1-s)^2 - (1-s^{alpha+1})^2] / (s (1-s^alpha)^2),
/// with the s -> 1 limit -(alpha+1)/alpha.
inline double ring_bracket(double alpha, double s) {
    if (s >= 1.0) return -(alpha + 1.0) / alpha;
    const double u = 1.0 - s;
    const double sa = std::exp(alpha * std::log(s));
    const double E = -std::expm1(alpha * std::log1p(-u));            // 1 - s^alpha
    const double E1 = -std::expm1((alpha + 1.0) * std::log1p(-u));   // 1 - s^{alpha+1}
    return ((alpha + 1.0) * sa * u * u - E1 * E1) / (s * E * E);
}

}  // namespace detail

/// Expected number of (w, z) pairs with w in a disk of radius r1 and z at ring
/// distance d_ph(z, w) in (a, b):
///   (r1^2 alpha^2 / (1-r1^2)) * (bracket(1-a^2) - bracket(1-b^2)).
/// Diverges as b -> 1 (the ring's hyperbolic area blows up); b is capped.
inline double ring_count_expectation(double alpha, double a, double b, double r1) {
    if (!(a >= 0.0 && a < b)) throw std::domain_error("ring_count_expectation: need 0 <= a < b");
    if (!(b < 1.0 - 1e-9)) throw std::domain_error("ring_count_expectation: b too close to 1");
    if (!(r1 > 0.0 && r1 < 1.0)) throw std::domain_error("ring_count_expectation: r1 in (0,1)");
    const double lo = detail::ring_bracket(alpha, 1.0 - a * a);
    const double hi = detail::ring_bracket(alpha, 1.0 - b * b);
    return r1 * r1 * alpha * alpha / (1.0 - r1 * r1) * (lo - hi);
}

/// Exact expectation of the finite-width ring estimator; replaces g as the
/// comparison target for estimated pair correlations. Two branches: the ring
/// (r0-h, r0+h) with r0-h > 0, and the degenerate inner radius r0 = h where
/// the bracket takes its limit value.
inline double corrected_pcf(double alpha, double r0, double h) {
    if (!(h > 0.0 && h <= r0)) throw std::domain_error("corrected_pcf: need 0 < h <= r0");
    if (!(r0 + h < 1.0)) throw std::domain_error("corrected_pcf: need r0 + h < 1");
    const double a = r0 - h, b = r0 + h;
    const double lo = (a > 0.0) ? detail::ring_bracket(alpha, 1.0 - a * a)
                                : -(alpha + 1.0) / alpha;
    const double hi = detail::ring_bracket(alpha, 1.0 - b * b);
    const double omr02 = 1.0 - r0 * r0;
    return omr02 * omr02 / (4.0 * h * r0) * (lo - hi);
}

/// Closed-form reference statistics for one alpha. The count variance is
/// cached on 256 log-spaced radii with monotone cubic interpolation in
/// (log r, log sigma^2); masks and calibration query it millions of times.
class ReferenceStats {
public:
    explicit ReferenceStats(double alpha) : alpha_(alpha) {
        if (!(alpha > 1.0)) throw std::invalid_argument("ReferenceStats: alpha must be > 1");
    }

    double alpha() const { return alpha_; }
    double mu(double r) const { return expected_count(alpha_, r); }
    double g(double r) const { return pair_correlation(alpha_, r); }
    double g_tilde(double r0, double h) const { return corrected_pcf(alpha_, r0, h); }

    double sigma2(double r) const {
        if (!(r > 0.0 && r < 1.0)) throw std::domain_error("sigma2: r must be in (0,1)");
        std::call_once(table_once_, [this] { build_table(); });
        if (r < r_lo_ || r > r_hi_) return count_variance(alpha_, r);
        return std::exp(table_(std::log(r)));
    }

private:
    void build_table() const {
        constexpr std::size_t n = 256;
        std::vector<double> lx(n), ly(n);
        const double llo = std::log(r_lo_), lhi = std::log(r_hi_);
        for (std::size_t i = 0; i < n; ++i) {
            lx[i] = llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1);
            ly[i] = std::log(count_variance(alpha_, std::exp(lx[i])));
        }
        table_ = MonotoneCubic(std::move(lx), std::move(ly));
    }

    double alpha_;
    double r_lo_ = 1e-3, r_hi_ = 0.995;
    mutable MonotoneCubic table_;
    mutable std::once_flag table_once_;
};

/// Local intensity estimate from a disk count,
///   rho_hat = |Z cap D(w1, r1)| (1-r1^2) / (4 pi r1^2 v1^2).
inline double estimate_local_intensity(const ZeroIndex& index, const PHDisk& disk) {
    disk.validate();
    const auto n = index.count_in_disk(disk.center, disk.radius);
    const double r2 = disk.radius * disk.radius;
    return static_cast<double>(n) * (1.0 - r2) /
           (4.0 * pi * r2 * disk.center.y * disk.center.y);
}

inline double estimate_local_intensity(const ZeroSet& zeros, const PHDisk& disk) {
    return estimate_local_intensity(ZeroIndex(zeros), disk);
}

/// Local pair-correlation estimate at one center.
struct PCFEstimate {
    UHPPoint center;
    double r1 = 0.0;
    double h = 0.0;
    std::vector<double> r0_values;
    std::vector<double> g_hat;
    std::size_t n_center = 0;  ///< |Z cap D(w1, r1)|
};

/// Bulk evaluator for the local pair-correlation estimator
///   g_hat(r0) = (1-r0^2)^2/(4 alpha h r0) * sum_{w in Z cap D(w1,r1)} ring(w, r0, h) / n,
/// where ring(w, ...) counts pattern points z != w with |d_ph(z,w) - r0| < h
/// over the full pattern. Ring counts are precomputed per zero once, so each
/// center costs one disk sweep. Immutable after construction; thread-safe.
class PcfEstimator {
public:
    PcfEstimator(const ZeroSet& zeros, std::vector<double> r0_values, double h, double alpha)
        : index_(zeros), r0s_(std::move(r0_values)), h_(h), alpha_(alpha) {
        for (double r0 : r0s_) {
            if (!(h_ > 0.0 && h_ <= r0))
                throw std::invalid_argument("PcfEstimator: need 0 < h <= min(r0)");
            tables_.push_back(index_.add_ring_table(r0, h_));
        }
    }

    const ZeroIndex& index() const { return index_; }

    /// Estimate at one center; the center disk must be nonempty.
    PCFEstimate estimate(const UHPPoint& center, double r1) const {
        PCFEstimate est;
        est.center = center;
        est.r1 = r1;
        est.h = h_;
        est.r0_values = r0s_;
        est.n_center = index_.count_in_disk(center, r1);
        if (est.n_center == 0)
            throw std::invalid_argument("estimate_pcf: center disk holds no zeros");
        est.g_hat.resize(r0s_.size());
        for (std::size_t k = 0; k < r0s_.size(); ++k) {
            const double sum = index_.ring_sum_in_disk(center, r1, tables_[k]);
            const double r0 = r0s_[k];
            const double omr02 = 1.0 - r0 * r0;
            est.g_hat[k] = omr02 * omr02 / (4.0 * alpha_ * h_ * r0) * sum /
                           static_cast<double>(est.n_center);
        }
        return est;
    }

private:
    ZeroIndex index_;
    std::vector<double> r0s_;
    double h_;
    double alpha_;
    std::vector<std::size_t> tables_;
};

/// One-shot local pair-correlation estimate. Errors if the center disk is
/// empty or, when the zero set carries its source grid, if the query rings
/// would leave the detectable coverage (an ROI violation).
inline PCFEstimate estimate_pcf(const ZeroSet& zeros, const UHPPoint& center, double r1,
                                const std::vector<double>& r0_values, double h, double alpha) {
    if (!zeros.source_grid.scales.empty() && zeros.source_grid.scales.size() >= 4 &&
        zeros.source_grid.times.size() >= 4) {
        double reach = r1;
        for (double r0 : r0_values) reach = std::max(reach, r1 + r0 + h);
        const auto& g = zeros.source_grid;
        const Window w{g.times[1], g.times[g.times.size() - 2], g.scales[1],
                       g.scales[g.scales.size() - 2]};
        if (boundary_ph_distance(w, center) <= reach)
            throw std::invalid_argument("estimate_pcf: query rings leave the zero coverage (ROI violation)");
    }
    PcfEstimator est(zeros, r0_values, h, alpha);
    return est.estimate(center, r1);
}

/// Chebyshev deviation test over pre-registered disks: disk k is flagged when
/// ||Z cap D_k| - mu_{r_k}| / sigma_{r_k} >= delta_k. Returns the union bound
/// sum_k 1/delta_k^2 on the probability of any flag under white noise.
struct ChebyshevResult {
    double union_bound = 0.0;
    std::vector<bool> flags;
};

inline ChebyshevResult chebyshev_deviation_test(const ZeroSet& zeros,
                                                const std::vector<PHDisk>& disks,
                                                const std::vector<double>& deltas, double alpha) {
    if (disks.size() != deltas.size())
        throw std::invalid_argument("chebyshev_deviation_test: disks/deltas size mismatch");
    ZeroIndex index(zeros);
    ChebyshevResult res;
    res.flags.resize(disks.size());
    for (std::size_t k = 0; k < disks.size(); ++k) {
        const double mu = expected_count(alpha, disks[k].radius);
        const double sd = std::sqrt(count_variance(alpha, disks[k].radius));
        const auto n = index.count_in_disk(disks[k].center, disks[k].radius);
        res.flags[k] = std::abs(static_cast<double>(n) - mu) / sd >= deltas[k];
        res.union_bound += 1.0 / (deltas[k] * deltas[k]);
    }
    return res;
}

}  // namespace zerotf

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zerotf/cwt.hpp"
#include "zerotf/pipeline.hpp"
#include "zerotf/signal.hpp"

namespace zerotf {

struct ConvergenceConfig {
    double alpha = 300.0;
    std::size_t base_length = 1 << 16;  ///< finest resolution sample count
    double base_interval = 1.0 / 8192.0;
    std::size_t levels = 4;  ///< dyadic resolutions (finest .. coarsest)
    double f_min = 200.0;    ///< compact scale band
    double f_max = 800.0;
    unsigned voices_per_octave = 8;
    NoiseKind kind = NoiseKind::complex_;
};

struct ConvergenceResult {
    /// mean over seeds of sup_{compact grid} |W_level(d) - W_level(d+1)|,
    /// index 0 = the two finest resolutions.
    std::vector<double> mean_sup_diff;
    std::size_t n_seeds = 0;
};

/// Empirical refinement check: one continuous white noise realized at dyadic
/// resolutions via pair-sum coarsening; the transforms are compared on a fixed
/// compact grid (common sample lattice, interior half of the time span). Under
/// refinement the sup-differences should decrease.
inline ConvergenceResult run_convergence_check(const ConvergenceConfig& cc, std::size_t n_seeds,
                                               std::uint64_t seed) {
    if (cc.levels < 2) throw std::invalid_argument("convergence: need >= 2 levels");
    if (cc.base_length % (1ull << (cc.levels - 1)) != 0)
        throw std::invalid_argument("convergence: base_length must be divisible by 2^(levels-1)");
    const WaveletParams params = WaveletParams::make(cc.alpha);
    // common geometric scale band
    std::vector<double> scales;
    {
        const double y_min = params.scale_for_frequency(cc.f_max);
        const double y_max = params.scale_for_frequency(cc.f_min);
        const double ratio = std::pow(2.0, 1.0 / cc.voices_per_octave);
        for (double y = y_min; y <= y_max * (1.0 + 1e-12); y *= ratio) scales.push_back(y);
    }
    const std::size_t D = cc.levels - 1;
    const double span = static_cast<double>(cc.base_length) * cc.base_interval;
    const double t_lo = 0.25 * span, t_hi = 0.75 * span;

    ConvergenceResult res;
    res.mean_sup_diff.assign(cc.levels - 1, 0.0);
    res.n_seeds = n_seeds;
    for (std::size_t s = 0; s < n_seeds; ++s) {
        SignalBuffer noise =
            generate_white_noise(cc.base_length, cc.base_interval, cc.kind, seed + 7919ull * s);
        // W sampled on the common lattice (columns of the coarsest level),
        // one matrix [scale][common column] per level
        std::vector<std::vector<std::vector<cplx>>> w(cc.levels);
        SignalBuffer level = std::move(noise);
        for (std::size_t d = 0; d <= D; ++d) {
            TimeScaleGrid g;
            g.times.resize(level.size());
            for (std::size_t l = 0; l < level.size(); ++l) g.times[l] = level.time_of(l);
            g.scales = scales;
            const std::size_t step = static_cast<std::size_t>(1) << (D - d);
            const std::size_t first = step - 1;
            std::vector<std::size_t> cols;
            for (std::size_t m = first; m < level.size(); m += step) {
                const double t = g.times[m];
                if (t >= t_lo && t <= t_hi) cols.push_back(m);
            }
            w[d].assign(scales.size(), std::vector<cplx>(cols.size()));
            scan_cwt(level, params, g, [&](std::size_t j, const std::vector<cplx>& row) {
                for (std::size_t c = 0; c < cols.size(); ++c) w[d][j][c] = row[cols[c]];
            });
            if (d < D) level = refine_noise(level);
        }
        for (std::size_t d = 0; d + 1 <= D; ++d) {
            double sup = 0.0;
            for (std::size_t j = 0; j < scales.size(); ++j) {
                const std::size_t nc = std::min(w[d][j].size(), w[d + 1][j].size());
                for (std::size_t c = 0; c < nc; ++c)
                    sup = std::max(sup, std::abs(w[d][j][c] - w[d + 1][j][c]));
            }
            res.mean_sup_diff[d] += sup / static_cast<double>(n_seeds);
        }
    }
    return res;
}

}  // namespace zerotf

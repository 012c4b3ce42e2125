#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "zerotf/common.hpp"

namespace zerotf {

/// Uniformly sampled signal. Sample l sits at origin_time + l * sample_interval.
/// Real signals are stored with zero imaginary parts.
struct SignalBuffer {
    std::vector<cplx> samples;
    double sample_interval = 0.0;  ///< T_s, seconds
    double origin_time = 0.0;      ///< time of sample 0, seconds

    std::size_t size() const { return samples.size(); }
    double duration() const { return static_cast<double>(samples.size()) * sample_interval; }
    double time_of(std::size_t l) const { return origin_time + static_cast<double>(l) * sample_interval; }
};

enum class NoiseKind { real, complex_ };

/// Portable Gaussian sampler (Box-Muller over mt19937_64); std::normal_distribution
/// is implementation-defined, this keeps seeded runs reproducible.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        double a = 2.0 * pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    cplx next_complex_unit() {  // unit total variance, split across parts
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-std::log1p(-u1));
        double a = 2.0 * pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

private:
    double uniform01() {
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0,1)
    }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// i.i.d. Gaussian samples with variance sample_interval per sample, the
/// discretization of unit-intensity white noise on intervals of width T_s.
/// Complex noise splits the variance evenly across real and imaginary parts.
inline SignalBuffer generate_white_noise(std::size_t length, double sample_interval,
                                         NoiseKind kind, std::uint64_t seed) {
    if (length < 1) throw std::invalid_argument("generate_white_noise: length must be >= 1");
    if (!(sample_interval > 0.0))
        throw std::invalid_argument("generate_white_noise: sample_interval must be > 0");
    SignalBuffer out;
    out.sample_interval = sample_interval;
    out.origin_time = 0.0;
    out.samples.resize(length);
    GaussianSampler g(seed);
    const double sd = std::sqrt(sample_interval);
    if (kind == NoiseKind::real) {
        for (auto& s : out.samples) s = cplx(sd * g.next(), 0.0);
    } else {
        for (auto& s : out.samples) s = sd * g.next_complex_unit();
    }
    return out;
}

/// Coarsen a noise realization by summing adjacent pairs. The result realizes
/// the same underlying continuous white noise at spacing 2*T_s (the noise
/// functional is additive over adjacent intervals), which is what makes
/// dyadic refinement comparisons of the transform meaningful.
inline SignalBuffer refine_noise(const SignalBuffer& fine) {
    if (fine.size() % 2 != 0)
        throw std::invalid_argument("refine_noise: input length must be even");
    SignalBuffer coarse;
    coarse.sample_interval = 2.0 * fine.sample_interval;
    // sample times are right interval endpoints; pairing keeps them aligned
    coarse.origin_time = fine.origin_time + fine.sample_interval;
    coarse.samples.resize(fine.size() / 2);
    for (std::size_t i = 0; i < coarse.samples.size(); ++i)
        coarse.samples[i] = fine.samples[2 * i] + fine.samples[2 * i + 1];
    return coarse;
}

/// Real multitone test signal; frequencies in Hz.
inline SignalBuffer make_multitone(std::size_t length, double sample_interval,
                                   const std::vector<double>& freqs_hz,
                                   const std::vector<double>& amps,
                                   const std::vector<double>& phases) {
    if (freqs_hz.size() != amps.size() || freqs_hz.size() != phases.size())
        throw std::invalid_argument("make_multitone: component arrays must match");
    SignalBuffer out;
    out.sample_interval = sample_interval;
    out.samples.assign(length, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
        const double w = 2.0 * pi * freqs_hz[i];
        for (std::size_t l = 0; l < length; ++l) {
            double t = static_cast<double>(l) * sample_interval;
            out.samples[l] += amps[i] * std::cos(w * t + phases[i]);
        }
    }
    return out;
}

/// Speech-shaped synthetic stand-in: a slowly pitch-modulated harmonic comb
/// with a formant-like spectral tilt and syllable-rate amplitude envelope.
inline SignalBuffer make_harmonic_voice(std::size_t length, double sample_interval,
                                        double f0_hz = 165.0, unsigned n_harmonics = 24) {
    SignalBuffer out;
    out.sample_interval = sample_interval;
    out.samples.assign(length, cplx(0.0, 0.0));
    double phase0 = 0.0;
    std::vector<double> phases(n_harmonics, 0.0);
    for (std::size_t l = 0; l < length; ++l) {
        const double t = static_cast<double>(l) * sample_interval;
        const double f0 = f0_hz * (1.0 + 0.03 * std::sin(2.0 * pi * 5.2 * t));  // vibrato
        phase0 += 2.0 * pi * f0 * sample_interval;
        const double env = 0.55 + 0.45 * std::sin(2.0 * pi * 2.8 * t + 0.7);  // syllable rate
        double v = 0.0;
        for (unsigned k = 1; k <= n_harmonics; ++k) {
            const double f = f0 * k;
            // crude two-formant weighting around 500 and 1800 Hz
            const double w1 = std::exp(-0.5 * std::pow((f - 500.0) / 250.0, 2.0));
            const double w2 = 0.6 * std::exp(-0.5 * std::pow((f - 1800.0) / 500.0, 2.0));
            const double amp = (0.15 + w1 + w2) / k;
            v += amp * std::cos(k * phase0 + phases[k - 1]);
        }
        out.samples[l] = cplx(env * v, 0.0);
    }
    return out;
}

/// Percussive stand-in: a train of exponentially decaying noise bursts.
inline SignalBuffer make_click_train(std::size_t length, double sample_interval,
                                     double rate_hz = 8.0, double decay_s = 0.01,
                                     std::uint64_t seed = 12345) {
    SignalBuffer out;
    out.sample_interval = sample_interval;
    out.samples.assign(length, cplx(0.0, 0.0));
    GaussianSampler g(seed);
    const double period = 1.0 / rate_hz;
    for (std::size_t l = 0; l < length; ++l) {
        const double t = static_cast<double>(l) * sample_interval;
        const double since = t - period * std::floor(t / period);
        if (since < 6.0 * decay_s)
            out.samples[l] = cplx(g.next() * std::exp(-since / decay_s), 0.0);
    }
    return out;
}

/// Mix white noise into a signal at a given SNR (dB, signal power over noise power).
inline SignalBuffer mix_noise_at_snr(const SignalBuffer& sig, double snr_db,
                                     NoiseKind kind, std::uint64_t seed) {
    double p = 0.0;
    for (const auto& s : sig.samples) p += std::norm(s);
    p /= static_cast<double>(sig.size());
    SignalBuffer noise = generate_white_noise(sig.size(), sig.sample_interval, kind, seed);
    double pn = 0.0;
    for (const auto& s : noise.samples) pn += std::norm(s);
    pn /= static_cast<double>(noise.size());
    const double target = p / std::pow(10.0, snr_db / 10.0);
    const double gain = (pn > 0.0) ? std::sqrt(target / pn) : 0.0;
    SignalBuffer out = sig;
    for (std::size_t l = 0; l < out.size(); ++l) out.samples[l] += gain * noise.samples[l];
    return out;
}

}  // namespace zerotf

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "zerotf/common.hpp"
#include "zerotf/cwt.hpp"
#include "zerotf/mask.hpp"
#include "zerotf/signal.hpp"
#include "zerotf/zeros.hpp"

namespace zerotf {

struct AudioData {
    std::vector<double> samples;  ///< mono
    double sample_rate = 0.0;
    unsigned source_channels = 1;  ///< >1 means the input was downmixed
};

namespace detail {

inline std::uint32_t rd_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline std::uint16_t rd_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline void wr_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}
inline void wr_u16(std::ostream& os, std::uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    os.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace detail

/// Mono PCM (16/24-bit) or IEEE float (32/64-bit) WAV reader. Multichannel
/// input is downmixed to the channel mean (source_channels reports it).
inline AudioData read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw data_error("read_wav: cannot open '" + path + "'");
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
    if (buf.size() < 44 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
        std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
        throw data_error("read_wav: '" + path + "' is not a RIFF/WAVE file");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const unsigned char* data = nullptr;
    std::size_t data_len = 0;
    std::size_t pos = 12;
    while (pos + 8 <= buf.size()) {
        const char* id = reinterpret_cast<const char*>(buf.data() + pos);
        const std::uint32_t len = detail::rd_u32(buf.data() + pos + 4);
        const unsigned char* body = buf.data() + pos + 8;
        if (pos + 8 + len > buf.size()) break;
        if (std::memcmp(id, "fmt ", 4) == 0 && len >= 16) {
            format = detail::rd_u16(body);
            channels = detail::rd_u16(body + 2);
            rate = detail::rd_u32(body + 4);
            bits = detail::rd_u16(body + 14);
            if (format == 0xFFFE && len >= 40) format = detail::rd_u16(body + 24);  // extensible
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = body;
            data_len = len;
        }
        pos += 8 + len + (len & 1);
    }
    if (!data || channels == 0 || rate == 0)
        throw data_error("read_wav: '" + path + "' has no usable fmt/data chunks");

    const bool pcm = (format == 1), flt = (format == 3);
    if (!pcm && !flt) throw data_error("read_wav: unsupported WAV encoding (format tag " +
                                       std::to_string(format) + ")");
    std::size_t bytes_per = bits / 8;
    if ((pcm && bits != 16 && bits != 24) || (flt && bits != 32 && bits != 64))
        throw data_error("read_wav: unsupported bit depth " + std::to_string(bits));

    const std::size_t frames = data_len / (bytes_per * channels);
    AudioData out;
    out.sample_rate = static_cast<double>(rate);
    out.source_channels = channels;
    out.samples.resize(frames);
    for (std::size_t i = 0; i < frames; ++i) {
        double acc = 0.0;
        for (unsigned c = 0; c < channels; ++c) {
            const unsigned char* p = data + (i * channels + c) * bytes_per;
            double v = 0.0;
            if (pcm && bits == 16) {
                auto s = static_cast<std::int16_t>(p[0] | (p[1] << 8));
                v = static_cast<double>(s) / 32768.0;
            } else if (pcm && bits == 24) {
                std::int32_t s = p[0] | (p[1] << 8) | (p[2] << 16);
                if (s & 0x800000) s |= ~0xFFFFFF;
                v = static_cast<double>(s) / 8388608.0;
            } else if (flt && bits == 32) {
                float fv;
                std::memcpy(&fv, p, 4);
                v = fv;
            } else {
                std::memcpy(&v, p, 8);
            }
            acc += v;
        }
        out.samples[i] = acc / channels;
    }
    return out;
}

/// Mono IEEE float32 WAV.
inline void write_wav(const std::string& path, const std::vector<double>& samples,
                      double sample_rate) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw data_error("write_wav: cannot open '" + path + "' for writing");
    const auto n = static_cast<std::uint32_t>(samples.size());
    const std::uint32_t data_len = n * 4;
    f.write("RIFF", 4);
    detail::wr_u32(f, 36 + data_len);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    detail::wr_u32(f, 16);
    detail::wr_u16(f, 3);  // IEEE float
    detail::wr_u16(f, 1);
    detail::wr_u32(f, static_cast<std::uint32_t>(sample_rate));
    detail::wr_u32(f, static_cast<std::uint32_t>(sample_rate) * 4);
    detail::wr_u16(f, 4);
    detail::wr_u16(f, 32);
    f.write("data", 4);
    detail::wr_u32(f, data_len);
    for (double s : samples) {
        float v = static_cast<float>(s);
        f.write(reinterpret_cast<const char*>(&v), 4);
    }
    if (!f) throw data_error("write_wav: write failed for '" + path + "'");
}

/// Raw little-endian float64 samples (no header).
inline std::vector<double> read_raw_f64(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw data_error("read_raw_f64: cannot open '" + path + "'");
    std::vector<char> buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (buf.size() % 8 != 0) throw data_error("read_raw_f64: size of '" + path + "' is not a multiple of 8");
    std::vector<double> out(buf.size() / 8);
    std::memcpy(out.data(), buf.data(), buf.size());
    return out;
}

/// Zero set as CSV (x_seconds, y_scale).
inline void write_zeros_csv(const std::string& path, const ZeroSet& zs) {
    std::ofstream f(path);
    if (!f) throw data_error("write_zeros_csv: cannot open '" + path + "'");
    f << "x_seconds,y_scale\n";
    f.precision(17);
    for (const auto& p : zs.points) f << p.x << ',' << p.y << '\n';
    if (!f) throw data_error("write_zeros_csv: write failed for '" + path + "'");
}

/// Generic CSV table.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ofstream f(path);
    if (!f) throw data_error("write_csv: cannot open '" + path + "'");
    f.precision(12);
    for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
        f << '\n';
    }
    if (!f) throw data_error("write_csv: write failed for '" + path + "'");
}

namespace detail {

inline void write_pgm(const std::string& path, const std::vector<std::vector<double>>& img,
                      double lo, double hi) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw data_error("write_pgm: cannot open '" + path + "'");
    const std::size_t h = img.size(), w = h ? img.front().size() : 0;
    f << "P5\n" << w << ' ' << h << "\n255\n";
    const double span = (hi > lo) ? hi - lo : 1.0;
    std::vector<unsigned char> line(w);
    for (const auto& row : img) {
        for (std::size_t k = 0; k < w; ++k) {
            const double t = std::clamp((row[k] - lo) / span, 0.0, 1.0);
            line[k] = static_cast<unsigned char>(std::lround(t * 255.0));
        }
        f.write(reinterpret_cast<const char*>(line.data()), static_cast<std::streamsize>(w));
    }
    if (!f) throw data_error("write_pgm: write failed for '" + path + "'");
}

}  // namespace detail

/// Log-modulus scalogram raster. Scale index 0 is the smallest scale, i.e.
/// the highest frequency, and lands on the top image row.
inline void write_scalogram_pgm(const std::string& path, const Scalogram& sc) {
    std::vector<std::vector<double>> img(sc.n_scales(), std::vector<double>(sc.n_times()));
    double lo = 1e300, hi = -1e300;
    for (std::size_t j = 0; j < sc.n_scales(); ++j) {
        for (std::size_t k = 0; k < sc.n_times(); ++k) {
            const double v = std::log10(std::abs(sc.values[j][k]) + 1e-12);
            img[j][k] = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    detail::write_pgm(path, img, lo, hi);
}

/// Mask raster in [0,1], high frequencies on top.
inline void write_mask_pgm(const std::string& path, const Mask& m) {
    detail::write_pgm(path, m.values, 0.0, 1.0);
}

/// Zero scatter as a standalone SVG (log-scale vertical axis).
inline void write_zeros_svg(const std::string& path, const ZeroSet& zs, double width = 1200,
                            double height = 600) {
    std::ofstream f(path);
    if (!f) throw data_error("write_zeros_svg: cannot open '" + path + "'");
    double x0 = 1e300, x1 = -1e300, ly0 = 1e300, ly1 = -1e300;
    for (const auto& p : zs.points) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        ly0 = std::min(ly0, std::log(p.y));
        ly1 = std::max(ly1, std::log(p.y));
    }
    if (zs.points.empty()) x0 = ly0 = 0.0, x1 = ly1 = 1.0;
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "' viewBox='0 0 " << width << ' ' << height << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n";
    const double sx = width / std::max(x1 - x0, 1e-12);
    const double sy = height / std::max(ly1 - ly0, 1e-12);
    f.precision(6);
    for (const auto& p : zs.points) {
        const double px = (p.x - x0) * sx;
        const double py = (std::log(p.y) - ly0) * sy;  // large scales at the bottom
        f << "<circle cx='" << px << "' cy='" << py << "' r='1.2' fill='black'/>\n";
    }
    f << "</svg>\n";
    if (!f) throw data_error("write_zeros_svg: write failed for '" + path + "'");
}

}  // namespace zerotf

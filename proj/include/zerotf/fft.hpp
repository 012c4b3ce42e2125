#pragma once

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "zerotf/common.hpp"

namespace zerotf {

namespace detail {
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// Thin FFTW wrapper. Plans are created with FFTW_ESTIMATE under a planner
/// lock (the FFTW planner is not thread-safe); execution is re-entrant.
/// Unnormalized in both directions; callers divide by n where needed.
class Fft {
public:
    static void transform(const std::vector<cplx>& in, std::vector<cplx>& out, int sign) {
        const auto n = in.size();
        out.resize(n);
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
            plan = fftw_plan_dft_1d(static_cast<int>(n),
                                    reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    sign, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
        }
        fftw_execute(plan);
        {
            std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
            fftw_destroy_plan(plan);
        }
    }

    static std::vector<cplx> forward(const std::vector<cplx>& in) {
        std::vector<cplx> out;
        transform(in, out, FFTW_FORWARD);
        return out;
    }

    /// Inverse including the 1/n normalization.
    static std::vector<cplx> inverse(const std::vector<cplx>& in) {
        std::vector<cplx> out;
        transform(in, out, FFTW_BACKWARD);
        const double inv = 1.0 / static_cast<double>(in.size());
        for (auto& v : out) v *= inv;
        return out;
    }
};

}  // namespace zerotf

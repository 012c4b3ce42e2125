#pragma once

#include <cmath>
#include <cstddef>

#include "zerotf/common.hpp"

namespace zerotf {

/// Adaptive Simpson quadrature with Richardson acceptance test. The tolerance
/// is treated as relative to the running integral magnitude (with an absolute
/// floor), which suits the smooth, sharply-localized integrands here.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = 48) {
    struct Impl {
        const F& f;
        double tol_abs;
        int max_depth;
        bool converged = true;

        double recurse(double a, double b, double fa, double fm, double fb, double whole,
                       double eps, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth >= max_depth) {
                converged = false;
                return left + right + delta / 15.0;
            }
            if (std::abs(delta) <= 15.0 * eps)
                return left + right + delta / 15.0;
            return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
                   recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
        }
    };

    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double eps = tol * std::max(std::abs(whole), 1e-300);
    Impl impl{f, eps, max_depth};
    const double result = impl.recurse(a, b, fa, fm, fb, whole, eps, 0);
    if (!impl.converged)
        throw numerical_error("adaptive_simpson: failed to reach requested tolerance");
    return result;
}

}  // namespace zerotf

#pragma once

// Independent standard-normal oracle for tests: CDF by adaptive Simpson
// integration of the density, quantile by bisection against it. Shares no
// code path with the library (which goes through erfc / a rational
// approximation), so agreement is meaningful.

#include <cmath>

namespace oracle {

inline double density(double x) { return std::exp(-0.5 * x * x) * 0.3989422804014327; }

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(double a, double b, double fa, double fm, double fb, double whole,
                    double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = density(lm);
    const double frm = density(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
        return left + right + delta / 15.0;
    }
    return adapt(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adapt(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

inline double integral_from_zero(double u) {
    if (u == 0.0) {
        return 0.0;
    }
    const double fa = density(0.0);
    const double fb = density(u);
    const double fm = density(0.5 * u);
    return adapt(0.0, u, fa, fm, fb, simpson(0.0, u, fa, fm, fb), 1e-15, 40);
}

}  // namespace detail

inline double cdf(double u) {
    if (u >= 0.0) {
        return 0.5 + detail::integral_from_zero(u);
    }
    return 0.5 - detail::integral_from_zero(-u);
}

inline double quantile(double p) {
    double lo = -40.0;
    double hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-14) {
            break;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle

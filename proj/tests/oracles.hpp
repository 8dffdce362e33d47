#pragma once

// Closed-form maps and brute-force helpers used as references by the tests.
// Nothing here calls into the library.

#include <cmath>
#include <functional>

namespace oracle {

// (1 + h a) x + h x^2 + h x^3 eta   (TC, s = +1)
inline double tc(double h, double x, double a, double eta) {
    return (1.0 + h * a) * x + h * x * x + h * x * x * x * eta;
}

// (1 + h a) x - h x^3 + h x^4 eta   (PF, s = -1)
inline double pf(double h, double x, double a, double eta) {
    return (1.0 + h * a) * x - h * x * x * x + h * x * x * x * x * eta;
}

// Root of an increasing-then-decreasing sign change by plain bisection.
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
    double flo = g(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = g(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Nonzero TC fixed point with tail c h^p: root of a + x + c h^p x^2.
inline double tc_omega_hp(double h, int p, double a, double c = 1.0) {
    const double k = c * std::pow(h, p);
    if (k == 0.0) return -a;
    return -2.0 * a / (1.0 + std::sqrt(1.0 - 4.0 * k * a));
}

// Negative PF fixed point with tail c h^p: root of a - x^2 + c h^p x^3.
inline double pf_omega_hp(double h, int p, double a, double c = 1.0) {
    const double k = c * std::pow(h, p);
    if (k == 0.0) return -std::sqrt(a);
    return bisect([&](double x) { return a - x * x + k * x * x * x; }, -std::sqrt(2.0 * a),
                  -0.8 * std::sqrt(a));
}

// Envelope sequences written out from their definitions.
inline double tc_a(double h, double a, double n) {
    const double q = std::pow(1.0 + h * a, n);
    return -0.75 * a * (1.0 + h * a) * q / (2.0 + q);
}
inline double tc_b(double h, double a, double n) {
    const double q = std::pow(1.0 + h * a, n);
    return -2.0 * a * (1.0 + h * a) * q / (-1.0 + a + q);
}
inline double pf_a(double h, double a, double n) {
    const double q = std::pow(1.0 + h * a, n);
    return -0.8 * std::sqrt(a) * q / std::sqrt(5.0 + q * q);
}
inline double pf_b(double h, double a, double n) {
    const double q = std::pow(1.0 + h * a, n);
    return -2.0 * std::sqrt(a) * q / std::sqrt(a - 1.0 + q * q);
}

}  // namespace oracle

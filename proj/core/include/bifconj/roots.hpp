#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include "bifconj/error.hpp"

namespace bifconj {

// Bisection on [a, b] with f(a), f(b) of opposite sign (or zero). Runs until
// the bracket stops shrinking.
template <class F>
double bisect(F&& f, double a, double b) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) throw BracketError("bisect: no sign change on bracket");
    for (int it = 0; it < 2000; ++it) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    return std::abs(fa) < std::abs(fb) ? a : b;
}

// Newton polish of a bracketed root; never leaves [lo, hi] and keeps the best iterate.
template <class F, class DF>
double newton_polish(F&& f, DF&& df, double x, double lo, double hi, int max_iter = 8) {
    double best = x;
    double fbest = std::abs(f(x));
    for (int it = 0; it < max_iter && fbest > 0.0; ++it) {
        const double d = df(x);
        if (d == 0.0 || !std::isfinite(d)) break;
        const double xn = x - f(x) / d;
        if (!(xn >= lo && xn <= hi)) break;
        const double fn = std::abs(f(xn));
        if (fn < fbest) {
            best = xn;
            fbest = fn;
        }
        if (xn == x) break;
        x = xn;
    }
    return best;
}

}  // namespace bifconj

#include "bifconj/derivative.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "bifconj/error.hpp"

namespace bifconj {

namespace {

double stencil(const std::function<double(double)>& g, int order, double t, double s) {
    switch (order) {
        case 1:
            return (-g(t + 2 * s) + 8 * g(t + s) - 8 * g(t - s) + g(t - 2 * s)) / (12 * s);
        case 2:
            return (-g(t + 2 * s) + 16 * g(t + s) - 30 * g(t) + 16 * g(t - s) - g(t - 2 * s)) /
                   (12 * s * s);
        case 3:
            return (-g(t + 3 * s) + 8 * g(t + 2 * s) - 13 * g(t + s) + 13 * g(t - s) -
                    8 * g(t - 2 * s) + g(t - 3 * s)) /
                   (8 * s * s * s);
        default:
            throw InvalidArgument("derivative order must be 1, 2 or 3");
    }
}

}  // namespace

double derivative(const std::function<double(double)>& g, int order, double t,
                  const DerivativeOptions& opt) {
    if (order < 1 || order > 3) throw InvalidArgument("derivative order must be 1, 2 or 3");
    // Richardson tableau; the stencil error expands in s^4, s^6, ...
    std::vector<std::vector<double>> R;
    double best = std::numeric_limits<double>::quiet_NaN();
    double best_err = std::numeric_limits<double>::infinity();
    double s = opt.initial_step;
    for (int k = 0; k < opt.max_levels; ++k, s *= 0.5) {
        R.emplace_back(k + 1);
        R[k][0] = stencil(g, order, t, s);
        double fac = 16.0;
        for (int j = 1; j <= k; ++j, fac *= 4.0) {
            R[k][j] = R[k][j - 1] + (R[k][j - 1] - R[k - 1][j - 1]) / (fac - 1.0);
        }
        if (k == 0) continue;
        const double err = std::max(std::abs(R[k][k] - R[k - 1][k - 1]),
                                    std::abs(R[k][k] - R[k][k - 1]));
        if (err <= best_err) {
            best_err = err;
            best = R[k][k];
        }
        const double scale = std::max(std::abs(best), opt.abs_floor);
        if (best_err <= 1e-3 * opt.rel_tol * scale) break;
        // roundoff has taken over
        if (k >= 3 && err > 4.0 * best_err) break;
    }
    if (!std::isfinite(best)) throw AccuracyError("derivative: non-finite estimate");
    if (best_err > opt.rel_tol * std::max(std::abs(best), opt.abs_floor)) {
        throw AccuracyError("derivative: extrapolation stagnated at error estimate " +
                            std::to_string(best_err));
    }
    return best;
}

double map_derivative(const ScalarMap& map, int order, double h, double x, double alpha,
                      const DerivativeOptions& opt) {
    return derivative([&](double t) { return map(h, t, alpha); }, order, x, opt);
}

double map_alpha_derivative(const ScalarMap& map, double h, double x, double alpha,
                            const DerivativeOptions& opt) {
    return derivative([&](double a) { return map(h, x, a); }, 1, alpha, opt);
}

}  // namespace bifconj

#pragma once

#include <functional>

#include "bifconj/maps.hpp"

namespace bifconj {

struct DerivativeOptions {
    double initial_step = 1e-2;
    int max_levels = 10;
    double rel_tol = 1e-7;
    double abs_floor = 1e-3;  // relative accuracy is measured against max(|d|, abs_floor)
};

// order-th derivative of g at t via 4th-order central stencils and Richardson
// extrapolation over steps s_k = initial_step * 2^-k.
double derivative(const std::function<double(double)>& g, int order, double t,
                  const DerivativeOptions& opt = {});

// d^order/dx^order of map(h, x, alpha).
double map_derivative(const ScalarMap& map, int order, double h, double x, double alpha,
                      const DerivativeOptions& opt = {});

// d/dalpha of map(h, x, alpha).
double map_alpha_derivative(const ScalarMap& map, double h, double x, double alpha,
                            const DerivativeOptions& opt = {});

}  // namespace bifconj

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bifconj/maps.hpp"
#include "bifconj/report.hpp"

namespace bifconj {

struct ButcherTableau {
    std::string name;
    std::vector<std::vector<double>> beta;  // s x s
    std::vector<double> gamma;              // s

    int stages() const { return static_cast<int>(gamma.size()); }
    bool is_explicit() const;

    static ButcherTableau euler();
    static ButcherTableau rk4();
    static ButcherTableau implicit_midpoint();
};

// f(x, alpha)
using Rhs = std::function<double(double, double)>;

struct RKMethod {
    ButcherTableau tableau;
    Rhs f;
    double solver_tol = 1e-14;
    int max_iter = 100;
};

// One step x + h * sum gamma_i k_i. Implicit stages are solved by damped
// fixed-point iteration; ConvergenceError carries the iteration count.
double rk_apply(const RKMethod& m, double h, double x, double alpha);

ParamMap rk_param_map(const RKMethod& m, DomainBox box = {}, std::string name = {});

// Checks phi(h,0,alpha) == 0, phi_x(h,0,0) == 1 and phi_xx(h,0,0) == 0 for
// each h. Throws PreconditionError naming f^B, f_x^B or f_xx^B when the
// right-hand side itself fails the corresponding condition.
EstimateReport rk_check_pf_conditions(const RKMethod& m, std::span<const double> hs,
                                      double tol = 1e-8);
EstimateReport rk_check_pf_conditions(const RKMethod& m);

}  // namespace bifconj

#include "bifconj/rk.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "bifconj/derivative.hpp"

namespace bifconj {

bool ButcherTableau::is_explicit() const {
    for (std::size_t i = 0; i < beta.size(); ++i)
        for (std::size_t j = i; j < beta[i].size(); ++j)
            if (beta[i][j] != 0.0) return false;
    return true;
}

ButcherTableau ButcherTableau::euler() { return {"euler", {{0.0}}, {1.0}}; }

ButcherTableau ButcherTableau::rk4() {
    return {"rk4",
            {{0, 0, 0, 0}, {0.5, 0, 0, 0}, {0, 0.5, 0, 0}, {0, 0, 1, 0}},
            {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6}};
}

ButcherTableau ButcherTableau::implicit_midpoint() { return {"implicit_midpoint", {{0.5}}, {1.0}}; }

namespace {

void validate(const ButcherTableau& t) {
    const auto s = t.gamma.size();
    if (s == 0 || t.beta.size() != s)
        throw InvalidArgument("Butcher tableau '" + t.name + "' has inconsistent stage count");
    for (const auto& row : t.beta)
        if (row.size() != s) throw InvalidArgument("Butcher tableau '" + t.name + "' is not square");
}

}  // namespace

double rk_apply(const RKMethod& m, double h, double x, double alpha) {
    const auto& t = m.tableau;
    validate(t);
    const int s = t.stages();
    std::vector<double> k(s, 0.0);
    auto stage_arg = [&](const std::vector<double>& kk, int i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += t.beta[i][j] * kk[j];
        return x + h * acc;
    };
    if (t.is_explicit()) {
        for (int i = 0; i < s; ++i) k[i] = m.f(stage_arg(k, i), alpha);
    } else {
        std::fill(k.begin(), k.end(), m.f(x, alpha));
        // out = stage map applied to kk; returns the scaled residual |kk - out|
        auto apply = [&](const std::vector<double>& kk, std::vector<double>& out) {
            double r = 0.0, scale = 1.0;
            for (int i = 0; i < s; ++i) {
                out[i] = m.f(stage_arg(kk, i), alpha);
                r = std::max(r, std::abs(kk[i] - out[i]));
                scale = std::max(scale, std::abs(kk[i]));
            }
            return r / scale;
        };
        std::vector<double> F(s), trial(s), Ft(s);
        double theta = 1.0;
        double r = apply(k, F);
        int it = 0;
        while (!(r <= m.solver_tol)) {
            if (++it > m.max_iter || !std::isfinite(r)) {
                throw ConvergenceError("implicit Runge-Kutta stage solve did not converge", it - 1);
            }
            for (int i = 0; i < s; ++i) trial[i] = k[i] + theta * (F[i] - k[i]);
            const double rt = apply(trial, Ft);
            if (rt < r || theta < 1e-3) {
                k.swap(trial);
                F.swap(Ft);
                r = rt;
            } else {
                theta *= 0.5;
            }
        }
    }
    double acc = 0.0;
    for (int i = 0; i < s; ++i) acc += t.gamma[i] * k[i];
    return x + h * acc;
}

ParamMap rk_param_map(const RKMethod& m, DomainBox box, std::string name) {
    ParamMap pm;
    pm.name = name.empty() ? m.tableau.name : std::move(name);
    pm.eval = [m](double h, double x, double a) { return rk_apply(m, h, x, a); };
    pm.box = box;
    return pm;
}

EstimateReport rk_check_pf_conditions(const RKMethod& m, std::span<const double> hs, double tol) {
    auto fx0 = [&](double x) { return m.f(x, 0.0); };
    const double f0 = m.f(0.0, 0.0);
    if (std::abs(f0) > tol) {
        throw PreconditionError("f^B", "f(0,0) = " + std::to_string(f0));
    }
    const double f1 = derivative(fx0, 1, 0.0);
    if (std::abs(f1) > 1e-7) throw PreconditionError("f_x^B", "f_x(0,0) = " + std::to_string(f1));
    const double f2 = derivative(fx0, 2, 0.0);
    if (std::abs(f2) > 1e-7) throw PreconditionError("f_xx^B", "f_xx(0,0) = " + std::to_string(f2));

    double worst = 0.0;
    bool exact_zero = true;
    std::ostringstream detail;
    detail.precision(3);
    const std::array<double, 5> alphas{-0.1, -0.01, 0.0, 0.01, 0.1};
    for (double h : hs) {
        for (double a : alphas) {
            if (rk_apply(m, h, 0.0, a) != 0.0) exact_zero = false;
        }
        auto phi = [&](double x) { return rk_apply(m, h, x, 0.0); };
        const double px = derivative(phi, 1, 0.0);
        const double pxx = derivative(phi, 2, 0.0);
        worst = std::max({worst, std::abs(px - 1.0), std::abs(pxx)});
        detail << "h=" << h << ": phi_x-1=" << (px - 1.0) << " phi_xx=" << pxx << "; ";
    }
    detail << (exact_zero ? "phi(h,0,alpha)=0 exactly" : "phi(h,0,alpha)!=0");
    ReportContext ctx;
    ctx.h = hs.empty() ? 0.0 : hs.front();
    ctx.region = m.tableau.name;
    return make_report("rk_pf_conditions", exact_zero ? worst : INFINITY, tol, 0.0, ctx, detail.str());
}

EstimateReport rk_check_pf_conditions(const RKMethod& m) {
    static constexpr std::array<double, 2> hs{0.1, 0.01};
    return rk_check_pf_conditions(m, hs);
}

}  // namespace bifconj

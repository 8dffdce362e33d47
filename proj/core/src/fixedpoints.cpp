#include "bifconj/fixedpoints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bifconj/derivative.hpp"
#include "bifconj/estimates.hpp"
#include "bifconj/parallel.hpp"
#include "bifconj/roots.hpp"

namespace bifconj {

std::string_view to_string(Stability s) {
    switch (s) {
        case Stability::Attracting: return "attracting";
        case Stability::Repelling: return "repelling";
        case Stability::Neutral: return "neutral";
    }
    return "neutral";
}

Stability stability_from_multiplier(double m) {
    if (std::abs(m) < 1.0 - 1e-10) return Stability::Attracting;
    if (std::abs(m) > 1.0 + 1e-10) return Stability::Repelling;
    return Stability::Neutral;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::TC: return "TC";
        case Verdict::PF: return "PF";
        case Verdict::Fold: return "fold";
        case Verdict::None: return "none";
    }
    return "none";
}

namespace {

double multiplier_at(const ScalarMap& map, double h, double x, double alpha) {
    try {
        return map_derivative(map, 1, h, x, alpha);
    } catch (const AccuracyError&) {
        const double d = 1e-6 * std::max(1.0, std::abs(x));
        return (map(h, x + d, alpha) - map(h, x - d, alpha)) / (2 * d);
    }
}

FixedPoint make_fixed_point(double x, double multiplier, double residual) {
    return {x, multiplier, residual, stability_from_multiplier(multiplier)};
}

}  // namespace

FixedPointScan find_fixed_points(const ScalarMap& map, double h, double alpha, double lo,
                                 double hi, int subintervals) {
    if (!(hi > lo) || subintervals < 1) throw InvalidArgument("find_fixed_points: empty interval");
    auto F = [&](double x) { return map(h, x, alpha) - x; };
    const int n = subintervals;
    std::vector<double> xs(n + 1), Fs(n + 1);
    bool all_zero = true;
    for (int i = 0; i <= n; ++i) {
        xs[i] = i == n ? hi : lo + (hi - lo) * i / n;
        Fs[i] = F(xs[i]);
        if (Fs[i] != 0.0) all_zero = false;
    }
    FixedPointScan out;
    if (all_zero) {
        out.continuum = true;
        return out;
    }
    std::vector<double> roots;
    for (int i = 0; i <= n; ++i) {
        if (Fs[i] == 0.0) {
            roots.push_back(xs[i]);
            continue;
        }
        if (i < n && Fs[i + 1] != 0.0 && (Fs[i] > 0.0) != (Fs[i + 1] > 0.0)) {
            double r = bisect(F, xs[i], xs[i + 1]);
            const double d = 1e-7 * std::max(1.0, std::abs(r));
            auto dF = [&](double x) { return (F(x + d) - F(x - d)) / (2 * d); };
            r = newton_polish(F, dF, r, xs[i], xs[i + 1]);
            roots.push_back(r);
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots) {
        if (merged.empty() || r - merged.back() > 1e-10) merged.push_back(r);
    }
    for (double r : merged) {
        out.points.push_back(make_fixed_point(r, multiplier_at(map, h, r, alpha), std::abs(F(r))));
    }
    return out;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

FixedPoint bracketed_nf_root(const NormalForm& nf, double h, double alpha, double a, double b,
                             const std::string& constraint) {
    // g = (N(x) - x) / (h x^(deg-1)) without the division
    const bool tc = nf.kind() == NFKind::TC;
    auto g = [&](double x) {
        const double eta = nf.tail().value(h, x, alpha);
        return tc ? alpha + nf.sign() * x + x * x * eta
                  : alpha + nf.sign() * x * x + x * x * x * eta;
    };
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double glo = g(lo), ghi = g(hi);
    if (glo != 0.0 && ghi != 0.0 && (glo > 0.0) == (ghi > 0.0)) {
        throw BracketError("fixed point not bracketed by " + constraint + " at h=" + fmt(h) +
                           ", alpha=" + fmt(alpha) + " (g = " + fmt(glo) + ", " + fmt(ghi) + ")");
    }
    double r = bisect(g, lo, hi);
    const double d = 1e-7 * std::max(std::abs(r), 1e-300);
    auto dg = [&](double x) { return (g(x + d) - g(x - d)) / (2 * d); };
    r = newton_polish(g, dg, r, lo, hi);
    return make_fixed_point(r, nf.dx(h, r, alpha), std::abs(nf(h, r, alpha) - r));
}

}  // namespace

FixedPoint tc_nonzero_fixed_point(const NormalForm& nf, double h, double alpha) {
    if (nf.kind() != NFKind::TC) throw InvalidArgument("tc_nonzero_fixed_point needs a TC normal form");
    if (alpha == 0.0) throw InvalidArgument("tc_nonzero_fixed_point: alpha = 0 has no nonzero fixed point");
    const double s = nf.sign();
    return bracketed_nf_root(nf, h, alpha, -s * 1.5 * alpha, -s * 6.0 / 7.0 * alpha,
                             "(-(3/2)alpha, -(6/7)alpha)");
}

FixedPoint pf_negative_fixed_point(const NormalForm& nf, double h, double alpha) {
    if (nf.kind() != NFKind::PF) throw InvalidArgument("pf_negative_fixed_point needs a PF normal form");
    const double r2 = -nf.sign() * alpha;
    if (!(r2 > 0.0)) throw InvalidArgument("pf_negative_fixed_point: no nonzero branch at this alpha");
    const double r = std::sqrt(r2);
    return bracketed_nf_root(nf, h, alpha, -std::sqrt(2.0) * r, -0.8 * r,
                             "(-sqrt(2 alpha), -(4/5)sqrt(alpha))");
}

FixedPoint pf_positive_fixed_point(const NormalForm& nf, double h, double alpha) {
    if (nf.kind() != NFKind::PF) throw InvalidArgument("pf_positive_fixed_point needs a PF normal form");
    const double r2 = -nf.sign() * alpha;
    if (!(r2 > 0.0)) throw InvalidArgument("pf_positive_fixed_point: no nonzero branch at this alpha");
    const double r = std::sqrt(r2);
    return bracketed_nf_root(nf, h, alpha, 0.8 * r, std::sqrt(2.0) * r,
                             "((4/5)sqrt(alpha), sqrt(2 alpha))");
}

BranchDiagram trace_branches(const ScalarMap& map, double h, double alpha_lo, double alpha_hi,
                             int n_alpha, double x_lo, double x_hi) {
    if (n_alpha < 3) throw InvalidArgument("trace_branches needs n_alpha >= 3");
    if (!(alpha_hi > alpha_lo) || !(x_hi > x_lo)) throw InvalidArgument("trace_branches: empty range");
    BranchDiagram d;
    d.h = h;
    d.window = {x_lo, x_hi};
    for (int i = 0; i < n_alpha; ++i) {
        d.alpha_grid.push_back(i == n_alpha - 1 ? alpha_hi
                                                : alpha_lo + (alpha_hi - alpha_lo) * i / (n_alpha - 1));
    }
    std::vector<FixedPointScan> scans(n_alpha);
    parallel_for(n_alpha, [&](std::size_t i) {
        scans[i] = find_fixed_points(map, h, d.alpha_grid[i], x_lo, x_hi);
    });

    const double dx_scan = (x_hi - x_lo) / kScanSubintervals;
    const double dalpha = (alpha_hi - alpha_lo) / (n_alpha - 1);
    const double cap = 10.0 * std::max(dx_scan, dalpha * (x_hi - x_lo) / (alpha_hi - alpha_lo));

    std::vector<int> active;  // indices into d.branches
    for (int i = 0; i < n_alpha; ++i) {
        const auto& pts = scans[i].points;
        struct Cand {
            double dist;
            int branch;
            int point;
        };
        std::vector<Cand> cands;
        for (int b : active)
            for (int k = 0; k < static_cast<int>(pts.size()); ++k)
                cands.push_back({std::abs(d.branches[b].points.back().x - pts[k].x), b, k});
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Cand& a, const Cand& b) { return a.dist < b.dist; });
        std::vector<int> point_branch(pts.size(), -1);
        std::vector<int> next_active;
        std::vector<bool> branch_used(d.branches.size(), false);
        for (const auto& c : cands) {
            if (c.dist > cap || branch_used[c.branch] || point_branch[c.point] >= 0) continue;
            branch_used[c.branch] = true;
            point_branch[c.point] = c.branch;
        }
        for (int k = 0; k < static_cast<int>(pts.size()); ++k) {
            if (point_branch[k] < 0) {
                Branch br;
                br.id = static_cast<int>(d.branches.size());
                d.branches.push_back(br);
                point_branch[k] = br.id;
            }
            auto& br = d.branches[point_branch[k]];
            const BranchPoint bp{d.alpha_grid[i], pts[k].x, pts[k].multiplier, pts[k].stability};
            if (!br.points.empty()) {
                const double m0 = br.points.back().multiplier - 1.0;
                const double m1 = bp.multiplier - 1.0;
                if ((m0 < 0.0 && m1 > 0.0) || (m0 > 0.0 && m1 < 0.0)) {
                    d.stability_changes.emplace_back(br.id, 0.5 * (br.points.back().alpha + bp.alpha));
                }
            }
            br.points.push_back(bp);
            next_active.push_back(point_branch[k]);
        }
        active = std::move(next_active);
    }
    return d;
}

namespace {

// Richardson on a symmetric stencil S(s) whose error expands in s^2, s^4, ...
double richardson_even(const std::function<double(double)>& S, double s0 = 1e-2) {
    std::vector<std::vector<double>> R;
    double best = std::numeric_limits<double>::quiet_NaN();
    double best_err = std::numeric_limits<double>::infinity();
    double s = s0;
    for (int k = 0; k < 10; ++k, s *= 0.5) {
        R.emplace_back(k + 1);
        R[k][0] = S(s);
        double fac = 4.0;
        for (int j = 1; j <= k; ++j, fac *= 4.0)
            R[k][j] = R[k][j - 1] + (R[k][j - 1] - R[k - 1][j - 1]) / (fac - 1.0);
        if (k == 0) continue;
        const double err = std::abs(R[k][k] - R[k - 1][k - 1]);
        if (err <= best_err) {
            best_err = err;
            best = R[k][k];
        }
        if (best_err <= 1e-12 * std::max(1.0, std::abs(best))) break;
        if (k >= 3 && err > 4.0 * best_err) break;
    }
    if (best_err > 1e-7 * std::max(std::abs(best), 1e-3)) {
        throw AccuracyError("mixed derivative: extrapolation stagnated");
    }
    return best;
}

}  // namespace

BifClass classify_bifurcation(const ScalarMap& map, double h, double zero_tol) {
    auto g = [&](double x, double a) { return map(h, x, a); };
    BifClass c;
    auto& v = c.values;
    v["g"] = g(0.0, 0.0);
    v["g_alpha"] = derivative([&](double a) { return g(0.0, a); }, 1, 0.0);
    v["g_x"] = derivative([&](double x) { return g(x, 0.0); }, 1, 0.0);
    v["g_xx"] = derivative([&](double x) { return g(x, 0.0); }, 2, 0.0);
    v["g_xxx"] = derivative([&](double x) { return g(x, 0.0); }, 3, 0.0);
    v["g_alphaalpha"] = derivative([&](double a) { return g(0.0, a); }, 2, 0.0);
    v["g_xalpha"] = richardson_even([&](double s) {
        return (g(s, s) - g(s, -s) - g(-s, s) + g(-s, -s)) / (4 * s * s);
    });
    c.discriminant = v["g_xalpha"] * v["g_xalpha"] - v["g_xx"] * v["g_alphaalpha"];

    auto& k = c.conditions;
    k["g=0"] = std::abs(v["g"]) <= zero_tol;
    k["g_alpha=0"] = std::abs(v["g_alpha"]) <= zero_tol;
    k["g_x=1"] = std::abs(v["g_x"] - 1.0) <= zero_tol;
    k["g_xx!=0"] = std::abs(v["g_xx"]) > zero_tol;
    k["g_xx=0"] = !k["g_xx!=0"];
    k["g_xxx!=0"] = std::abs(v["g_xxx"]) > zero_tol;
    k["g_xalpha!=0"] = std::abs(v["g_xalpha"]) > zero_tol;
    k["discriminant>0"] = c.discriminant > zero_tol;

    const bool base = k["g=0"] && k["g_alpha=0"] && k["g_x=1"];
    if (base && k["g_xx=0"] && k["g_xxx!=0"] && k["g_xalpha!=0"]) {
        c.verdict = Verdict::PF;
    } else if (base && k["g_xx!=0"] && k["discriminant>0"]) {
        c.verdict = Verdict::TC;
    } else if (k["g=0"] && k["g_x=1"] && !k["g_alpha=0"] && k["g_xx!=0"]) {
        c.verdict = Verdict::Fold;
    } else {
        c.verdict = Verdict::None;
    }
    return c;
}

AsymmetricPFResult verify_asymmetric_pf_branches(const ScalarMap& map, double h,
                                                 double alpha_probe, int n_alpha) {
    if (!(alpha_probe > 0.0) || n_alpha < 4) {
        throw InvalidArgument("verify_asymmetric_pf_branches: need alpha_probe > 0 and n_alpha >= 4");
    }
    const BifClass cls = classify_bifurcation(map, h);
    if (cls.verdict != Verdict::PF) {
        throw PreconditionError("verdict PF", "map classifies as " + std::string(to_string(cls.verdict)));
    }
    const double gxxx = cls.values.at("g_xxx");
    const double gxa = cls.values.at("g_xalpha");
    AsymmetricPFResult res;
    res.side = gxxx * gxa > 0.0 ? -1 : +1;
    const double scale = std::sqrt(6.0 * std::abs(gxa) / std::abs(gxxx));

    ReportContext ctx{h, alpha_probe, 0, "pf", res.side > 0 ? "alpha>0" : "alpha<0"};
    std::vector<double> abs_alpha, rp, rm;
    res.c1 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_alpha; ++i) {
        const double t = static_cast<double>(i) / (n_alpha - 1);
        const double a_abs = alpha_probe * std::pow(10.0, -3.0 * (1.0 - t));
        const double a = res.side * a_abs;
        const double w = 2.0 * scale * std::sqrt(a_abs) + 1e-12;
        const auto scan = find_fixed_points(map, h, a, -w, w);
        std::vector<double> roots;
        for (const auto& fp : scan.points) roots.push_back(fp.x);
        res.alphas.push_back(a);
        res.roots.push_back(roots);
        if (roots.size() != 3) {
            res.report = make_report("asymmetric_pf_branches", INFINITY, 0.02, 0.0, ctx,
                                     "expected 3 branches, found " + std::to_string(roots.size()) +
                                         " at alpha=" + fmt(a));
            return res;
        }
        const double r0 = roots[1];
        res.c0 = std::max(res.c0, std::abs(r0) / a_abs);
        for (double r : {roots[0], roots[2]}) {
            const double c = std::abs(r) / std::sqrt(a_abs);
            res.c1 = std::min(res.c1, c);
            res.c2 = std::max(res.c2, c);
        }
        abs_alpha.push_back(a_abs);
        rm.push_back(std::abs(roots[0]));
        rp.push_back(std::abs(roots[2]));
    }
    res.slope_plus = order_fit(abs_alpha, rp).slope;
    res.slope_minus = order_fit(abs_alpha, rm).slope;
    const double dev = std::max(std::abs(res.slope_plus - 0.5), std::abs(res.slope_minus - 0.5));
    std::ostringstream detail;
    detail.precision(6);
    detail << "c0=" << res.c0 << " c1=" << res.c1 << " c2=" << res.c2 << " slope+=" << res.slope_plus
           << " slope-=" << res.slope_minus;
    res.report = make_report("asymmetric_pf_branches", dev, 0.02, res.c2, ctx, detail.str());
    return res;
}

}  // namespace bifconj

#include "bifconj/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "bifconj/catalog.hpp"
#include "bifconj/conjugacy.hpp"
#include "bifconj/error.hpp"
#include "bifconj/estimates.hpp"
#include "bifconj/experiments.hpp"
#include "bifconj/fixedpoints.hpp"
#include "bifconj/parallel.hpp"
#include "bifconj/rk.hpp"

namespace bifconj {

namespace {

using Reports = std::vector<EstimateReport>;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

// Tails used by the random property suites, all within K = 1.
struct SampleForms {
    std::vector<NormalForm> tc;
    std::vector<NormalForm> pf;
};

const SampleForms& sample_forms() {
    static const SampleForms forms = [] {
        const std::vector<std::function<Tail()>> tails = {
            [] { return zero_tail(); },          [] { return hp_power_tail(1); },
            [] { return hp_power_tail(2); },     [] { return hp_power_tail(1, -1.0); },
            [] { return sin_tail(); },
        };
        SampleForms f;
        for (const auto& t : tails) {
            f.tc.push_back(make_tc_normal_form(t(), 1.0));
            f.pf.push_back(make_pf_normal_form(t(), 1.0));
        }
        return f;
    }();
    return forms;
}

double nonzero_fixed_point(const NormalForm& nf, double h, double alpha) {
    return nf.kind() == NFKind::TC ? tc_nonzero_fixed_point(nf, h, alpha).x
                                   : pf_negative_fixed_point(nf, h, alpha).x;
}

// ---------------------------------------------------------------- huls

Reports suite_huls() {
    Reports out;
    for (int a = 1; a <= 2; ++a) {
        for (int q = 1; q <= 3; ++q) {
            for (double z0 : {0.1, 0.01}) {
                long double z = z0;
                double worst = 0.0;
                for (int n = 1; n <= 10000; ++n) {
                    z = z / std::pow(1.0L + a * q * std::pow(z, static_cast<long double>(q)),
                                     1.0L / q);
                    const double cf = huls_closed_form(z0, a, q, n);
                    worst = std::max(worst, static_cast<double>(std::abs((cf - z) / z)));
                }
                out.push_back(make_report("huls_closed_form", worst, 1e-12, a * q, {0.0, 0.0, 0, "", ""},
                                          "a=" + std::to_string(a) + " q=" + std::to_string(q) +
                                              " z0=" + fmt(z0) + " n<=10000"));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------- envelopes

struct SandwichSample {
    std::size_t phi = 0;
    std::size_t Phi = 0;
    double h = 0.0;
    double alpha = 0.0;
};

struct SandwichOutcome {
    std::size_t violations = 0;
    std::size_t split_violations = 0;
    std::size_t steps = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
    std::string first;
};

inline constexpr double kOrbitStop = 1e-13;
inline constexpr std::size_t kOrbitCap = 2'000'000;

// max(x_n, J(x_n)) < a_n along the inner orbits, where J(x_n) = N_Phi^n(x0).
SandwichOutcome inner_sandwich(const NormalForm& phi, const NormalForm& Phi, double h,
                               double alpha) {
    const bool tc = phi.kind() == NFKind::TC;
    const double w_phi = nonzero_fixed_point(phi, h, alpha);
    const double w_Phi = nonzero_fixed_point(Phi, h, alpha);
    const double x0 = tc ? -alpha / 3.0 : -std::sqrt(alpha / 8.0);
    const double split = tc ? -2.0 / 3.0 * alpha : -std::sqrt(0.6 * alpha);
    const auto n_split = static_cast<std::size_t>(std::ceil(6.0 / (h * alpha)));
    SandwichOutcome o;
    double x = x0, X = x0;
    for (std::size_t n = 0; n < kOrbitCap; ++n) {
        const double a = tc ? tc_envelope_a(h, alpha, n) : pf_envelope_a(h, alpha, n);
        const double top = std::max(x, X);
        o.worst_slack = std::min(o.worst_slack, a - top);
        if (!(top < a)) {
            if (!o.violations) o.first = "n=" + std::to_string(n);
            ++o.violations;
        }
        if (n > n_split && !(top < split)) ++o.split_violations;
        o.steps = n;
        if (std::abs(x - w_phi) < kOrbitStop && std::abs(X - w_Phi) < kOrbitStop && n > n_split) break;
        x = phi(h, x, alpha);
        X = Phi(h, X, alpha);
    }
    return o;
}

// b_n <= min(z_n, J(z_n)) along the outer orbits from z0 = -eps0.
SandwichOutcome outer_sandwich(const NormalForm& phi, const NormalForm& Phi, double h,
                               double alpha) {
    const bool tc = phi.kind() == NFKind::TC;
    const double w_phi = nonzero_fixed_point(phi, h, alpha);
    const double w_Phi = nonzero_fixed_point(Phi, h, alpha);
    const double z0 = -std::min(phi.box().eps0, Phi.box().eps0);
    SandwichOutcome o;
    double z = z0, Z = z0;
    for (std::size_t n = 0; n < kOrbitCap; ++n) {
        const double b = tc ? tc_envelope_b(h, alpha, n) : pf_envelope_b(h, alpha, n);
        const double bottom = std::min(z, Z);
        o.worst_slack = std::min(o.worst_slack, bottom - b);
        if (!(b <= bottom)) {
            if (!o.violations) o.first = "n=" + std::to_string(n);
            ++o.violations;
        }
        o.steps = n;
        if (std::abs(z - w_phi) < kOrbitStop && std::abs(Z - w_Phi) < kOrbitStop) break;
        z = phi(h, z, alpha);
        Z = Phi(h, Z, alpha);
    }
    return o;
}

Reports suite_envelopes(NFKind kind, std::uint64_t seed) {
    constexpr std::size_t kSamples = 500;
    const auto& forms = kind == NFKind::TC ? sample_forms().tc : sample_forms().pf;
    const NormalBox box = kind == NFKind::TC ? tc_box(1.0) : pf_box(1.0);
    // Log-uniform sub-box; the smallest h*alpha keeps orbit lengths bounded.
    const double h_lo = 1e-2;
    const double a_lo = kind == NFKind::TC ? 1e-3 : 5e-4;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, forms.size() - 1);
    std::vector<SandwichSample> inner(kSamples), outer(kSamples);
    for (auto* set : {&inner, &outer}) {
        for (auto& s : *set) {
            s.phi = pick(rng);
            s.Phi = pick(rng);
            s.h = log_uniform(rng, h_lo, box.h0);
            s.alpha = log_uniform(rng, a_lo, box.alpha0);
        }
    }
    std::vector<SandwichOutcome> in_res(kSamples), out_res(kSamples);
    parallel_for(kSamples, [&](std::size_t i) {
        in_res[i] = inner_sandwich(forms[inner[i].phi], forms[inner[i].Phi], inner[i].h, inner[i].alpha);
        out_res[i] = outer_sandwich(forms[outer[i].phi], forms[outer[i].Phi], outer[i].h, outer[i].alpha);
    });

    const std::string k(to_string(kind));
    auto summarize = [&](const std::string& name, const std::vector<SandwichSample>& samples,
                         const std::vector<SandwichOutcome>& res, bool split, double constant,
                         const char* region) {
        std::size_t bad = 0, steps = 0;
        double slack = std::numeric_limits<double>::infinity();
        std::string first;
        for (std::size_t i = 0; i < res.size(); ++i) {
            const std::size_t v = split ? res[i].split_violations : res[i].violations;
            if (v && first.empty()) {
                first = "; first failing sample h=" + fmt(samples[i].h) + " alpha=" + fmt(samples[i].alpha) +
                        " " + res[i].first;
            }
            bad += v;
            steps = std::max(steps, res[i].steps);
            slack = std::min(slack, res[i].worst_slack);
        }
        return make_report(name, static_cast<double>(bad), 0.0, constant, {0.0, 0.0, 0, k, region},
                           "samples=" + std::to_string(res.size()) + " h in [" + fmt(h_lo) + ", " + fmt(box.h0) +
                               "] alpha in [" + fmt(a_lo) + ", " + fmt(box.alpha0) + "] longest orbit " +
                               std::to_string(steps) + " min slack " + fmt(slack) + first);
    };
    Reports out;
    out.push_back(summarize(k + "_envelope_a", inner, in_res, false, kind == NFKind::TC ? 0.75 : 0.8, "inner"));
    out.push_back(summarize(k + "_envelope_b", outer, out_res, false, 2.0, "outer"));
    out.push_back(summarize(k + "_split_index", inner, in_res, true, 6.0, "inner"));

    // The orbit identity J(x_n) = N_Phi^n(x0) against the evaluated conjugacy.
    double worst = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        const auto& s = inner[i];
        const auto J = build_conjugacy(forms[s.Phi], forms[s.phi], s.h, s.alpha, Region::Inner,
                                       HalfPlane::Lower);
        double x = J.u0(), X = J.u0();
        for (int n = 0; n <= 20; ++n) {
            worst = std::max(worst, std::abs(J(x) - X));
            x = forms[s.phi](s.h, x, s.alpha);
            X = forms[s.Phi](s.h, X, s.alpha);
        }
    }
    out.push_back(make_report(k + "_orbit_identity", worst, 1e-12, 0.0, {0.0, 0.0, 0, k, "inner"},
                              "|J(x_n) - N_Phi^n(x0)| for 10 samples, n <= 20"));
    return out;
}

// ------------------------------------------------------- fixed points

Reports suite_fixed_points(std::uint64_t seed) {
    Reports out;
    std::mt19937_64 rng(seed);
    for (NFKind kind : {NFKind::TC, NFKind::PF}) {
        const bool tc = kind == NFKind::TC;
        const auto& forms = tc ? sample_forms().tc : sample_forms().pf;
        const NormalBox box = tc ? tc_box(1.0) : pf_box(1.0);
        std::uniform_int_distribution<std::size_t> pick(0, forms.size() - 1);
        std::uniform_real_distribution<double> uh(0.0, box.h0), ua(0.0, box.alpha0);
        std::size_t outside = 0;
        double worst_res = 0.0;
        for (int i = 0; i < 200; ++i) {
            const auto& nf = forms[pick(rng)];
            double h = uh(rng), a = ua(rng);
            if (h == 0.0) h = box.h0;
            if (a == 0.0) a = box.alpha0;
            const FixedPoint fp = tc ? tc_nonzero_fixed_point(nf, h, a) : pf_negative_fixed_point(nf, h, a);
            const double lo = tc ? -1.5 * a : -std::sqrt(2.0 * a);
            const double hi = tc ? -6.0 / 7.0 * a : -0.8 * std::sqrt(a);
            if (!(lo < fp.x && fp.x < hi)) ++outside;
            worst_res = std::max(worst_res, fp.residual);
        }
        const std::string k(to_string(kind));
        out.push_back(make_report(k + "_fixed_point_interval", static_cast<double>(outside), 0.0,
                                  tc ? 1.5 : std::sqrt(2.0), {0.0, 0.0, 0, k, "fixed-point"},
                                  "200 random (h, alpha, tail) samples in the box"));
        out.push_back(make_report(k + "_fixed_point_residual", worst_res, 1e-13, 0.0,
                                  {0.0, 0.0, 0, k, "fixed-point"}, "max |map(x) - x|"));
    }
    return out;
}

// ---------------------------------------------------- conjugacy grids

struct Cell {
    NFKind kind;
    int p;
    double h;
    double alpha;
    Region region;
    HalfPlane half;
};

bool region_exists(NFKind kind, Region r, HalfPlane half, double alpha) {
    if (r == Region::Outer) return true;
    if (kind == NFKind::TC) return half == HalfPlane::Lower ? alpha > 0.0 : alpha < 0.0;
    return alpha > 0.0;
}

std::vector<Cell> criterion_cells(bool both_p) {
    std::vector<Cell> cells;
    for (NFKind kind : {NFKind::TC, NFKind::PF}) {
        for (int p : both_p ? std::vector<int>{1, 2} : std::vector<int>{1}) {
            for (double h : {0.1, 0.05}) {
                for (double a : {0.005, 0.002, -0.002, -0.005}) {
                    for (Region r : {Region::Inner, Region::Outer}) {
                        for (HalfPlane hp : {HalfPlane::Lower, HalfPlane::Upper}) {
                            if (region_exists(kind, r, hp, a)) cells.push_back({kind, p, h, a, r, hp});
                        }
                    }
                }
            }
        }
    }
    return cells;
}

ConjugacyMap build_cell(const CatalogPair& pair, const Cell& c) {
    BuildOptions opt;
    const NormalBox box = c.kind == NFKind::TC ? tc_box(1.0) : pf_box(1.0);
    // The criterion grid reaches |alpha| = 0.005 > 1/288 for PF.
    opt.enforce_box = std::abs(c.alpha) <= box.alpha0;
    return build_conjugacy(pair.Phi, pair.phi, c.h, c.alpha, c.region, c.half, opt);
}

ReportContext cell_context(const Cell& c) {
    return {c.h, c.alpha, c.p, std::string(to_string(c.kind)),
            std::string(to_string(c.region)) + "/" + std::string(to_string(c.half))};
}

Reports suite_conjugacy_residual() {
    const auto cells = criterion_cells(true);
    Reports out(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const Cell& c = cells[i];
        const auto pair = catalog_pair(c.kind, c.p);
        const auto J = build_cell(pair, c);
        out[i] = make_report("conjugacy_residual", conjugacy_residual(J, 1024), 1e-10, 0.0,
                             cell_context(c), J.mirrored() ? "grid=1024 mirrored construction" : "grid=1024");
    });
    for (NFKind kind : {NFKind::TC, NFKind::PF}) {
        const auto pair = catalog_pair(kind, 1, "hp_power", "hp_power");
        const Cell c{kind, 1, 0.1, 0.002, Region::Inner, HalfPlane::Lower};
        const auto J = build_cell(pair, c);
        out.push_back(make_report("identity_degeneration", sup_id_minus_J(J, 1024).value, 1e-12, 0.0,
                                  cell_context(c), "N_Phi = N_phi"));
    }
    return out;
}

struct BoundCheck {
    std::string name;
    std::optional<std::pair<double, double>> sub;
    double bound;
    double constant;
};

std::vector<BoundCheck> bound_checks(const Cell& c, const ConjugacyMap& J, double cc) {
    const double K = 1.0;
    const bool lower = c.half == HalfPlane::Lower;
    const std::string suffix = lower ? "" : "_mirror";
    std::vector<BoundCheck> checks;
    const auto y_side = lower ? std::pair{J.u0(), 0.0} : std::pair{0.0, J.u0()};
    if (c.kind == NFKind::TC) {
        const bool inner_side = lower ? c.alpha > 0.0 : c.alpha < 0.0;
        if (c.region == Region::Inner && inner_side) {
            checks.push_back({"tc_inner_sup" + suffix, std::nullopt, bounds::tc_inner(cc, c.h, c.p, c.alpha), 350 * cc});
            checks.push_back({"tc_inner_y_side_sup" + suffix, y_side, bounds::tc_inner_y_side(cc, c.h, c.p, c.alpha), cc / 3});
        }
        if (c.region == Region::Outer && !inner_side) {
            checks.push_back({"tc_outer_sup" + suffix, std::nullopt, bounds::tc_outer_nonpositive(cc, c.h, c.p), 12 * cc});
        }
    } else {
        if (c.region == Region::Inner && c.alpha > 0.0) {
            checks.push_back({"pf_inner_sup" + suffix, std::nullopt, bounds::pf_inner(cc, c.h, c.p, c.alpha), 1988 * cc});
            checks.push_back({"pf_inner_y_side_sup" + suffix, y_side, bounds::pf_inner_y_side(cc, c.h, c.p, c.alpha), cc / 8});
        }
        if (c.region == Region::Outer && c.alpha < 0.0) {
            checks.push_back({"pf_outer_sup" + suffix, std::nullopt, bounds::pf_outer_nonpositive(cc, K, c.h, c.p),
                              cc * (2 + 3 / (K * K))});
        }
    }
    return checks;
}

Reports run_bounds(bool mirrored) {
    std::vector<Cell> cells;
    for (const Cell& c : criterion_cells(true)) {
        if ((c.half == HalfPlane::Upper) != mirrored) continue;
        // Cheap pre-filter: only cells carrying a published bound are measured.
        if (c.kind == NFKind::TC) {
            const bool inner_side = c.half == HalfPlane::Lower ? c.alpha > 0.0 : c.alpha < 0.0;
            if ((c.region == Region::Inner) != inner_side) continue;
        } else if ((c.region == Region::Inner) != (c.alpha > 0.0)) {
            continue;
        }
        cells.push_back(c);
    }
    std::vector<Reports> per(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const Cell& c = cells[i];
        const auto pair = catalog_pair(c.kind, c.p);
        const auto J = build_cell(pair, c);
        for (const auto& chk : bound_checks(c, J, pair.c)) {
            const SupResult s = sup_id_minus_J(J, kSupGrid, chk.sub);
            per[i].push_back(make_report(chk.name, s.value, chk.bound, chk.constant, cell_context(c),
                                         "c=" + fmt(pair.c) + " argmax=" + fmt(s.argmax)));
        }
    });
    Reports out;
    for (auto& r : per) out.insert(out.end(), r.begin(), r.end());
    if (!mirrored) {
        for (NFKind kind : {NFKind::TC, NFKind::PF}) {
            for (int p : {1, 2}) {
                const auto pair = catalog_pair(kind, p);
                for (double h : {0.1, 0.05}) {
                    for (double a : {0.005, 0.002}) out.push_back(fixed_point_gap(pair.Phi, pair.phi, h, a, p, pair.c));
                }
            }
        }
    }
    return out;
}

// Lower bounds on the fixed-point gap, together with the upper bounds.
Reports suite_optimality() {
    Reports out;
    for (int p : {1, 2}) {
        const auto tc = catalog_pair(NFKind::TC, p);
        for (double h : {1.0, 0.5, 0.2, 0.1, 0.05, 0.01}) {
            for (double a : {0.125, 0.05, 0.02, 0.005, 0.002, 0.001}) {
                out.push_back(fixed_point_gap_lower(tc.Phi, tc.phi, h, a, p));
            }
        }
        const auto pf = catalog_pair(NFKind::PF, p);
        for (double h : {0.1, 0.05, 0.01}) {
            for (double a : {1.0 / 288.0, 0.002, 0.001, 1e-4, 0.005}) {
                out.push_back(fixed_point_gap_lower(pf.Phi, pf.phi, h, a, p));
            }
        }
        for (double h : {0.1, 0.05}) {
            for (double a : {0.005, 0.002}) {
                out.push_back(fixed_point_gap(tc.Phi, tc.phi, h, a, p, tc.c));
                out.push_back(fixed_point_gap(pf.Phi, pf.phi, h, a, p, pf.c));
            }
        }
    }
    return out;
}

Reports suite_order_fit() {
    Reports out;
    for (int p : {1, 2}) {
        SweepConfig cfg;
        cfg.kind = NFKind::TC;
        cfg.p = p;
        cfg.h = {0.1, 0.05, 0.025, 0.0125};
        cfg.alpha = {0.005};
        cfg.region = Region::Inner;
        const SweepResult r = h_sweep(cfg);
        const double slope = r.fits.empty() ? std::numeric_limits<double>::quiet_NaN() : r.fits.front().second.slope;
        std::string detail = "h in {0.1, 0.05, 0.025, 0.0125}, alpha=0.005";
        if (!r.fits.empty()) detail += ", r2=" + fmt(r.fits.front().second.r2);
        out.push_back(make_report("tc_order_fit_slope_error", std::isnan(slope) ? INFINITY : std::abs(slope - p),
                                  0.15, slope, {0.0, 0.005, p, "tc", "inner"}, detail));
    }
    return out;
}

// -------------------------------------------------- rk preservation

Reports suite_rk_preservation() {
    Reports out;
    const Rhs cubic = [](double x, double a) { return a * x + x * x * x; };
    const Rhs quadratic = [](double x, double a) { return a * x + x * x; };
    for (const auto& tab : {ButcherTableau::rk4(), ButcherTableau::implicit_midpoint()}) {
        RKMethod m{tab, cubic};
        EstimateReport r = rk_check_pf_conditions(m);
        r.name = "rk_pf_conditions_" + tab.name;
        out.push_back(r);
    }
    RKMethod euler{ButcherTableau::euler(), quadratic};
    double rejected = 1.0;
    std::string detail = "explicit Euler on alpha x + x^2 accepted";
    try {
        (void)rk_check_pf_conditions(euler);
    } catch (const PreconditionError& e) {
        if (e.condition() == "f_xx^B") rejected = 0.0;
        detail = e.what();
    }
    out.push_back(make_report("rk_euler_fxx_rejected", rejected, 0.0, 0.0, {0.0, 0.0, 0, "", ""}, detail));
    return out;
}

// --------------------------------------------------- classification

Reports suite_classification() {
    Reports out;
    const double h = 0.1;
    const std::map<std::string, std::function<bool(Verdict)>> expected = {
        {"example25", [](Verdict v) { return v != Verdict::PF; }},
        {"example26", [](Verdict v) { return v != Verdict::PF; }},
        {"example27", [](Verdict v) { return v != Verdict::PF; }},
        {"wiggins-counterexample", [](Verdict v) { return v == Verdict::None; }},
        {"tc-phi", [](Verdict v) { return v == Verdict::TC; }},
        {"pf-phi", [](Verdict v) { return v == Verdict::PF; }},
    };
    for (const auto& name : catalog_names()) {
        const ParamMap m = catalog_map(name, 1);
        const BifClass a = classify_bifurcation(m.eval, h);
        const BifClass b = classify_bifurcation(m.eval, h, kZeroTolerance / 2);
        const ReportContext ctx{h, 0.0, 1, "", "classification"};
        if (auto it = expected.find(name); it != expected.end()) {
            out.push_back(make_report("verdict_" + name, it->second(a.verdict) ? 0.0 : 1.0, 0.0, 0.0, ctx,
                                      "verdict " + std::string(to_string(a.verdict)) +
                                          ", discriminant " + fmt(a.discriminant)));
        }
        out.push_back(make_report("verdict_tolerance_invariance_" + name, a.verdict == b.verdict ? 0.0 : 1.0,
                                  0.0, kZeroTolerance, ctx,
                                  std::string(to_string(a.verdict)) + " vs " + std::string(to_string(b.verdict))));
    }
    // Fixed points exist exactly when alpha^2 >= 4 h^(2p).
    for (int p : {1, 2}) {
        const ParamMap m = catalog_map("example21", p);
        for (double hh : {0.1, 0.05}) {
            const double hp = std::pow(hh, p);
            std::size_t mismatches = 0;
            for (int k = -20; k <= 20; ++k) {
                if (k == 10 || k == -10) continue;
                const double a = 0.2 * hp * k;
                const auto scan = find_fixed_points(m.eval, hh, a, -5.0 * hp, 5.0 * hp);
                const bool none_expected = a * a < 4.0 * hp * hp;
                if (none_expected != scan.points.empty()) ++mismatches;
            }
            out.push_back(make_report("example21_gap_law", static_cast<double>(mismatches), 0.0, 2.0,
                                      {hh, 0.0, p, "", "classification"},
                                      "alpha = 0.2 k h^p, |k| <= 20, k != +-10"));
        }
    }
    return out;
}

// ---------------------------------------------------------- alignment

Reports suite_section5() {
    Reports out;
    const double h = 1e-3, alpha = -0.5;
    const AlignmentPair al = compute_alignment(h, alpha);
    const ReportContext ctx{h, alpha, kSection5Order, "tc", "section5"};
    out.push_back(make_report("alpha_tilde_series", al.series.alpha_tilde, al.series.bound, 1.0 / 120.0, ctx,
                              "alpha_tilde - alpha = " + fmt(al.alpha_tilde_minus_alpha)));
    out.push_back(make_report("rho_series", al.series.rho, al.series.bound, 1.0 / 20.0, ctx,
                              "rho - 1 = " + fmt(al.rho_minus_one)));

    const OrbitDiff aligned = orbit_closeness_experiment(h, -1.0, alpha, 3000);
    const double half = sup_prefix(aligned, 1500);
    out.push_back(make_report("delta_plateau", std::abs(aligned.sup / half - 1.0), 0.05, 0.0, ctx,
                              "sup N=3000 " + fmt(aligned.sup) + ", N=1500 " + fmt(half)));
    const OrbitDiff perturbed = orbit_closeness_experiment(h, -1.0, alpha, 3000, 1e-7);
    out.push_back(make_lower_report("perturbation_ratio", perturbed.sup / aligned.sup, 10.0, 1e-7, ctx,
                                    "perturbed sup " + fmt(perturbed.sup)));

    double lo = INFINITY, hi = 0.0;
    for (double hh : {1e-2, 5e-3, 2.5e-3}) {
        const auto n = static_cast<std::size_t>(std::lround(3.0 / hh));
        const double s = orbit_closeness_experiment(hh, -1.0, alpha, n).sup;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    out.push_back(make_report("delta_h_uniformity", hi / lo, 4.0, 0.0, {0.0, alpha, kSection5Order, "tc", "section5"},
                              "sup over n h <= 3 for h in {1e-2, 5e-3, 2.5e-3}"));

    // Multipliers and quadratic coefficients after alignment.
    const long double z = static_cast<long double>(al.alpha_tilde_ld) * h;
    const long double p4 = 1 + z * (1 + z / 2 * (1 + z / 3 * (1 + z / 4)));
    out.push_back(make_report("aligned_multiplier", static_cast<double>(std::abs(p4 - std::exp(static_cast<long double>(alpha) * h))),
                              1e-12, 0.0, ctx, "P4(alpha_tilde h) - e^(alpha h)"));
    const double q = std::abs(exact_flow_quadratic_coefficient(h, alpha) -
                              al.rho * rk4_quadratic_coefficient(h, al.alpha_tilde));
    out.push_back(make_report("aligned_quadratic", q, 1e-10, 0.0, ctx, "c2_Phi - rho c2_phi"));
    return out;
}

// ---------------------------------------------------- z_n(0) decay

Reports suite_zn_decay(std::uint64_t seed) {
    Reports out;
    for (NFKind kind : {NFKind::TC, NFKind::PF}) {
        for (const char* tail : {"zero", "hp_power:1", "hp_power:2", "sin"}) {
            const auto pair = catalog_pair(kind, 1, tail, tail);
            for (double h : {0.1, 0.05}) {
                EstimateReport r = zn_zero_decay_check(pair.phi, h, 100000);
                r.detail = std::string("tail=") + tail + "; " + r.detail;
                out.push_back(r);
            }
        }
    }
    std::mt19937_64 rng(seed);
    for (NFKind kind : {NFKind::TC, NFKind::PF}) {
        const auto& forms = kind == NFKind::TC ? sample_forms().tc : sample_forms().pf;
        const NormalBox box = kind == NFKind::TC ? tc_box(1.0) : pf_box(1.0);
        std::uniform_int_distribution<std::size_t> pick(0, forms.size() - 1);
        std::uniform_real_distribution<double> ua(-box.alpha0, 0.0), uh(1e-2, box.h0);
        for (int i = 0; i < 20; ++i) {
            const auto& nf = forms[pick(rng)];
            double a = ua(rng), b = ua(rng);
            if (a > b) std::swap(a, b);
            const double h = uh(rng);
            EstimateReport r = alpha_monotonicity_check(nf, h, a, b, 20000);
            r.detail = "tail=" + nf.tail().name + "; " + r.detail;
            out.push_back(r);
        }
    }
    return out;
}

using SuiteFn = std::function<Reports(std::uint64_t)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> r = {
        {"huls", [](std::uint64_t) { return suite_huls(); }},
        {"tc-envelopes", [](std::uint64_t s) { return suite_envelopes(NFKind::TC, s); }},
        {"pf-envelopes", [](std::uint64_t s) { return suite_envelopes(NFKind::PF, s); }},
        {"fixed-points", [](std::uint64_t s) { return suite_fixed_points(s); }},
        {"conjugacy-residual", [](std::uint64_t) { return suite_conjugacy_residual(); }},
        {"bounds", [](std::uint64_t) { return run_bounds(false); }},
        {"bounds-mirror", [](std::uint64_t) { return run_bounds(true); }},
        {"optimality", [](std::uint64_t) { return suite_optimality(); }},
        {"order-fit", [](std::uint64_t) { return suite_order_fit(); }},
        {"rk-preservation", [](std::uint64_t) { return suite_rk_preservation(); }},
        {"classification", [](std::uint64_t) { return suite_classification(); }},
        {"section5", [](std::uint64_t) { return suite_section5(); }},
        {"zn-decay", [](std::uint64_t s) { return suite_zn_decay(s); }},
    };
    return r;
}

}  // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [n, f] : registry()) names.push_back(n);
    return names;
}

std::vector<EstimateReport> run_suite(std::string_view name, std::uint64_t seed) {
    for (const auto& [n, f] : registry()) {
        if (n == name) {
            Reports r = f(seed);
            for (auto& rep : r) rep.seed = seed;
            return r;
        }
    }
    throw InvalidArgument("unknown suite '" + std::string(name) + "'");
}

}  // namespace bifconj

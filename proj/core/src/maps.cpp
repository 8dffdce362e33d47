#include "bifconj/maps.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace bifconj {

namespace {

double ipow(double b, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

Tail zero_tail() {
    Tail t;
    t.name = "zero";
    t.value = [](double, double, double) { return 0.0; };
    t.dx = [](double, double, double) { return 0.0; };
    t.h_only = [](double) { return 0.0; };
    return t;
}

Tail hp_power_tail(int p, double coeff) {
    if (p < 0) throw InvalidArgument("hp_power tail needs p >= 0");
    Tail t;
    t.name = "hp_power:" + std::to_string(p);
    if (coeff != 1.0) t.name += "*" + fmt(coeff);
    t.value = [p, coeff](double h, double, double) { return coeff * ipow(h, p); };
    t.dx = [](double, double, double) { return 0.0; };
    t.h_only = [p, coeff](double h) { return coeff * ipow(h, p); };
    return t;
}

Tail sin_tail() {
    Tail t;
    t.name = "sin";
    t.value = [](double, double x, double) { return std::sin(x); };
    t.dx = [](double, double x, double) { return std::cos(x); };
    return t;
}

Tail tail_from_name(std::string_view spec) {
    if (spec == "zero") return zero_tail();
    if (spec == "sin") return sin_tail();
    constexpr std::string_view prefix = "hp_power:";
    if (spec.substr(0, prefix.size()) == prefix) {
        const auto rest = spec.substr(prefix.size());
        int p = -1;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), p);
        if (ec != std::errc() || ptr != rest.data() + rest.size() || p < 0) {
            throw InvalidArgument("bad tail exponent in '" + std::string(spec) + "'");
        }
        return hp_power_tail(p);
    }
    throw InvalidArgument("unknown tail '" + std::string(spec) +
                          "' (expected zero, sin or hp_power:<p>)");
}

std::string_view to_string(NFKind k) { return k == NFKind::TC ? "tc" : "pf"; }

NFKind nf_kind_from_string(std::string_view s) {
    if (s == "tc" || s == "TC") return NFKind::TC;
    if (s == "pf" || s == "PF") return NFKind::PF;
    throw InvalidArgument("unknown kind '" + std::string(s) + "' (expected tc or pf)");
}

NormalBox tc_box(double K) {
    return {1.0 / 5.0, std::min(1.0 / 25.0, 1.0 / (25.0 * K)), std::min(1.0 / 51.0, 1.0 / (51.0 * K))};
}

NormalBox pf_box(double K) {
    return {std::min(1.0 / 10.0, 8.0 * K * K), std::min(1.0 / 10.0, 1.0 / (5.0 * K)),
            std::min(1.0 / 288.0, 1.0 / (72.0 * K * K))};
}

NormalForm::NormalForm(NFKind kind, int s, Tail tail, double K, NormalBox box)
    : kind_(kind), s_(s), tail_(std::move(tail)), K_(K), box_(box) {
    if (s != 1 && s != -1) throw InvalidArgument("normal form sign must be +1 or -1");
    if (!(K > 0.0)) throw InvalidArgument("tail bound K must be positive");
    if (!tail_.value) throw InvalidArgument("tail has no value function");
}

double NormalForm::dx(double h, double x, double alpha) const {
    const double eta = tail_.value(h, x, alpha);
    double eta_x;
    if (tail_.dx) {
        eta_x = tail_.dx(h, x, alpha);
    } else {
        const double d = 1e-6 * std::max(1.0, std::abs(x));
        eta_x = (tail_.value(h, x + d, alpha) - tail_.value(h, x - d, alpha)) / (2 * d);
    }
    if (kind_ == NFKind::TC) {
        return 1.0 + h * alpha + 2.0 * s_ * h * x + h * x * x * (3.0 * eta + x * eta_x);
    }
    return 1.0 + h * alpha + 3.0 * s_ * h * x * x + h * x * x * x * (4.0 * eta + x * eta_x);
}

void NormalForm::check_parameters(double h, double alpha) const {
    const bool tc = kind_ == NFKind::TC;
    if (!(h > 0.0) || h > box_.h0) {
        throw BoundViolation(tc ? "0 < h <= h0 = 1/5" : "0 < h <= h0 = min(1/10, 8K^2)",
                             "h = " + fmt(h) + ", h0 = " + fmt(box_.h0));
    }
    if (!(std::abs(alpha) <= box_.alpha0)) {
        throw BoundViolation(tc ? "|alpha| <= alpha0 = min(1/51, 1/(51K))"
                                : "|alpha| <= alpha0 = min(1/288, 1/(72K^2))",
                             "alpha = " + fmt(alpha) + ", alpha0 = " + fmt(box_.alpha0));
    }
}

ParamMap NormalForm::as_param_map(std::string name) const {
    ParamMap m;
    m.name = name.empty() ? std::string(to_string(kind_)) + "-normal-form[" + tail_.name + "]"
                          : std::move(name);
    NormalForm self = *this;
    m.eval = [self](double h, double x, double a) { return self(h, x, a); };
    m.box = {box_.h0, box_.eps0, box_.alpha0};
    m.monotone = true;
    return m;
}

namespace {

constexpr int kTailGrid = 201;

NormalBox shrink_to_domain(NormalBox b, const Tail& tail) {
    if (tail.domain) {
        b.h0 = std::min(b.h0, tail.domain->h_max);
        b.eps0 = std::min(b.eps0, tail.domain->x_max);
        b.alpha0 = std::min(b.alpha0, tail.domain->alpha_max);
    }
    return b;
}

// Samples |eta|, |eta_x|, |eta_xx|, |eta_alpha| on the box; derivatives are
// differences of neighbouring grid values.
void check_tail_bound(const Tail& tail, double K, const NormalBox& b) {
    const int n = kTailGrid;
    const double tol = K * (1.0 + 1e-6) + 1e-9;
    const double dx = 2.0 * b.eps0 / (n - 1);
    const double da = 2.0 * b.alpha0 / (n - 1);
    std::vector<double> v(static_cast<std::size_t>(n) * n);
    auto at = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };
    for (int ih = 0; ih < n; ++ih) {
        const double h = b.h0 * (ih + 1) / n;
        for (int ia = 0; ia < n; ++ia) {
            const double a = -b.alpha0 + ia * da;
            for (int ix = 0; ix < n; ++ix) {
                const double x = -b.eps0 + ix * dx;
                const double e = tail.value(h, x, a);
                if (!std::isfinite(e)) {
                    throw BoundViolation("tail finite on the box", "non-finite tail at h=" + fmt(h) +
                                                                       " x=" + fmt(x) + " alpha=" + fmt(a));
                }
                at(ia, ix) = e;
            }
        }
        auto fail = [&](const char* what, double val, int ia, int ix) {
            throw BoundViolation(std::string("|") + what + "| <= K",
                                 "value " + fmt(val) + " at h=" + fmt(h) + " x=" +
                                     fmt(-b.eps0 + ix * dx) + " alpha=" + fmt(-b.alpha0 + ia * da) +
                                     ", K = " + fmt(K));
        };
        for (int ia = 0; ia < n; ++ia) {
            for (int ix = 0; ix < n; ++ix) {
                if (std::abs(at(ia, ix)) > tol) fail("tail", at(ia, ix), ia, ix);
                if (ix > 0 && ix < n - 1) {
                    const double d1 = (at(ia, ix + 1) - at(ia, ix - 1)) / (2 * dx);
                    const double d2 = (at(ia, ix + 1) - 2 * at(ia, ix) + at(ia, ix - 1)) / (dx * dx);
                    if (std::abs(d1) > tol) fail("d tail/dx", d1, ia, ix);
                    if (std::abs(d2) > tol) fail("d^2 tail/dx^2", d2, ia, ix);
                }
                if (ia > 0 && ia < n - 1) {
                    const double dA = (at(ia + 1, ix) - at(ia - 1, ix)) / (2 * da);
                    if (std::abs(dA) > tol) fail("d tail/dalpha", dA, ia, ix);
                }
            }
        }
    }
}

}  // namespace

NormalForm make_tc_normal_form(Tail tail, double K, int s) {
    if (!(K > 0.0)) throw InvalidArgument("tail bound K must be positive, got " + fmt(K));
    const NormalBox b = shrink_to_domain(tc_box(K), tail);
    check_tail_bound(tail, K, b);
    return NormalForm(NFKind::TC, s, std::move(tail), K, b);
}

NormalForm make_pf_normal_form(Tail tail, double K, int s) {
    if (!(K > 0.0)) throw InvalidArgument("tail bound K must be positive, got " + fmt(K));
    const NormalBox b = shrink_to_domain(pf_box(K), tail);
    check_tail_bound(tail, K, b);
    return NormalForm(NFKind::PF, s, std::move(tail), K, b);
}

}  // namespace bifconj

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "bifconj/error.hpp"

namespace bifconj {

struct DomainBox {
    double h_max = 1.0;
    double x_max = 1.0;
    double alpha_max = 1.0;

    bool contains(double h, double x, double alpha) const {
        return h > 0.0 && h <= h_max && std::abs(x) <= x_max && std::abs(alpha) <= alpha_max;
    }
};

// (h, x, alpha) -> x'
using ScalarMap = std::function<double(double, double, double)>;

struct ParamMap {
    std::string name;
    ScalarMap eval;
    DomainBox box;
    bool monotone = false;

    double operator()(double h, double x, double alpha) const { return eval(h, x, alpha); }
};

// Higher-order part of a normal form: eta(h, x, alpha).
struct Tail {
    std::string name;
    ScalarMap value;
    ScalarMap dx;  // optional; finite differences are used when empty
    // Set when the tail depends on h only; lets hot loops freeze it per (h, alpha).
    std::function<double(double)> h_only;
    std::optional<DomainBox> domain;
};

Tail zero_tail();
// coeff * h^p
Tail hp_power_tail(int p, double coeff = 1.0);
Tail sin_tail();
// "zero", "hp_power:<p>", "sin"
Tail tail_from_name(std::string_view spec);

enum class NFKind { TC, PF };

std::string_view to_string(NFKind k);
NFKind nf_kind_from_string(std::string_view s);

struct NormalBox {
    double h0 = 0.0;
    double eps0 = 0.0;
    double alpha0 = 0.0;
};

NormalBox tc_box(double K);
NormalBox pf_box(double K);

class NormalForm {
public:
    NormalForm(NFKind kind, int s, Tail tail, double K, NormalBox box);

    NFKind kind() const noexcept { return kind_; }
    int sign() const noexcept { return s_; }
    const Tail& tail() const noexcept { return tail_; }
    double K() const noexcept { return K_; }
    const NormalBox& box() const noexcept { return box_; }
    int degree() const noexcept { return kind_ == NFKind::TC ? 2 : 3; }

    double operator()(double h, double x, double alpha) const {
        const double eta = tail_.value(h, x, alpha);
        if (kind_ == NFKind::TC) {
            const double x2 = x * x;
            return (1.0 + h * alpha) * x + s_ * h * x2 + h * x2 * x * eta;
        }
        const double x3 = x * x * x;
        return (1.0 + h * alpha) * x + s_ * h * x3 + h * x3 * x * eta;
    }

    double dx(double h, double x, double alpha) const;

    // Throws BoundViolation naming the first violated box constraint.
    void check_parameters(double h, double alpha) const;

    ParamMap as_param_map(std::string name = {}) const;

private:
    NFKind kind_;
    int s_;
    Tail tail_;
    double K_;
    NormalBox box_;
};

// Tail and its first x-derivatives, the alpha-derivative are checked against K
// on a 201^3 grid covering the box.
NormalForm make_tc_normal_form(Tail tail, double K, int s = +1);
NormalForm make_pf_normal_form(Tail tail, double K, int s = -1);

// Time-h map of x' = alpha x + x^2.
template <class T>
T tc_model_exact_flow_t(T h, T x0, T alpha) {
    using std::abs;
    using std::exp;
    using std::expm1;
    if (abs(alpha) < T(1e-12)) {
        const T den = T(1) - h * x0;
        if (abs(den) < T(1e-14)) throw PoleError("exact flow: 1 - h*x0 vanishes");
        return x0 / den;
    }
    const T em1 = expm1(alpha * h);
    const T den = alpha - x0 * em1;
    if (abs(den) < T(1e-14)) throw PoleError("exact flow: alpha + x0*(1 - e^{alpha h}) vanishes");
    return x0 * alpha * exp(alpha * h) / den;
}

inline double tc_model_exact_flow(double h, double x0, double alpha) {
    return tc_model_exact_flow_t<double>(h, x0, alpha);
}

// Time-h map of y' = -y.
inline double model_y_flow(double h, double y0) { return y0 * std::exp(-h); }

}  // namespace bifconj

#include "bifconj/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bifconj/derivative.hpp"
#include "bifconj/fixedpoints.hpp"

namespace bifconj {

namespace {

// (1 + h alpha)^-n without overflow for large n
double inv_growth(double h, double alpha, double n) { return std::exp(-n * std::log1p(h * alpha)); }

// 1 - (1 + h alpha)^-n
double one_minus_inv_growth(double h, double alpha, double n) {
    return -std::expm1(-n * std::log1p(h * alpha));
}

double root_q(double v, int q) {
    switch (q) {
        case 1: return v;
        case 2: return std::sqrt(v);
        case 3: return std::cbrt(v);
        default: return std::pow(v, 1.0 / q);
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(8);
    os << v;
    return os.str();
}

}  // namespace

double tc_envelope_a(double h, double alpha, double n) {
    const double q = inv_growth(h, alpha, n);
    return -0.75 * alpha * (1.0 + h * alpha) / (2.0 * q + 1.0);
}

double tc_envelope_b(double h, double alpha, double n) {
    const double q = inv_growth(h, alpha, n);
    return -2.0 * alpha * (1.0 + h * alpha) / (alpha * q + one_minus_inv_growth(h, alpha, n));
}

double pf_envelope_a(double h, double alpha, double n) {
    const double q = inv_growth(h, alpha, n);
    return -0.8 * std::sqrt(alpha) / std::sqrt(5.0 * q * q + 1.0);
}

double pf_envelope_b(double h, double alpha, double n) {
    const double q = inv_growth(h, alpha, n);
    return -2.0 * std::sqrt(alpha) /
           std::sqrt(alpha * q * q + one_minus_inv_growth(h, alpha, 2.0 * n));
}

double huls_closed_form(double z0, double a, int q, double n) {
    if (q < 1) throw InvalidArgument("huls_closed_form: q must be a positive integer");
    return z0 / root_q(1.0 + n * a * q * std::pow(z0, q), q);
}

double huls_step(double z, double a, int q) {
    if (q < 1) throw InvalidArgument("huls_step: q must be a positive integer");
    return z / root_q(1.0 + a * q * std::pow(z, q), q);
}

std::vector<double> gronwall_sums(const NormalForm& nf_Phi, const std::vector<double>& seq,
                                  double h, double alpha, int omega_exponent,
                                  DerivativeSource src) {
    const ScalarMap m = [&nf_Phi](double hh, double x, double a) { return nf_Phi(hh, x, a); };
    std::vector<double> out;
    out.reserve(seq.size());
    double S = 0.0;
    for (double x : seq) {
        const double d = src == DerivativeSource::Numerical ? map_derivative(m, 1, h, x, alpha)
                                                            : nf_Phi.dx(h, x, alpha);
        S = d * (S + h * std::pow(std::abs(x), omega_exponent));
        out.push_back(S);
    }
    return out;
}

double gronwall_sum(const NormalForm& nf_Phi, const std::vector<double>& seq, double h,
                    double alpha, std::size_t n, int omega_exponent) {
    if (n >= seq.size()) throw InvalidArgument("gronwall_sum: n beyond the sequence");
    const std::vector<double> head(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(n + 1));
    return gronwall_sums(nf_Phi, head, h, alpha, omega_exponent).back();
}

SupResult sup_id_minus_J(const ConjugacyMap& J, int grid_size,
                         std::optional<std::pair<double, double>> sub) {
    if (grid_size < 16) throw InvalidArgument("sup_id_minus_J needs grid_size >= 16");
    auto [lo, hi] = sub.value_or(J.interval());
    const auto full = J.interval();
    lo = std::max(lo, full.first);
    hi = std::min(hi, full.second);
    const auto grid = uniform_grid(lo, hi, grid_size);
    auto dist = [&](double x) { return std::abs(x - J(x)); };
    SupResult best{-1.0, lo};
    std::size_t imax = 0;
    const auto Jg = J.values(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = std::abs(grid[i] - Jg[i]);
        if (d > best.value) {
            best = {d, grid[i]};
            imax = i;
        }
    }
    // golden-section refinement on the two neighbouring cells
    double a = grid[imax == 0 ? 0 : imax - 1];
    double b = grid[std::min(imax + 1, grid.size() - 1)];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = dist(c), fd = dist(d);
    for (int it = 0; it < 80 && (b - a) > 1e-15 * std::max(std::abs(a), std::abs(b)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = dist(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = dist(d);
        }
    }
    if (fc > best.value) best = {fc, c};
    if (fd > best.value) best = {fd, d};
    return best;
}

double fixed_point_distance(const NormalForm& nf_Phi, const NormalForm& nf_phi, double h,
                            double alpha) {
    if (!(alpha > 0.0)) throw InvalidArgument("fixed_point_gap needs alpha > 0");
    if (nf_phi.kind() == NFKind::TC) {
        return std::abs(tc_nonzero_fixed_point(nf_phi, h, alpha).x -
                        tc_nonzero_fixed_point(nf_Phi, h, alpha).x);
    }
    return std::abs(pf_negative_fixed_point(nf_phi, h, alpha).x -
                    pf_negative_fixed_point(nf_Phi, h, alpha).x);
}

EstimateReport fixed_point_gap(const NormalForm& nf_Phi, const NormalForm& nf_phi, double h,
                               double alpha, int p, double c) {
    const bool tc = nf_phi.kind() == NFKind::TC;
    const double gap = fixed_point_distance(nf_Phi, nf_phi, h, alpha);
    const double bound = tc ? bounds::tc_gap_upper(c, h, p, alpha) : bounds::pf_gap_upper(c, h, p, alpha);
    return make_report(tc ? "tc_fixed_point_gap_upper" : "pf_fixed_point_gap_upper", gap, bound,
                       tc ? 27.0 / 4.0 * c : 8.0 * c, {h, alpha, p, tc ? "tc" : "pf", "fixed-point"});
}

EstimateReport fixed_point_gap_lower(const NormalForm& nf_Phi, const NormalForm& nf_phi,
                                     double h, double alpha, int p) {
    const bool tc = nf_phi.kind() == NFKind::TC;
    const double gap = fixed_point_distance(nf_Phi, nf_phi, h, alpha);
    const double bound = tc ? bounds::tc_gap_lower(h, p, alpha) : bounds::pf_gap_lower(h, p, alpha);
    return make_lower_report(tc ? "tc_fixed_point_gap_lower" : "pf_fixed_point_gap_lower", gap,
                             bound, tc ? 1.0 : 0.2, {h, alpha, p, tc ? "tc" : "pf", "fixed-point"});
}

double empirical_closeness_constant(const NormalForm& nf_Phi, const NormalForm& nf_phi, int p,
                                    int samples_per_axis) {
    if (nf_Phi.kind() != nf_phi.kind() || nf_Phi.sign() != nf_phi.sign()) {
        throw InvalidArgument("closeness constant needs normal forms of the same kind and sign");
    }
    // The leading parts coincide, so |N_Phi - N_phi| = h |x|^(deg+1) |eta_Phi - eta_phi|.
    const double h0 = std::min(nf_Phi.box().h0, nf_phi.box().h0);
    const double e0 = std::min(nf_Phi.box().eps0, nf_phi.box().eps0);
    const double a0 = std::min(nf_Phi.box().alpha0, nf_phi.box().alpha0);
    const int n = std::max(samples_per_axis, 2);
    double c = 0.0;
    for (int i = 0; i < n; ++i) {
        const double h = h0 * (i + 1) / n;
        const double hp = std::pow(h, p);
        for (int j = 0; j < n; ++j) {
            const double x = -e0 + 2.0 * e0 * j / (n - 1);
            for (int k = 0; k < n; ++k) {
                const double a = -a0 + 2.0 * a0 * k / (n - 1);
                const double diff = nf_Phi.tail().value(h, x, a) - nf_phi.tail().value(h, x, a);
                c = std::max(c, std::abs(diff) / hp);
            }
        }
    }
    return c;
}

EstimateReport zn_zero_decay_check(const NormalForm& nf_phi, double h, std::size_t n_max,
                                   std::optional<double> z0) {
    const bool tc = nf_phi.kind() == NFKind::TC;
    const double K = nf_phi.K();
    const double z_start = z0.value_or(-nf_phi.box().eps0);
    const std::size_t n_from = tc ? static_cast<std::size_t>(std::floor(1.0 / h)) + 1
                                  : static_cast<std::size_t>(std::floor(16.0 * K * K / h));
    ReportContext ctx{h, 0.0, 0, tc ? "tc" : "pf", "outer"};
    if (n_max < n_from) {
        throw InvalidArgument("z_n(0) decay check needs n_max >= " + std::to_string(n_from));
    }
    double z = z_start;
    double worst = 0.0;  // max ratio |z_n| / |bound_n|
    std::size_t first_fail = 0;
    bool below_start = false;
    for (std::size_t n = 1; n <= n_max; ++n) {
        z = nf_phi(h, z, 0.0);
        if (z < z_start && !below_start) {
            below_start = true;
            first_fail = n;
        }
        if (n >= n_from) {
            const double nh = static_cast<double>(n) * h;
            const double bound = tc ? 2.0 / nh : 2.0 / std::sqrt(nh);
            const double ratio = -z / bound;
            if (ratio > 1.0 && first_fail == 0) first_fail = n;
            worst = std::max(worst, ratio);
        }
    }
    std::string detail = std::string(tc ? "z_n(0) >= -2/(n h)" : "z_n(0) >= -2/sqrt(n h)") +
                         " for n >= " + std::to_string(n_from) + ", n <= " + std::to_string(n_max);
    if (first_fail) detail += "; first failing n = " + std::to_string(first_fail);
    return make_report(tc ? "tc_zn_zero_decay" : "pf_zn_zero_decay", below_start ? INFINITY : worst,
                       1.0, 2.0, ctx, detail);
}

EstimateReport tc_zn_zero_decay_check(const NormalForm& nf_phi, double h, std::size_t n_max) {
    if (nf_phi.kind() != NFKind::TC) throw InvalidArgument("expected a TC normal form");
    return zn_zero_decay_check(nf_phi, h, n_max);
}

EstimateReport pf_zn_zero_decay_check(const NormalForm& nf_phi, double h, std::size_t n_max) {
    if (nf_phi.kind() != NFKind::PF) throw InvalidArgument("expected a PF normal form");
    return zn_zero_decay_check(nf_phi, h, n_max);
}

EstimateReport alpha_monotonicity_check(const NormalForm& nf_phi, double h, double alpha,
                                        double beta, std::size_t n_max, std::optional<double> z0) {
    const double a0 = nf_phi.box().alpha0;
    if (!(-a0 <= alpha && alpha <= beta && beta <= 0.0)) {
        throw InvalidArgument("alpha monotonicity needs -alpha0 <= alpha <= beta <= 0");
    }
    const double z_start = z0.value_or(-nf_phi.box().eps0);
    double za = z_start, zb = z_start;
    double worst = 0.0;
    std::size_t first_fail = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        za = nf_phi(h, za, alpha);
        zb = nf_phi(h, zb, beta);
        if (!(za < 0.0)) {
            worst = INFINITY;
            if (!first_fail) first_fail = n;
            break;
        }
        if (zb > za) {
            worst = std::max(worst, zb - za);
            if (!first_fail) first_fail = n;
        }
    }
    std::string detail = "0 > z_n(" + fmt(alpha) + ") >= z_n(" + fmt(beta) + ") for n <= " +
                         std::to_string(n_max);
    if (first_fail) detail += "; first failing n = " + std::to_string(first_fail);
    return make_report(nf_phi.kind() == NFKind::TC ? "tc_alpha_monotonicity" : "pf_alpha_monotonicity",
                       worst, 0.0, 0.0, {h, alpha, 0, std::string(to_string(nf_phi.kind())), "outer"},
                       detail);
}

OrderFit order_fit(const std::vector<double>& h_values, const std::vector<double>& sup_values) {
    if (h_values.size() != sup_values.size()) throw InvalidArgument("order_fit: size mismatch");
    if (h_values.size() < 4) throw InvalidArgument("order_fit needs at least 4 points");
    const std::size_t n = h_values.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(h_values[i] > 0.0) || !(sup_values[i] > 0.0)) {
            throw InvalidArgument("order_fit: values must be positive");
        }
        lx[i] = std::log(h_values[i]);
        ly[i] = std::log(sup_values[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("order_fit: all h values equal");
    OrderFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (f.intercept + f.slope * lx[i]);
        ss_res += r * r;
        ss_tot += (ly[i] - my) * (ly[i] - my);
    }
    f.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return f;
}

}  // namespace bifconj

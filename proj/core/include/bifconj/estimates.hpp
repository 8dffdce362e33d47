#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "bifconj/conjugacy.hpp"
#include "bifconj/maps.hpp"
#include "bifconj/report.hpp"

namespace bifconj {

// Envelope sequences of the inner (a_n) and outer (b_n) orbits, alpha > 0.
double tc_envelope_a(double h, double alpha, double n);
double tc_envelope_b(double h, double alpha, double n);
double pf_envelope_a(double h, double alpha, double n);
double pf_envelope_b(double h, double alpha, double n);

// Closed form of z_{n+1} = z_n / (1 + a q z_n^q)^(1/q).
double huls_closed_form(double z0, double a, int q, double n);
double huls_step(double z, double a, int q);

// S_n = h * sum_{k<=n} |x_k|^omega * prod_{j=k..n} (N_Phi)_x(h, x_j, alpha),
// returned for every n < seq.size().
enum class DerivativeSource { Numerical, Analytic };
std::vector<double> gronwall_sums(const NormalForm& nf_Phi, const std::vector<double>& seq,
                                  double h, double alpha, int omega_exponent,
                                  DerivativeSource src = DerivativeSource::Numerical);
double gronwall_sum(const NormalForm& nf_Phi, const std::vector<double>& seq, double h,
                    double alpha, std::size_t n, int omega_exponent);

struct SupResult {
    double value = 0.0;
    double argmax = 0.0;
};

inline constexpr int kSupGrid = 4096;

// max |x - J(x)| over a uniform grid on J's interval (or the given
// subinterval), refined by golden-section search around the grid maximum.
SupResult sup_id_minus_J(const ConjugacyMap& J, int grid_size = kSupGrid,
                         std::optional<std::pair<double, double>> sub = std::nullopt);

// Nonzero lower fixed-point distance |omega_phi - omega_Phi|, alpha > 0.
double fixed_point_distance(const NormalForm& nf_Phi, const NormalForm& nf_phi, double h,
                            double alpha);

// Gap with the (27/4) c h^p alpha^2 (TC) or 8 c h^p alpha (PF) upper bound.
EstimateReport fixed_point_gap(const NormalForm& nf_Phi, const NormalForm& nf_phi, double h,
                               double alpha, int p, double c);

// Gap with the h^p alpha^2 (TC) or h^p alpha / 5 (PF) lower bound.
EstimateReport fixed_point_gap_lower(const NormalForm& nf_Phi, const NormalForm& nf_phi,
                                     double h, double alpha, int p);

// max over a sampled box grid of |N_Phi - N_phi| / (h^(p+1) |x|^(3 or 4)).
double empirical_closeness_constant(const NormalForm& nf_Phi, const NormalForm& nf_phi, int p,
                                    int samples_per_axis = 41);

// z_n(0) >= -2/(n h) (TC, n >= floor(1/h)+1) or -2/sqrt(n h)
// (PF, n >= floor(16 K^2/h)); also z_n(0) >= z0 throughout.
EstimateReport zn_zero_decay_check(const NormalForm& nf_phi, double h, std::size_t n_max,
                                   std::optional<double> z0 = std::nullopt);
EstimateReport tc_zn_zero_decay_check(const NormalForm& nf_phi, double h, std::size_t n_max);
EstimateReport pf_zn_zero_decay_check(const NormalForm& nf_phi, double h, std::size_t n_max);

// 0 > z_n(alpha) >= z_n(beta) for n <= n_max, -alpha0 <= alpha <= beta <= 0.
EstimateReport alpha_monotonicity_check(const NormalForm& nf_phi, double h, double alpha,
                                        double beta, std::size_t n_max,
                                        std::optional<double> z0 = std::nullopt);

struct OrderFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Least squares of log(sup) against log(h); at least 4 positive points.
OrderFit order_fit(const std::vector<double>& h_values, const std::vector<double>& sup_values);

// Explicit bounds on sup|id - J| and on the fixed-point gap.
namespace bounds {
inline double tc_inner(double c, double h, int p, double alpha) {
    return 350.0 * c * std::pow(h, p) * alpha * alpha;
}
inline double tc_inner_y_side(double c, double h, int p, double alpha) {
    return c / 3.0 * std::pow(h, p) * alpha * alpha;
}
inline double tc_outer_nonpositive(double c, double h, int p) { return 12.0 * c * std::pow(h, p); }
inline double tc_gap_upper(double c, double h, int p, double alpha) {
    return 27.0 / 4.0 * c * std::pow(h, p) * alpha * alpha;
}
inline double tc_gap_lower(double h, int p, double alpha) { return std::pow(h, p) * alpha * alpha; }
inline double pf_inner(double c, double h, int p, double alpha) {
    return 1988.0 * c * std::pow(h, p) * alpha;
}
inline double pf_inner_y_side(double c, double h, int p, double alpha) {
    return c / 8.0 * std::pow(h, p) * alpha;
}
inline double pf_outer_nonpositive(double c, double K, double h, int p) {
    return c * (2.0 + 3.0 / (K * K)) * std::pow(h, p);
}
inline double pf_gap_upper(double c, double h, int p, double alpha) {
    return 8.0 * c * std::pow(h, p) * alpha;
}
inline double pf_gap_lower(double h, int p, double alpha) { return std::pow(h, p) * alpha / 5.0; }
}  // namespace bounds

}  // namespace bifconj

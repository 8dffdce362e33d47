#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bifconj/conjugacy.hpp"
#include "bifconj/estimates.hpp"

namespace bifconj {

static_assert(std::numeric_limits<long double>::digits >= 64,
              "orbit differences of order h^4 need an extended-precision long double");

// Model: x' = alpha x + x^2, y' = -y; RK4 as the one-step method (p = 4).
inline constexpr int kSection5Order = 4;

// Classical RK4 step of x' = alpha x + x^2.
long double section5_rk4_step(long double h, long double x, long double alpha);

// Quadratic Taylor coefficients in x at 0 of the exact flow and of the RK4 map.
double exact_flow_quadratic_coefficient(double h, double alpha);
double rk4_quadratic_coefficient(double h, double alpha);

struct SeriesResiduals {
    // |alpha_tilde - alpha (1 + z^4/120 - z^5/144)|, z = alpha h
    double alpha_tilde = 0.0;
    // |rho - (1 + z^4/20 - 5 z^5/96)|
    double rho = 0.0;
    double bound = 0.0;  // |alpha h|^6
};

struct AlignmentPair {
    double h = 0.0;
    double alpha = 0.0;
    double rho = 1.0;
    double alpha_tilde = 0.0;
    // Extended-precision differences; rho - 1 is below double resolution.
    double rho_minus_one = 0.0;
    double alpha_tilde_minus_alpha = 0.0;
    long double rho_ld = 1.0L;
    long double alpha_tilde_ld = 0.0L;
    SeriesResiduals series;
};

// alpha_tilde solves P4(alpha_tilde h) = e^{alpha h}; rho is the ratio of the
// exact and RK4 quadratic coefficients at (alpha, alpha_tilde).
AlignmentPair compute_alignment(double h, double alpha);

struct OrbitDiff {
    std::vector<double> values;  // delta(n), n = 0..N
    double sup = 0.0;
    std::size_t argmax = 0;
    double h = 0.0;
    double x0 = 0.0;
    double alpha = 0.0;
    double perturbation = 0.0;
};

// h^-p |Phi(n h, x0, alpha) - phi^[n](h, x0, alpha)|, no alignment.
OrbitDiff delta_sequence(double h, double x0, double alpha, std::size_t N);

// h^-p |Phi(n h, x0, alpha) - rho^-1 phi^[n](h, rho x0, alpha_tilde + perturb)|.
OrbitDiff orbit_closeness_experiment(double h, double x0, double alpha, std::size_t N,
                                     double perturb_alpha_tilde = 0.0);

double sup_prefix(const OrbitDiff& d, std::size_t n_last);

struct SweepConfig {
    NFKind kind = NFKind::TC;
    std::string tail = "hp_power";       // tail of N_phi; "hp_power" picks up p
    std::string tail_Phi = "zero";
    int p = 1;
    std::vector<double> h;
    std::vector<double> alpha;
    Region region = Region::Inner;
    HalfPlane half = HalfPlane::Lower;
    int grid = kSupGrid;
    bool enforce_box = true;
};

// Flat key=value lines; '#' starts a comment; unknown keys are rejected.
SweepConfig parse_sweep_config(std::istream& in);

struct SweepRow {
    double h = 0.0;
    double alpha = 0.0;
    double sup = 0.0;
    std::optional<double> slope_so_far;
    std::string error;  // non-empty when the cell failed
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ordered by (alpha, h) as listed in the config
    bool degenerate = false;     // every sup <= 1e-12, no fit attempted
    // per alpha, fit over all successful cells (at least 4)
    std::vector<std::pair<double, OrderFit>> fits;
};

SweepResult h_sweep(const SweepConfig& cfg);

struct PortraitRow {
    std::size_t orbit = 0;
    std::size_t n = 0;
    double x = 0.0;
    double y = 0.0;
};

std::vector<PortraitRow> portrait_orbits(double h, double alpha,
                                         const std::vector<std::pair<double, double>>& starts,
                                         std::size_t N);

}  // namespace bifconj

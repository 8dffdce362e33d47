#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bifconj/maps.hpp"
#include "bifconj/report.hpp"

namespace bifconj {

enum class Stability { Attracting, Repelling, Neutral };

std::string_view to_string(Stability s);
Stability stability_from_multiplier(double m);

struct FixedPoint {
    double x = 0.0;
    double multiplier = 0.0;
    double residual = 0.0;
    Stability stability = Stability::Neutral;
};

struct FixedPointScan {
    std::vector<FixedPoint> points;
    // map(x) - x vanished on the whole scan, so there are no isolated roots.
    bool continuum = false;
};

inline constexpr int kScanSubintervals = 2048;

FixedPointScan find_fixed_points(const ScalarMap& map, double h, double alpha, double lo,
                                 double hi, int subintervals = kScanSubintervals);

// Nonzero fixed point of a TC normal form (root of alpha + s x + x^2 tail).
// For alpha > 0 this is the lower branch, for alpha < 0 the upper one.
FixedPoint tc_nonzero_fixed_point(const NormalForm& nf, double h, double alpha);

// Negative (resp. positive) nonzero fixed point of a PF normal form, alpha > 0.
FixedPoint pf_negative_fixed_point(const NormalForm& nf, double h, double alpha);
FixedPoint pf_positive_fixed_point(const NormalForm& nf, double h, double alpha);

struct BranchPoint {
    double alpha = 0.0;
    double x = 0.0;
    double multiplier = 0.0;
    Stability stability = Stability::Neutral;
};

struct Branch {
    int id = 0;
    std::vector<BranchPoint> points;  // ascending alpha
};

struct BranchDiagram {
    double h = 0.0;
    std::vector<double> alpha_grid;
    std::vector<Branch> branches;
    std::pair<double, double> window;
    // (branch id, alpha) where the multiplier crosses 1 between grid values
    std::vector<std::pair<int, double>> stability_changes;
};

BranchDiagram trace_branches(const ScalarMap& map, double h, double alpha_lo, double alpha_hi,
                             int n_alpha, double x_lo, double x_hi);

enum class Verdict { TC, PF, Fold, None };

std::string_view to_string(Verdict v);

struct BifClass {
    Verdict verdict = Verdict::None;
    // g, g_alpha, g_x, g_xx, g_xalpha, g_alphaalpha, g_xxx at (0, 0)
    std::map<std::string, double> values;
    std::map<std::string, bool> conditions;
    double discriminant = 0.0;
};

inline constexpr double kZeroTolerance = 1e-7;

BifClass classify_bifurcation(const ScalarMap& map, double h, double zero_tol = kZeroTolerance);

struct AsymmetricPFResult {
    EstimateReport report;
    int side = 0;  // sign of alpha on which three branches are expected
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double slope_plus = 0.0;
    double slope_minus = 0.0;
    std::vector<double> alphas;
    std::vector<std::vector<double>> roots;  // per alpha, ascending
};

// Samples the three branches on the predicted alpha side on log-spaced
// |alpha| in [alpha_probe*1e-3, alpha_probe] and fits the branch constants.
AsymmetricPFResult verify_asymmetric_pf_branches(const ScalarMap& map, double h,
                                                 double alpha_probe, int n_alpha = 24);

}  // namespace bifconj

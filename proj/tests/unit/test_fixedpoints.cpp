#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bifconj/catalog.hpp"
#include "bifconj/derivative.hpp"
#include "bifconj/error.hpp"
#include "bifconj/fixedpoints.hpp"
#include "bifconj/maps.hpp"
#include "oracles.hpp"

using namespace bifconj;

namespace {
const ScalarMap kTcModel = [](double h, double x, double a) { return oracle::tc(h, x, a, 0.0); };

int count_in_window(const ScalarMap& m, double h, double a, double lo, double hi) {
    return static_cast<int>(find_fixed_points(m, h, a, lo, hi).points.size());
}
}  // namespace

TEST(FixedPoints, TcModel) {
    const auto scan = find_fixed_points(kTcModel, 0.1, 0.3, -1.0, 1.0);
    ASSERT_EQ(scan.points.size(), 2u);
    EXPECT_NEAR(scan.points[0].x, -0.3, 1e-12);
    EXPECT_NEAR(scan.points[1].x, 0.0, 1e-12);
    EXPECT_EQ(scan.points[0].stability, Stability::Attracting);
    EXPECT_EQ(scan.points[1].stability, Stability::Repelling);
    EXPECT_NEAR(scan.points[0].multiplier, 0.97, 1e-9);
    EXPECT_NEAR(scan.points[1].multiplier, 1.03, 1e-9);
}

TEST(FixedPoints, ResidualAndBracket) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ua(-0.5, 0.5);
    for (int i = 0; i < 50; ++i) {
        const double a = ua(rng), h = 0.1;
        for (const auto& fp : find_fixed_points(kTcModel, h, a, -1.0, 1.0).points) {
            const double g = kTcModel(h, fp.x, a) - fp.x;
            EXPECT_LE(std::abs(g), 1e-12 * std::max(1.0, std::abs(fp.x)));
            const double d = 1e-6;
            const double gl = kTcModel(h, fp.x - d, a) - (fp.x - d);
            const double gr = kTcModel(h, fp.x + d, a) - (fp.x + d);
            EXPECT_LE(gl * gr, 0.0) << "a=" << a << " x=" << fp.x;
        }
    }
}

TEST(FixedPoints, IdentityIsContinuum) {
    const ScalarMap id = [](double, double x, double) { return x; };
    const auto scan = find_fixed_points(id, 0.1, 0.0, -1.0, 1.0);
    EXPECT_TRUE(scan.continuum);
    EXPECT_TRUE(scan.points.empty());
}

TEST(FixedPoints, Example21HasNoFixedPointsInsideGap) {
    const auto m = catalog_map("example21", 1);
    EXPECT_TRUE(find_fixed_points(m.eval, 0.1, 0.001, -1.0, 1.0).points.empty());
    EXPECT_EQ(count_in_window(m.eval, 0.1, 0.5, -1.0, 1.0), 2);
}

TEST(FixedPoints, TcNonzeroClosedForms) {
    const auto zero = make_tc_normal_form(zero_tail(), 1.0);
    EXPECT_NEAR(tc_nonzero_fixed_point(zero, 0.1, 0.01).x, -0.01, 1e-15);
    for (int p : {1, 2}) {
        const auto nf = make_tc_normal_form(hp_power_tail(p), 1.0);
        for (double a : {0.001, 0.01, 1.0 / 51}) {
            EXPECT_NEAR(tc_nonzero_fixed_point(nf, 0.1, a).x, oracle::tc_omega_hp(0.1, p, a), 1e-15);
        }
    }
}

TEST(FixedPoints, TcInterval) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uh(1e-3, 0.2), ua(1e-4, 1.0 / 51), ui(0, 3);
    const char* tails[] = {"zero", "hp_power:1", "hp_power:2", "sin"};
    for (int i = 0; i < 200; ++i) {
        const auto nf = make_tc_normal_form(tail_from_name(tails[static_cast<int>(ui(rng))]), 1.0);
        const double h = uh(rng), a = ua(rng);
        const double w = tc_nonzero_fixed_point(nf, h, a).x;
        EXPECT_GT(w, -1.5 * a);
        EXPECT_LT(w, -6.0 / 7.0 * a);
        EXPECT_LE(std::abs(nf(h, w, a) - w), 1e-13);
    }
}

TEST(FixedPoints, PfNegativeClosedFormsAndInterval) {
    const auto zero = make_pf_normal_form(zero_tail(), 1.0);
    EXPECT_NEAR(pf_negative_fixed_point(zero, 0.1, 0.003).x, -std::sqrt(0.003), 1e-15);
    EXPECT_NEAR(pf_positive_fixed_point(zero, 0.1, 0.003).x, std::sqrt(0.003), 1e-15);
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> uh(1e-3, 0.1), ua(1e-5, 1.0 / 288);
    for (int p : {1, 2}) {
        const auto nf = make_pf_normal_form(hp_power_tail(p), 1.0);
        for (int i = 0; i < 100; ++i) {
            const double h = uh(rng), a = ua(rng);
            const double w = pf_negative_fixed_point(nf, h, a).x;
            EXPECT_NEAR(w, oracle::pf_omega_hp(h, p, a), 1e-14);
            EXPECT_GT(w, -std::sqrt(2 * a));
            EXPECT_LT(w, -0.8 * std::sqrt(a));
            const double t = std::pow(h, p) * std::sqrt(a);
            EXPECT_GT(w, -std::sqrt(a / (1 + 0.8 * t)));
            EXPECT_LT(w, -std::sqrt(a / (1 + std::sqrt(2.0) * t)));
        }
    }
}

TEST(FixedPoints, MissingRootIsBracketError) {
    // alpha + x + x^2 has no real root for alpha = 0.3
    const auto nf = NormalForm(NFKind::TC, +1, hp_power_tail(0), 1.0, tc_box(1.0));
    EXPECT_THROW(tc_nonzero_fixed_point(nf, 0.1, 0.3), BracketError);
}

TEST(Branches, Example25Pitchfork) {
    const ScalarMap m = [](double h, double x, double a) { return (1 + h * a) * x + h * x * x * x; };
    const auto d = trace_branches(m, 0.1, -0.1, 0.1, 41, -1.0, 1.0);
    EXPECT_EQ(d.branches.size(), 3u);
    for (const auto& b : d.branches) {
        for (const auto& pt : b.points) {
            if (std::abs(pt.x) > 1e-8) {
                EXPECT_LT(pt.alpha, 0.0);
                EXPECT_NEAR(std::abs(pt.x), std::sqrt(-pt.alpha), 1e-10);
            }
        }
    }
    EXPECT_EQ(count_in_window(m, 0.1, -0.05, -1, 1), 3);
    EXPECT_EQ(count_in_window(m, 0.1, 0.05, -1, 1), 1);
}

TEST(Branches, Example26IsNotAPitchfork) {
    const auto m = catalog_map("example26", 1);
    // three fixed points on both sides of alpha = 0
    EXPECT_EQ(count_in_window(m.eval, 0.1, -0.001, -1, 1), 3);
    EXPECT_EQ(count_in_window(m.eval, 0.1, 0.001, -1, 1), 3);
    EXPECT_NE(classify_bifurcation(m.eval, 0.1).verdict, Verdict::PF);
}

TEST(Branches, Example27AvoidsTheOrigin) {
    const double h = 0.1;
    const auto m = catalog_map("example27", 1);
    const auto d = trace_branches(m.eval, h, -0.01, 0.01, 21, -1.0, 1.0);
    for (const auto& b : d.branches) {
        for (const auto& pt : b.points) {
            if (std::abs(pt.x) > 1e-8) EXPECT_GE(std::abs(pt.x), 0.5 * std::sqrt(h));
        }
    }
    EXPECT_NEAR(map_derivative(m.eval, 1, h, 0.0, 0.0), 1 - h * h, 1e-9);
}

TEST(Classification, Verdicts) {
    EXPECT_EQ(classify_bifurcation(catalog_map("tc-phi", 1).eval, 0.1).verdict, Verdict::TC);
    EXPECT_EQ(classify_bifurcation(catalog_map("pf-phi", 1).eval, 0.1).verdict, Verdict::PF);
    const auto w = classify_bifurcation(catalog_map("wiggins-counterexample").eval, 0.1);
    EXPECT_EQ(w.verdict, Verdict::None);
    // g_xa^2 - g_xx g_aa = 1 - 2*2
    EXPECT_NEAR(w.discriminant, -3.0, 1e-5);
}

TEST(Classification, ToleranceHalvingInvariance) {
    for (const auto& name : catalog_names()) {
        const auto m = catalog_map(name, 1);
        EXPECT_EQ(classify_bifurcation(m.eval, 0.1).verdict,
                  classify_bifurcation(m.eval, 0.1, 0.5 * kZeroTolerance).verdict)
            << name;
    }
}

TEST(Classification, Example21GapLaw) {
    for (int p : {1, 2}) {
        for (double h : {0.1, 0.05}) {
            const auto m = catalog_map("example21", p);
            const double hp = std::pow(h, p);
            for (double k : {-4.0, -2.5, -1.0, 0.0, 1.5, 2.5, 4.0}) {
                const double a = k * hp;
                // alpha x + x^2 + h^(2p) = 0 has real roots iff alpha^2 >= 4 h^(2p)
                const bool real = a * a - 4 * hp * hp > 0;
                const auto pts = find_fixed_points(m.eval, h, a, -5 * hp, 5 * hp).points;
                EXPECT_EQ(!pts.empty(), real) << "p=" << p << " h=" << h << " k=" << k;
            }
        }
    }
}

TEST(Classification, AsymmetricPitchfork) {
    const ScalarMap cubic = [](double h, double x, double a) { return (1 + h * a) * x - h * x * x * x; };
    const auto sym = verify_asymmetric_pf_branches(cubic, 0.1, 1e-3);
    EXPECT_TRUE(sym.report.passed) << sym.report.detail;
    EXPECT_EQ(sym.side, 1);
    EXPECT_NEAR(sym.c0, 0.0, 1e-6);
    EXPECT_NEAR(sym.c1, 1.0, 1e-6);
    EXPECT_NEAR(sym.c2, 1.0, 1e-6);
    const auto cat = verify_asymmetric_pf_branches(catalog_map("pf-phi", 1).eval, 0.1, 1e-3);
    EXPECT_TRUE(cat.report.passed) << cat.report.detail;
    EXPECT_NEAR(cat.c1, 1.0, 5e-3);
    const ScalarMap asym = [](double h, double x, double a) {
        return (1 + h * a) * x - h * x * x * x + h * x * x * x * x;
    };
    const auto r = verify_asymmetric_pf_branches(asym, 0.1, 1e-3);
    EXPECT_TRUE(r.report.passed) << r.report.detail;
    EXPECT_NEAR(r.slope_plus, 0.5, 0.02);
    EXPECT_NEAR(r.slope_minus, 0.5, 0.02);
}

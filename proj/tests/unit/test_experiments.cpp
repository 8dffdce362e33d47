#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bifconj/catalog.hpp"
#include "bifconj/derivative.hpp"
#include "bifconj/error.hpp"
#include "bifconj/experiments.hpp"
#include "bifconj/rk.hpp"

using namespace bifconj;

namespace {
// Newton on P4(w) = e^z in long double.
long double alpha_tilde_ld(long double h, long double a) {
    const long double z = a * h, target = std::exp(z);
    long double w = z;
    for (int i = 0; i < 50; ++i) {
        const long double p = 1 + w + w * w / 2 + w * w * w / 6 + w * w * w * w / 24;
        const long double dp = 1 + w + w * w / 2 + w * w * w / 6;
        w -= (p - target) / dp;
    }
    return w / h;
}
}  // namespace

TEST(Alignment, ZeroAlpha) {
    const auto a = compute_alignment(0.01, 0.0);
    EXPECT_EQ(a.alpha_tilde, 0.0);
    EXPECT_EQ(a.rho, 1.0);
}

TEST(Alignment, SeriesAndIndependentSolve) {
    for (double h : {1e-3, 1e-2, 0.05}) {
        const double alpha = -0.5;
        const auto a = compute_alignment(h, alpha);
        EXPECT_LE(a.series.alpha_tilde, a.series.bound);
        EXPECT_LE(a.series.rho, a.series.bound);
        const long double ref = alpha_tilde_ld(h, alpha);
        EXPECT_LE(std::abs(a.alpha_tilde_ld - ref), 1e-15L * std::abs(ref)) << h;
    }
    EXPECT_THROW(compute_alignment(2.0, 0.5), InvalidArgument);
}

TEST(Alignment, QuadraticCoefficientsAgainstDerivatives) {
    const auto exact = catalog_map("section5-phi").eval;
    const auto rk = catalog_map("section5-rk4").eval;
    for (double h : {0.1, 0.05}) {
        for (double a : {-0.5, 0.3}) {
            const double ce = 0.5 * map_derivative(exact, 2, h, 0.0, a);
            const double cr = 0.5 * map_derivative(rk, 2, h, 0.0, a);
            EXPECT_NEAR(exact_flow_quadratic_coefficient(h, a), ce, 1e-7 * std::abs(ce));
            EXPECT_NEAR(rk4_quadratic_coefficient(h, a), cr, 1e-7 * std::abs(cr));
        }
    }
}

TEST(Rk4Step, MatchesGenericStep) {
    const RKMethod m{ButcherTableau::rk4(), [](double x, double a) { return a * x + x * x; }};
    for (double x : {-1.0, -0.3, 0.2}) {
        const double generic = rk_apply(m, 0.01, x, -0.5);
        EXPECT_NEAR(static_cast<double>(section5_rk4_step(0.01L, x, -0.5L)), generic, 1e-15);
    }
}

TEST(OrbitCloseness, TrivialCases) {
    const auto d = orbit_closeness_experiment(1e-3, -1.0, -0.5, 100);
    EXPECT_EQ(d.values[0], 0.0);
    const auto z = orbit_closeness_experiment(1e-3, 0.0, -0.5, 100);
    for (double v : z.values) EXPECT_EQ(v, 0.0);
    const auto z0 = orbit_closeness_experiment(1e-3, 0.0, 0.0, 100);
    EXPECT_EQ(z0.sup, 0.0);
}

TEST(OrbitCloseness, PlateauAndPerturbation) {
    const double h = 1e-3;
    const auto d = orbit_closeness_experiment(h, -1.0, -0.5, 30000);
    const double half = sup_prefix(d, 15000);
    EXPECT_LE(std::abs(d.sup / half - 1.0), 0.05);
    EXPECT_LT(d.sup, 1.0);
    const auto pert = orbit_closeness_experiment(h, -1.0, -0.5, 30000, 1e-6);
    EXPECT_GE(pert.sup / d.sup, 10.0);
    const auto raw = delta_sequence(h, -1.0, -0.5, 3000);
    EXPECT_GT(raw.sup, d.sup);
}

TEST(SweepConfig, Parse) {
    std::istringstream in("# sweep\nkind = pf\np=2\nh = 0.1, 0.05 ,0.025,0.0125\nalpha=0.002 # inner\n"
                          "region=outer\nhalf=upper\ngrid=512\nenforce_box=false\n");
    const auto c = parse_sweep_config(in);
    EXPECT_EQ(c.kind, NFKind::PF);
    EXPECT_EQ(c.p, 2);
    ASSERT_EQ(c.h.size(), 4u);
    EXPECT_DOUBLE_EQ(c.h[1], 0.05);
    ASSERT_EQ(c.alpha.size(), 1u);
    EXPECT_EQ(c.region, Region::Outer);
    EXPECT_EQ(c.half, HalfPlane::Upper);
    EXPECT_EQ(c.grid, 512);
    EXPECT_FALSE(c.enforce_box);
    std::istringstream unknown("h=0.1\nalpha=0.01\nstep=3\n");
    EXPECT_THROW(parse_sweep_config(unknown), InvalidArgument);
    std::istringstream bad("h=0.1,x\nalpha=0.01\n");
    EXPECT_THROW(parse_sweep_config(bad), InvalidArgument);
    std::istringstream missing("h=0.1\n");
    EXPECT_THROW(parse_sweep_config(missing), InvalidArgument);
}

TEST(Sweep, IdenticalTailsAreDegenerate) {
    SweepConfig c;
    c.tail = "zero";
    c.h = {0.1, 0.05, 0.025, 0.0125};
    c.alpha = {0.005};
    c.grid = 256;
    const auto r = h_sweep(c);
    EXPECT_TRUE(r.degenerate);
    EXPECT_TRUE(r.fits.empty());
    ASSERT_EQ(r.rows.size(), 4u);
    for (const auto& row : r.rows) EXPECT_LE(row.sup, 1e-12);
}

TEST(Sweep, FirstOrderSlope) {
    SweepConfig c;
    c.p = 1;
    c.h = {0.1, 0.05, 0.025, 0.0125};
    c.alpha = {0.005};
    c.grid = 1024;
    const auto r = h_sweep(c);
    ASSERT_EQ(r.fits.size(), 1u);
    EXPECT_NEAR(r.fits[0].second.slope, 1.0, 0.1);
    EXPECT_FALSE(r.rows[0].slope_so_far.has_value());
    EXPECT_TRUE(r.rows[1].slope_so_far.has_value());
}

TEST(Portrait, Orbits) {
    const double h = 0.01;
    const auto rows = portrait_orbits(h, 1.0, {{-0.5, 0.5}, {0.0, 0.0}}, 600);
    ASSERT_EQ(rows.size(), 2u * 601);
    const auto& last = rows[600];
    EXPECT_EQ(last.n, 600u);
    const double e = std::exp(6.0);
    EXPECT_NEAR(last.x, -0.5 * e / (1 + 0.5 * (e - 1)), 1e-12);
    EXPECT_NEAR(last.x, -1.0, 3e-3);
    for (std::size_t n = 0; n <= 600; n += 100) EXPECT_NEAR(rows[n].y, 0.5 * std::exp(-h * n), 1e-15);
    for (std::size_t i = 601; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].x, 0.0);
        EXPECT_EQ(rows[i].y, 0.0);
    }
}

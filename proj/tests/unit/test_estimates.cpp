#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "bifconj/catalog.hpp"
#include "bifconj/conjugacy.hpp"
#include "bifconj/error.hpp"
#include "bifconj/estimates.hpp"
#include "bifconj/report.hpp"
#include "oracles.hpp"

using namespace bifconj;

TEST(Envelopes, InitialValues) {
    for (double h : {0.01, 0.1, 0.2}) {
        for (double a : {1e-3, 0.01, 1.0 / 51}) {
            EXPECT_NEAR(tc_envelope_a(h, a, 0), -(a / 4) * (1 + h * a), 1e-17);
            EXPECT_NEAR(tc_envelope_b(h, a, 0), -2 - 2 * h * a, 1e-15);
            EXPECT_NEAR(pf_envelope_a(h, a, 0), -0.8 * std::sqrt(a / 6), 1e-16);
            EXPECT_NEAR(pf_envelope_b(h, a, 0), -2.0, 1e-15);
        }
    }
}

TEST(Envelopes, MatchDefinitions) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> uh(0.01, 0.2), ua(1e-3, 1.0 / 51), un(0, 3000);
    for (int i = 0; i < 500; ++i) {
        const double h = uh(rng), a = ua(rng), n = std::floor(un(rng));
        const auto rel = [](double x, double y) { return std::abs(x - y) / std::abs(y); };
        EXPECT_LE(rel(tc_envelope_a(h, a, n), oracle::tc_a(h, a, n)), 1e-11);
        EXPECT_LE(rel(tc_envelope_b(h, a, n), oracle::tc_b(h, a, n)), 1e-11);
        EXPECT_LE(rel(pf_envelope_a(h, a, n), oracle::pf_a(h, a, n)), 1e-11);
        EXPECT_LE(rel(pf_envelope_b(h, a, n), oracle::pf_b(h, a, n)), 1e-11);
    }
}

TEST(Envelopes, Limits) {
    const double h = 0.1, a = 0.01, n = 1e9;
    EXPECT_NEAR(tc_envelope_a(h, a, n), -0.75 * a * (1 + h * a), 1e-15);
    EXPECT_NEAR(tc_envelope_b(h, a, n), -2 * a * (1 + h * a), 1e-15);
    EXPECT_NEAR(pf_envelope_a(h, a, n), -0.8 * std::sqrt(a), 1e-15);
    EXPECT_NEAR(pf_envelope_b(h, a, n), -2 * std::sqrt(a), 1e-15);
    EXPECT_GT(pf_envelope_a(h, a, 0), -std::sqrt(a / 8));
    for (int k = 0; k < 100; ++k) EXPECT_LT(pf_envelope_b(h, a, k), pf_envelope_b(h, a, k + 1));
}

TEST(Huls, ClosedFormMatchesIteration) {
    EXPECT_EQ(huls_closed_form(0.7, 0.3, 2, 0), 0.7);
    EXPECT_NEAR(huls_closed_form(1.0, 1.0, 1, 2), 1.0 / 3, 1e-16);
    for (int q : {1, 2, 3}) {
        for (double a : {0.01, 0.5}) {
            long double z = 0.3L;
            for (int n = 1; n <= 2000; ++n) {
                z = z / std::pow(1.0L + a * q * std::pow(z, static_cast<long double>(q)), 1.0L / q);
                if (n % 250 == 0) {
                    const double c = huls_closed_form(0.3, a, q, n);
                    EXPECT_LE(std::abs(c - static_cast<double>(z)), 1e-12 * std::abs(c)) << q << " " << n;
                }
            }
        }
    }
    EXPECT_THROW(huls_closed_form(1.0, 1.0, 0, 1), InvalidArgument);
}

TEST(Gronwall, Properties) {
    const auto Phi = make_tc_normal_form(zero_tail(), 1.0);
    const double h = 0.1, a = 0.1;
    const auto s = inner_sequences(Phi, h, a, 100000);
    const auto num = gronwall_sums(Phi, s.x_seq, h, a, 3, DerivativeSource::Numerical);
    const auto ana = gronwall_sums(Phi, s.x_seq, h, a, 3, DerivativeSource::Analytic);
    const double x0 = s.x_seq[0];
    EXPECT_NEAR(num[0], h * std::abs(x0 * x0 * x0) * (1 + h * a + 2 * h * x0), 1e-16);
    for (std::size_t n = 0; n < num.size(); ++n) {
        EXPECT_LE(std::abs(num[n] - ana[n]), 1e-7 * ana[n]);
        EXPECT_LE(ana[n], 350 * a * a);
        if (n > 0) EXPECT_GE(ana[n], ana[n - 1]);
    }
}

TEST(Sup, Bounds) {
    const auto pair = catalog_pair(NFKind::TC, 1);
    const double h = 0.1;
    const auto inner = build_conjugacy(pair.Phi, pair.phi, h, 0.01, Region::Inner, HalfPlane::Lower);
    EXPECT_LE(sup_id_minus_J(inner).value, bounds::tc_inner(1.0, h, 1, 0.01));
    const auto outer = build_conjugacy(pair.Phi, pair.phi, h, -0.01, Region::Outer, HalfPlane::Lower);
    const auto sup = sup_id_minus_J(outer);
    EXPECT_LE(sup.value, bounds::tc_outer_nonpositive(1.0, h, 1));
    EXPECT_GT(sup.value, 0.0);
    const auto [lo, hi] = outer.interval();
    EXPECT_GE(sup.argmax, lo);
    EXPECT_LE(sup.argmax, hi);
}

TEST(FixedPointGap, Bounds) {
    EXPECT_DOUBLE_EQ(bounds::tc_gap_upper(1.0, 0.1, 1, 0.01), 27.0 / 4 * 0.1 * 1e-4);
    EXPECT_DOUBLE_EQ(bounds::pf_gap_lower(0.1, 1, 0.002), 0.1 * 0.002 / 5);
    for (NFKind k : {NFKind::TC, NFKind::PF}) {
        const auto pair = catalog_pair(k, 1);
        const double a = k == NFKind::TC ? 0.01 : 0.002;
        EXPECT_EQ(fixed_point_distance(pair.phi, pair.phi, 0.1, a), 0.0);
        EXPECT_TRUE(fixed_point_gap(pair.Phi, pair.phi, 0.1, a, 1, 1.0).passed);
        EXPECT_TRUE(fixed_point_gap_lower(pair.Phi, pair.phi, 0.1, a, 1).passed);
    }
    const auto pair = catalog_pair(NFKind::TC, 1);
    EXPECT_NEAR(fixed_point_distance(pair.Phi, pair.phi, 0.1, 0.01),
                std::abs(oracle::tc_omega_hp(0.1, 1, 0.01) + 0.01), 1e-17);
}

TEST(Closeness, CatalogConstantIsOne) {
    for (NFKind k : {NFKind::TC, NFKind::PF}) {
        for (int p : {1, 2}) {
            const auto pair = catalog_pair(k, p);
            EXPECT_NEAR(empirical_closeness_constant(pair.Phi, pair.phi, p), 1.0, 1e-9);
            EXPECT_DOUBLE_EQ(pair.c, 1.0);
        }
    }
}

TEST(ZnDecay, TcAndPf) {
    const auto tc = make_tc_normal_form(zero_tail(), 1.0);
    double z = -1.0 / 25;
    for (int n = 1; n <= 100; ++n) z = oracle::tc(0.1, z, 0.0, 0.0);
    EXPECT_GE(z, -0.2);
    EXPECT_TRUE(tc_zn_zero_decay_check(tc, 0.1, 100000).passed);
    const auto pf = make_pf_normal_form(zero_tail(), 1.0);
    EXPECT_TRUE(pf_zn_zero_decay_check(pf, 0.1, 100000).passed);
    EXPECT_TRUE(zn_zero_decay_check(make_tc_normal_form(sin_tail(), 1.0), 0.05, 100000).passed);
}

TEST(ZnDecay, AlphaMonotonicity) {
    const auto tc = make_tc_normal_form(zero_tail(), 1.0);
    const auto same = alpha_monotonicity_check(tc, 0.1, -0.005, -0.005, 1000);
    EXPECT_TRUE(same.passed);
    EXPECT_EQ(same.measured, 0.0);
    EXPECT_TRUE(alpha_monotonicity_check(tc, 0.1, -0.005, 0.0, 5000).passed);
    double za = -0.04, zb = -0.04;
    for (int n = 1; n <= 1000; ++n) {
        za = oracle::tc(0.1, za, -0.005, 0.0);
        zb = oracle::tc(0.1, zb, 0.0, 0.0);
        ASSERT_GT(za, zb);
    }
    EXPECT_TRUE(alpha_monotonicity_check(make_tc_normal_form(sin_tail(), 1.0), 0.1, -0.01, -0.002, 5000).passed);
}

TEST(OrderFit, Exact) {
    const std::vector<double> h{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> sq, lin;
    for (double v : h) {
        sq.push_back(v * v);
        lin.push_back(3 * v);
    }
    EXPECT_NEAR(order_fit(h, sq).slope, 2.0, 1e-9);
    const auto f = order_fit(h, lin);
    EXPECT_NEAR(f.slope, 1.0, 1e-9);
    EXPECT_NEAR(f.intercept, std::log(3.0), 1e-9);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
    EXPECT_THROW(order_fit({0.1, 0.05, 0.025}, {1, 2, 3}), InvalidArgument);
    EXPECT_THROW(order_fit(h, {1, 0, 2, 3}), InvalidArgument);
}

TEST(Report, PassRuleAndJson) {
    EXPECT_TRUE(make_report("r", 1.0, 1.0, 1.0, {}).passed);
    EXPECT_TRUE(make_report("r", 1.0 + 1e-10, 1.0, 1.0, {}).passed);
    EXPECT_FALSE(make_report("r", 1.0 + 1e-8, 1.0, 1.0, {}).passed);
    EXPECT_TRUE(make_lower_report("r", 1.0, 1.0, 1.0, {}).passed);
    EXPECT_FALSE(make_lower_report("r", 0.9, 1.0, 1.0, {}).passed);
    const auto line = to_json_line(make_report("r", std::numeric_limits<double>::quiet_NaN(), 1.0, 1.0,
                                               ReportContext{0.1, 0.01, 1, "tc", "inner"}));
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_LT(line.find("\"name\""), line.find("\"measured\""));
    EXPECT_NE(line.find("\"measured\":null"), std::string::npos) << line;
    EXPECT_NE(line.find("\"passed\":false"), std::string::npos) << line;
}

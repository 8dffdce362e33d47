#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bifconj/catalog.hpp"
#include "bifconj/conjugacy.hpp"
#include "bifconj/error.hpp"
#include "bifconj/estimates.hpp"
#include "oracles.hpp"

using namespace bifconj;

namespace {
ConjugacyMap tc_pair(int p, double h, double a, Region r, HalfPlane hp = HalfPlane::Lower) {
    const auto pair = catalog_pair(NFKind::TC, p);
    return build_conjugacy(pair.Phi, pair.phi, h, a, r, hp);
}
}  // namespace

TEST(Sequences, TcInnerStart) {
    const auto nf = make_tc_normal_form(zero_tail(), 1.0);
    const auto s = inner_sequences(nf, 0.1, 0.3);
    EXPECT_DOUBLE_EQ(s.x_seq[0], -0.1);
    EXPECT_NEAR(s.x_seq[1], -0.102, 1e-16);
    EXPECT_EQ(s.y_seq[0], s.x_seq[0]);
    for (std::size_t i = 1; i < s.x_seq.size(); ++i) EXPECT_LT(s.x_seq[i], s.x_seq[i - 1]);
    for (std::size_t i = 1; i < s.y_seq.size(); ++i) EXPECT_GT(s.y_seq[i], s.y_seq[i - 1]);
    EXPECT_LE(std::abs(s.x_seq.back() - s.omega_minus), 1e-14);
    EXPECT_LE(std::abs(s.y_seq.back()), 1e-14);
    EXPECT_NEAR(s.omega_minus, -0.3, 1e-15);
}

TEST(Sequences, PfInnerStart) {
    const auto nf = make_pf_normal_form(zero_tail(), 1.0);
    const double a = 0.002;
    const auto s = inner_sequences(nf, 0.1, a);
    EXPECT_DOUBLE_EQ(s.x0, -std::sqrt(a / 8));
    EXPECT_NEAR(s.omega_minus, -std::sqrt(a), 1e-15);
}

TEST(Sequences, Outer) {
    const auto nf = make_tc_normal_form(zero_tail(), 1.0);
    const auto s = outer_sequence(nf, 0.1, 0.0, -0.04, 1000);
    EXPECT_NEAR(s.z_seq[1], -0.03984, 1e-17);
    const auto neg = outer_sequence(nf, 0.1, -0.01, -0.04);
    EXPECT_LT(std::abs(neg.z_seq.back()), 1e-14);
    for (std::size_t i = 1; i < neg.z_seq.size(); ++i) EXPECT_GT(neg.z_seq[i], neg.z_seq[i - 1]);
    const auto pos = outer_sequence(nf, 0.1, 0.01, -0.04);
    EXPECT_LE(std::abs(pos.z_seq.back() - (-0.01)), 1e-10);
    // z1 <= z0 when alpha + z0 > 0
    EXPECT_THROW(outer_sequence(nf, 0.1, 0.05, -0.04), BoundViolation);
}

TEST(Inverse, RoundTripAndClosedForm) {
    const auto nf = make_tc_normal_form(zero_tail(), 1.0);
    const double h = 0.1, a = 0.01;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ux(-0.04, 0.04);
    for (int i = 0; i < 100; ++i) {
        const double x = ux(rng);
        EXPECT_NEAR(monotone_inverse(nf, h, a, nf(h, x, a)), x, 1e-12);
        const double y = ux(rng);
        const double b = 1 + h * a;
        EXPECT_NEAR(monotone_inverse(nf, h, a, y), 2 * y / (b + std::sqrt(b * b + 4 * h * y)), 1e-15);
    }
    EXPECT_EQ(monotone_inverse(nf, h, a, 0.0), 0.0);
    EXPECT_THROW(monotone_inverse(nf, h, a, -10.0), BracketError);
}

TEST(Conjugacy, IdentityForEqualMaps) {
    const auto nf = make_tc_normal_form(hp_power_tail(1), 1.0);
    for (Region r : {Region::Inner, Region::Outer}) {
        const auto J = build_conjugacy(nf, nf, 0.1, 0.01, r, HalfPlane::Lower);
        EXPECT_LE(sup_id_minus_J(J, 1024).value, 1e-12);
    }
}

TEST(Conjugacy, AnchorAndEndpoints) {
    const auto J = tc_pair(1, 0.1, 0.01, Region::Inner);
    EXPECT_EQ(J(J.u0()), J.u0());
    EXPECT_EQ(J(J.u1()), J.Phi(J.u0()));
    EXPECT_NEAR(J(0.5 * (J.u0() + J.u1())), 0.5 * (J.u0() + J.Phi(J.u0())), 1e-17);
    ASSERT_TRUE(J.forward_limit().has_value());
    EXPECT_NEAR(J(J.forward_limit()->phi), J.forward_limit()->Phi, 1e-10);
    EXPECT_EQ(J(0.0), 0.0);
    const double w_phi = oracle::tc_omega_hp(0.1, 1, 0.01);
    EXPECT_NEAR(J.forward_limit()->phi, w_phi, 1e-15);
    EXPECT_NEAR(J.forward_limit()->Phi, -0.01, 1e-15);
}

TEST(Conjugacy, ResidualAndMonotone) {
    for (NFKind kind : {NFKind::TC, NFKind::PF}) {
        const auto pair = catalog_pair(kind, 1);
        const double a = kind == NFKind::TC ? 0.01 : 0.002;
        for (Region r : {Region::Inner, Region::Outer}) {
            for (HalfPlane hp : {HalfPlane::Lower, HalfPlane::Upper}) {
                // the TC inner region above the axis needs alpha < 0
                const bool flip = kind == NFKind::TC && r == Region::Inner && hp == HalfPlane::Upper;
                const auto J = build_conjugacy(pair.Phi, pair.phi, 0.1, flip ? -a : a, r, hp);
                EXPECT_EQ(J.mirrored(), hp == HalfPlane::Upper);
                EXPECT_LE(conjugacy_residual(J, 1024), 1e-10);
                const auto [lo, hi] = J.interval();
                const auto xs = uniform_grid(lo, hi, 1024);
                const auto js = J.values(xs);
                for (std::size_t i = 1; i < js.size(); ++i) {
                    ASSERT_LT(js[i - 1], js[i]) << to_string(kind) << " " << to_string(r) << " "
                                                << to_string(hp) << " i=" << i;
                }
            }
        }
    }
}

TEST(Conjugacy, GridRefinement) {
    const auto J = tc_pair(2, 0.05, 0.005, Region::Outer);
    const double r256 = conjugacy_residual(J, 256);
    const double r1024 = conjugacy_residual(J, 1024);
    // both sit at rounding level; compare against a floor of a few ulps of the interval
    const double floor = 64 * 2.2e-16 * std::abs(J.interval().first);
    EXPECT_LE(r1024, 2 * std::max(r256, floor));
    EXPECT_LE(r256, 2 * std::max(r1024, floor));
}

TEST(Conjugacy, DomainCompatibility) {
    const auto J = tc_pair(1, 0.1, 0.01, Region::Inner);
    double x = J.u0();
    for (int n = 0; n < 50; ++n) {
        const double next = J.phi(x);
        EXPECT_NEAR(J(next), J.Phi(J(x)), 1e-12) << "n=" << n;
        x = next;
    }
}

TEST(Conjugacy, BatchMatchesScalar) {
    const auto J = tc_pair(1, 0.1, 0.01, Region::Outer);
    const auto [lo, hi] = J.interval();
    const auto xs = uniform_grid(lo, hi, 37);
    const auto batch = J.values(xs);
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(batch[i], J(xs[i]));
}

TEST(Conjugacy, DepthCap) {
    const auto pair = catalog_pair(NFKind::TC, 1);
    BuildOptions opt;
    opt.n_max = 10;
    const auto J = build_conjugacy(pair.Phi, pair.phi, 0.1, 0.01, Region::Inner, HalfPlane::Lower, opt);
    const auto e = J.evaluate(J.forward_limit()->phi + 1e-9);
    EXPECT_TRUE(e.snapped);
    EXPECT_EQ(e.value, J.forward_limit()->Phi);
}

TEST(Conjugacy, Preconditions) {
    const auto pair = catalog_pair(NFKind::TC, 1);
    try {
        build_conjugacy(pair.Phi, pair.phi, 0.1, 0.05, Region::Outer, HalfPlane::Lower);
        FAIL() << "alpha outside the box was accepted";
    } catch (const BoundViolation& e) {
        EXPECT_NE(e.constraint().find("alpha0"), std::string::npos);
    }
    EXPECT_THROW(build_conjugacy(pair.Phi, pair.phi, 0.1, -0.01, Region::Inner, HalfPlane::Lower),
                 InvalidArgument);
    const auto J = build_conjugacy(pair.Phi, pair.phi, 0.1, 0.01, Region::Inner, HalfPlane::Lower);
    EXPECT_THROW(J(1.0), DomainError);
}

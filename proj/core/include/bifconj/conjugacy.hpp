#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "bifconj/maps.hpp"

namespace bifconj {

enum class Region { Inner, Outer };
enum class HalfPlane { Lower, Upper };

std::string_view to_string(Region r);
std::string_view to_string(HalfPlane hp);
Region region_from_string(std::string_view s);
HalfPlane half_plane_from_string(std::string_view s);

inline constexpr std::size_t kDefaultDepthCap = 1'000'000;
inline constexpr double kSequenceTruncation = 1e-14;

struct FundamentalSequences {
    std::vector<double> x_seq;  // forward orbit of x0, decreasing
    std::vector<double> y_seq;  // backward orbit of x0, increasing
    std::vector<double> z_seq;  // forward orbit of z0, increasing
    double x0 = 0.0;
    double z0 = 0.0;
    double omega_minus = 0.0;  // nonzero lower fixed point (alpha > 0)
    double omega_zero = 0.0;
};

// x0 = -alpha/3 (TC) or -sqrt(alpha/8) (PF); requires alpha > 0.
FundamentalSequences inner_sequences(const NormalForm& nf_phi, double h, double alpha,
                                     std::size_t n_max = kDefaultDepthCap);

FundamentalSequences outer_sequence(const NormalForm& nf_phi, double h, double alpha, double z0,
                                    std::size_t n_max = kDefaultDepthCap);

// Unique x with nf(h, x, alpha) = y on the monotone branch around 0.
double monotone_inverse(const NormalForm& nf, double h, double alpha, double y);

struct BuildOptions {
    std::size_t n_max = kDefaultDepthCap;
    std::optional<double> z0;  // outer anchor; defaults to -eps0 (lower) or +eps0 (upper)
    bool enforce_box = true;
};

struct Evaluation {
    double value = 0.0;
    bool snapped = false;
    std::size_t depth = 0;
};

struct FixedPair {
    double phi = 0.0;  // fixed point of N_phi
    double Phi = 0.0;  // its image, the fixed point of N_Phi
};

// J with J o N_phi = N_Phi o J, linear on the anchor domain between u0 and
// u1 = N_phi(u0) and propagated along orbits.
class ConjugacyMap {
public:
    double operator()(double x) const { return evaluate(x).value; }
    Evaluation evaluate(double x) const;
    // Same results as evaluate(), with several independent orbits advanced together.
    void evaluate_batch(std::span<const double> xs, std::span<Evaluation> out) const;
    std::vector<double> values(std::span<const double> xs) const;

    double phi(double x) const;
    double Phi(double x) const;
    double phi_inverse(double y) const;
    double Phi_inverse(double y) const;

    std::pair<double, double> interval() const { return {lo_, hi_}; }
    std::pair<double, double> extended_interval() const { return {lo_ext_, hi_ext_}; }

    Region region() const noexcept { return region_; }
    HalfPlane half_plane() const noexcept { return half_; }
    double h() const noexcept { return h_; }
    double alpha() const noexcept { return alpha_; }
    std::size_t depth_cap() const noexcept { return n_max_; }
    // Upper half-plane maps mirror the lower construction; no published formulas back them.
    bool mirrored() const noexcept { return half_ == HalfPlane::Upper; }

    double u0() const noexcept { return u0_; }
    double u1() const noexcept { return u1_; }
    double v0() const noexcept { return v0_; }
    double v1() const noexcept { return v1_; }
    const std::optional<FixedPair>& forward_limit() const noexcept { return fwd_; }
    const std::optional<FixedPair>& backward_limit() const noexcept { return bwd_; }

    const NormalForm& nf_Phi() const noexcept { return Phi_nf_; }
    const NormalForm& nf_phi() const noexcept { return phi_nf_; }

private:
    friend ConjugacyMap build_conjugacy(const NormalForm&, const NormalForm&, double, double,
                                        Region, HalfPlane, const BuildOptions&);
    ConjugacyMap(NormalForm Phi_nf, NormalForm phi_nf) : Phi_nf_(std::move(Phi_nf)), phi_nf_(std::move(phi_nf)) {}

    double anchor(double u) const;
    // Clamps x onto the extended interval when it is within rounding of an end.
    bool settle_endpoint(double& x, Evaluation& out) const;

    NormalForm Phi_nf_;
    NormalForm phi_nf_;
    Region region_ = Region::Inner;
    HalfPlane half_ = HalfPlane::Lower;
    double h_ = 0.0;
    double alpha_ = 0.0;
    std::size_t n_max_ = kDefaultDepthCap;
    double u0_ = 0.0, u1_ = 0.0, v0_ = 0.0, v1_ = 0.0;
    double dir_ = 1.0;  // sign(u1 - u0)
    std::optional<FixedPair> fwd_;
    std::optional<FixedPair> bwd_;
    double lo_ = 0.0, hi_ = 0.0, lo_ext_ = 0.0, hi_ext_ = 0.0;

    // Per-(h, alpha) frozen coefficients: map = c1 x + c2 x^deg + c3 x^(deg+1).
    struct Frozen {
        bool poly = false;
        int deg = 2;
        double c1 = 1.0, c2 = 0.0, c3 = 0.0;
    };
    Frozen fPhi_;
    Frozen fphi_;
    void freeze();
};

ConjugacyMap build_conjugacy(const NormalForm& nf_Phi, const NormalForm& nf_phi, double h,
                             double alpha, Region region, HalfPlane half,
                             const BuildOptions& opt = {});

inline double eval_conjugacy(const ConjugacyMap& J, double x) { return J(x); }

// n points from lo to hi inclusive.
std::vector<double> uniform_grid(double lo, double hi, int n);

// max over a uniform grid on J's interval of |J(N_phi(x)) - N_Phi(J(x))|.
double conjugacy_residual(const ConjugacyMap& J, int grid_size);

}  // namespace bifconj

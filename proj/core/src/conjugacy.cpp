#include "bifconj/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bifconj/fixedpoints.hpp"
#include "bifconj/roots.hpp"

namespace bifconj {

std::string_view to_string(Region r) { return r == Region::Inner ? "inner" : "outer"; }
std::string_view to_string(HalfPlane hp) { return hp == HalfPlane::Lower ? "lower" : "upper"; }

Region region_from_string(std::string_view s) {
    if (s == "inner") return Region::Inner;
    if (s == "outer") return Region::Outer;
    throw InvalidArgument("unknown region '" + std::string(s) + "' (expected inner or outer)");
}

HalfPlane half_plane_from_string(std::string_view s) {
    if (s == "lower" || s == "x<=0" || s == "neg") return HalfPlane::Lower;
    if (s == "upper" || s == "x>0" || s == "pos") return HalfPlane::Upper;
    throw InvalidArgument("unknown half-plane '" + std::string(s) + "' (expected lower or upper)");
}

namespace {

constexpr double kInverseTol = 1e-14;
constexpr double kSnap = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Solves f(x) = y for an increasing f with f(0) = 0.
template <class F, class DF>
double invert_increasing(F&& f, DF&& df, double y) {
    if (y == 0.0) return 0.0;
    // f is a small perturbation of the identity, so 2y - f(y) is already close.
    double x = y - (f(y) - y);
    double best = x;
    for (int it = 0; it < 40; ++it) {
        const double r = f(x) - y;
        if (r == 0.0) return x;
        const double d = df(x);
        if (!(d > 0.0)) break;
        const double step = r / d;
        const double xn = x - step;
        if (!std::isfinite(xn)) break;
        // quadratic convergence: the next correction would be far below one ulp
        if (std::abs(step) <= 1e-6 * std::abs(xn)) return xn;
        x = best = xn;
    }
    if (std::abs(f(best) - y) <= kInverseTol) return best;
    // Fall back to bisection on a widening bracket around the Newton iterate.
    double step = std::max(std::abs(best - y), 1e-12) + 1e-300;
    double lo = best - step, hi = best + step;
    for (int k = 0; k < 200 && !(f(lo) <= y && f(hi) >= y); ++k) {
        step *= 2.0;
        lo = best - step;
        hi = best + step;
    }
    if (!(f(lo) <= y && f(hi) >= y)) {
        throw BracketError("monotone inverse: y = " + fmt(y) + " is outside the image");
    }
    const double r = bisect([&](double t) { return f(t) - y; }, lo, hi);
    if (std::abs(f(r) - y) > kInverseTol) {
        throw BracketError("monotone inverse: residual above tolerance at y = " + fmt(y));
    }
    return r;
}

}  // namespace

double monotone_inverse(const NormalForm& nf, double h, double alpha, double y) {
    return invert_increasing([&](double x) { return nf(h, x, alpha); },
                             [&](double x) { return nf.dx(h, x, alpha); }, y);
}

namespace {

double eval_frozen(const NormalForm& nf, double h, double alpha, bool poly, int deg, double c1,
                   double c2, double c3, double x) {
    if (!poly) return nf(h, x, alpha);
    // same operation order as NormalForm::operator()
    if (deg == 2) {
        const double x2 = x * x;
        return c1 * x + c2 * x2 + h * x2 * x * c3;
    }
    const double x3 = x * x * x;
    return c1 * x + c2 * x3 + h * x3 * x * c3;
}

double dx_frozen(const NormalForm& nf, double h, double alpha, bool poly, int deg, double c1,
                 double c2, double c3, double x) {
    if (!poly) return nf.dx(h, x, alpha);
    if (deg == 2) return c1 + 2.0 * c2 * x + 3.0 * h * c3 * x * x;
    return c1 + 3.0 * c2 * x * x + 4.0 * h * c3 * x * x * x;
}

}  // namespace

void ConjugacyMap::freeze() {
    auto f = [&](const NormalForm& nf, Frozen& fr) {
        fr.deg = nf.degree();
        fr.poly = static_cast<bool>(nf.tail().h_only);
        fr.c1 = 1.0 + h_ * alpha_;
        fr.c2 = nf.sign() * h_;
        fr.c3 = fr.poly ? nf.tail().h_only(h_) : 0.0;
    };
    f(Phi_nf_, fPhi_);
    f(phi_nf_, fphi_);
}

double ConjugacyMap::phi(double x) const {
    return eval_frozen(phi_nf_, h_, alpha_, fphi_.poly, fphi_.deg, fphi_.c1, fphi_.c2, fphi_.c3, x);
}

double ConjugacyMap::Phi(double x) const {
    return eval_frozen(Phi_nf_, h_, alpha_, fPhi_.poly, fPhi_.deg, fPhi_.c1, fPhi_.c2, fPhi_.c3, x);
}

double ConjugacyMap::phi_inverse(double y) const {
    if (y == 0.0) return 0.0;
    return invert_increasing(
        [&](double x) { return phi(x); },
        [&](double x) {
            return dx_frozen(phi_nf_, h_, alpha_, fphi_.poly, fphi_.deg, fphi_.c1, fphi_.c2, fphi_.c3, x);
        },
        y);
}

double ConjugacyMap::Phi_inverse(double y) const {
    if (y == 0.0) return 0.0;
    return invert_increasing(
        [&](double x) { return Phi(x); },
        [&](double x) {
            return dx_frozen(Phi_nf_, h_, alpha_, fPhi_.poly, fPhi_.deg, fPhi_.c1, fPhi_.c2, fPhi_.c3, x);
        },
        y);
}

double ConjugacyMap::anchor(double u) const {
    const double t = (u - u0_) / (u1_ - u0_);
    return (1.0 - t) * v0_ + t * v1_;
}

bool ConjugacyMap::settle_endpoint(double& x, Evaluation& out) const {
    if (!(x >= lo_ext_ && x <= hi_ext_)) {
        // tolerate rounding just past an end
        if (fwd_ && std::abs(x - fwd_->phi) <= kSnap) return out = {fwd_->Phi, true, 0}, true;
        if (bwd_ && std::abs(x - bwd_->phi) <= kSnap) return out = {bwd_->Phi, true, 0}, true;
        if (std::abs(x - lo_ext_) <= kSnap) {
            x = lo_ext_;
        } else if (std::abs(x - hi_ext_) <= kSnap) {
            x = hi_ext_;
        } else {
            throw DomainError("conjugacy evaluated at x = " + fmt(x) + " outside [" + fmt(lo_ext_) + ", " +
                              fmt(hi_ext_) + "]");
        }
    }
    if (fwd_ && x == fwd_->phi) return out = {fwd_->Phi, false, 0}, true;
    if (bwd_ && x == bwd_->phi) return out = {bwd_->Phi, false, 0}, true;
    // A computed nonzero fixed point is only fixed up to rounding; iterating
    // from within an ulp of it can step across it.
    if (fwd_ && fwd_->phi != 0.0 && std::abs(x - fwd_->phi) <= kSnap) return out = {fwd_->Phi, true, 0}, true;
    if (bwd_ && bwd_->phi != 0.0 && std::abs(x - bwd_->phi) <= kSnap) return out = {bwd_->Phi, true, 0}, true;
    return false;
}

Evaluation ConjugacyMap::evaluate(double x) const {
    Evaluation e;
    evaluate_batch(std::span<const double>(&x, 1), std::span<Evaluation>(&e, 1));
    return e;
}

void ConjugacyMap::evaluate_batch(std::span<const double> xs, std::span<Evaluation> out) const {
    if (out.size() != xs.size()) throw InvalidArgument("evaluate_batch: size mismatch");
    // Each orbit is a long chain of dependent steps; interleaving lanes lets
    // independent chains overlap.
    constexpr std::size_t L = 8;
    enum Mode { Done, Pull, Push };  // Pull: toward the forward limit via phi^-1
    for (std::size_t base = 0; base < xs.size(); base += L) {
        const std::size_t m = std::min(L, xs.size() - base);
        double u[L], w[L];
        std::size_t k[L], left[L];
        Mode mode[L];
        bool moving[L];
        for (std::size_t i = 0; i < m; ++i) {
            double x = xs[base + i];
            mode[i] = Done;
            moving[i] = false;
            k[i] = 0;
            if (settle_endpoint(x, out[base + i])) continue;
            u[i] = x;
            if ((x - u1_) * dir_ > 0.0) {
                mode[i] = Pull;
            } else if ((x - u0_) * dir_ < 0.0) {
                mode[i] = Push;
            } else {
                out[base + i] = {anchor(x), false, 0};
                continue;
            }
            moving[i] = true;
        }
        for (bool any = true; any;) {
            any = false;
            for (std::size_t i = 0; i < m; ++i) {
                if (!moving[i]) continue;
                const bool outside = mode[i] == Pull ? (u[i] - u1_) * dir_ > 0.0 : (u[i] - u0_) * dir_ < 0.0;
                if (!outside) {
                    moving[i] = false;
                    continue;
                }
                if (++k[i] > n_max_) {
                    const auto& lim = mode[i] == Pull ? fwd_ : bwd_;
                    out[base + i] = {lim ? lim->Phi : xs[base + i], true, k[i] - 1};
                    moving[i] = false;
                    mode[i] = Done;
                    continue;
                }
                u[i] = mode[i] == Pull ? phi_inverse(u[i]) : phi(u[i]);
                any = true;
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            left[i] = mode[i] == Done ? 0 : k[i];
            if (mode[i] != Done) w[i] = anchor(u[i]);
        }
        for (bool any = true; any;) {
            any = false;
            for (std::size_t i = 0; i < m; ++i) {
                if (!left[i]) continue;
                w[i] = mode[i] == Pull ? Phi(w[i]) : Phi_inverse(w[i]);
                --left[i];
                any = true;
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (mode[i] != Done) out[base + i] = {w[i], false, k[i]};
        }
    }
}

std::vector<double> ConjugacyMap::values(std::span<const double> xs) const {
    std::vector<Evaluation> ev(xs.size());
    evaluate_batch(xs, ev);
    std::vector<double> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = ev[i].value;
    return v;
}

namespace {

double nonzero_fixed_point(const NormalForm& nf, double h, double alpha, bool upper) {
    if (nf.kind() == NFKind::TC) return tc_nonzero_fixed_point(nf, h, alpha).x;
    return upper ? pf_positive_fixed_point(nf, h, alpha).x : pf_negative_fixed_point(nf, h, alpha).x;
}

}  // namespace

ConjugacyMap build_conjugacy(const NormalForm& nf_Phi, const NormalForm& nf_phi, double h,
                             double alpha, Region region, HalfPlane half, const BuildOptions& opt) {
    if (nf_Phi.kind() != nf_phi.kind()) throw InvalidArgument("normal forms of different kinds");
    const NFKind kind = nf_phi.kind();
    const bool tc = kind == NFKind::TC;
    const int expected_sign = tc ? +1 : -1;
    if (nf_Phi.sign() != expected_sign || nf_phi.sign() != expected_sign) {
        throw InvalidArgument(tc ? "TC conjugacy needs s = +1" : "PF conjugacy needs s = -1");
    }
    if (!(h > 0.0)) throw BoundViolation("0 < h", "h = " + fmt(h));
    if (opt.enforce_box) {
        nf_Phi.check_parameters(h, alpha);
        nf_phi.check_parameters(h, alpha);
    }
    const bool upper = half == HalfPlane::Upper;
    const double eps0 = std::min(nf_Phi.box().eps0, nf_phi.box().eps0);

    ConjugacyMap J(nf_Phi, nf_phi);
    J.region_ = region;
    J.half_ = half;
    J.h_ = h;
    J.alpha_ = alpha;
    J.n_max_ = opt.n_max;
    J.freeze();

    auto limit_pair = [&](bool up) {
        return FixedPair{nonzero_fixed_point(nf_phi, h, alpha, up),
                         nonzero_fixed_point(nf_Phi, h, alpha, up)};
    };
    const FixedPair zero{0.0, 0.0};
    bool anchor_at_u1 = false;

    if (region == Region::Inner) {
        // the inner region lies between 0 and the nonzero branch on this side
        const bool exists = tc ? (upper ? alpha < 0.0 : alpha > 0.0) : alpha > 0.0;
        if (!exists) {
            throw InvalidArgument("no inner region for " + std::string(to_string(kind)) + " in the " +
                                  std::string(to_string(half)) + " half-plane at alpha = " + fmt(alpha));
        }
        const double start = tc ? std::abs(alpha) / 3.0 : std::sqrt(alpha / 8.0);
        J.u0_ = J.v0_ = upper ? start : -start;
        if (tc && upper) {
            J.fwd_ = zero;
            J.bwd_ = limit_pair(true);
        } else {
            J.fwd_ = limit_pair(upper);
            J.bwd_ = zero;
        }
    } else {
        const double z = opt.z0.value_or(upper ? eps0 : -eps0);
        if (upper ? !(z > 0.0) : !(z < 0.0)) {
            throw InvalidArgument("outer anchor must lie in the " + std::string(to_string(half)) +
                                  " half-plane");
        }
        if (opt.enforce_box) {
            const double K = std::max(nf_Phi.K(), nf_phi.K());
            const double a0 = std::min(nf_Phi.box().alpha0, nf_phi.box().alpha0);
            const double lower_lim = tc ? 2.0 * a0 : std::sqrt(2.0 * a0);
            if (!(std::abs(z) > lower_lim && std::abs(z) < 1.0 / (2.0 * K))) {
                throw BoundViolation(tc ? "2 alpha0 < |z0| < 1/(2K)" : "sqrt(2 alpha0) < |z0| < 1/(2K)",
                                     "z0 = " + fmt(z));
            }
        }
        if (tc && upper) {
            // orbits leave through z: anchor on [N^-1(z), z], backward limit inside
            anchor_at_u1 = true;
            J.u1_ = J.v1_ = z;
            J.u0_ = J.phi_inverse(z);
            J.v0_ = J.Phi_inverse(z);
            J.bwd_ = alpha < 0.0 ? limit_pair(true) : zero;
        } else {
            J.u0_ = J.v0_ = z;
            J.fwd_ = alpha > 0.0 ? limit_pair(upper) : zero;
        }
    }
    if (!anchor_at_u1) {
        J.u1_ = J.phi(J.u0_);
        J.v1_ = J.Phi(J.v0_);
    }
    if (J.u1_ == J.u0_) throw BoundViolation("x1 != x0", "anchor domain is degenerate");
    J.dir_ = J.u1_ > J.u0_ ? 1.0 : -1.0;
    // orbits must run from the backward end toward the forward end
    const bool toward_fwd = !J.fwd_ || (J.fwd_->phi - J.u0_) * J.dir_ > 0.0;
    const bool away_bwd = !J.bwd_ || (J.u0_ - J.bwd_->phi) * J.dir_ > 0.0;
    if (!toward_fwd || !away_bwd) {
        throw BoundViolation(region == Region::Inner ? "x1 < x0 (inner orbit monotone)"
                                                    : "z0 < z1 (outer orbit monotone)",
                             "parameters outside the validity box: u0 = " + fmt(J.u0_) +
                                 ", u1 = " + fmt(J.u1_));
    }
    const double fend = J.fwd_ ? J.fwd_->phi : J.u1_;
    const double fext = J.fwd_ ? J.fwd_->phi : J.phi(J.u1_);
    const double bend = J.bwd_ ? J.bwd_->phi : J.u0_;
    const double bext = J.bwd_ ? J.bwd_->phi : J.phi_inverse(J.u0_);
    J.lo_ = std::min(fend, bend);
    J.hi_ = std::max(fend, bend);
    J.lo_ext_ = std::min(fext, bext);
    J.hi_ext_ = std::max(fext, bext);
    return J;
}

FundamentalSequences inner_sequences(const NormalForm& nf_phi, double h, double alpha,
                                     std::size_t n_max) {
    if (!(alpha > 0.0)) throw InvalidArgument("inner sequences need alpha > 0");
    const bool tc = nf_phi.kind() == NFKind::TC;
    FundamentalSequences s;
    s.x0 = tc ? -alpha / 3.0 : -std::sqrt(alpha / 8.0);
    s.omega_minus = tc ? tc_nonzero_fixed_point(nf_phi, h, alpha).x
                       : pf_negative_fixed_point(nf_phi, h, alpha).x;
    s.omega_zero = 0.0;
    const double x1 = nf_phi(h, s.x0, alpha);
    if (!(x1 < s.x0)) {
        throw BoundViolation("x1 < x0", "x0 = " + fmt(s.x0) + ", x1 = " + fmt(x1) +
                                            "; parameters outside the validity box");
    }
    double x = s.x0;
    s.x_seq.push_back(x);
    while (s.x_seq.size() <= n_max && std::abs(x - s.omega_minus) >= kSequenceTruncation) {
        const double xn = nf_phi(h, x, alpha);
        if (xn == x) break;
        x = xn;
        s.x_seq.push_back(x);
    }
    double y = s.x0;
    s.y_seq.push_back(y);
    while (s.y_seq.size() <= n_max && std::abs(y) >= kSequenceTruncation) {
        const double yn = monotone_inverse(nf_phi, h, alpha, y);
        if (yn == y) break;
        y = yn;
        s.y_seq.push_back(y);
    }
    return s;
}

FundamentalSequences outer_sequence(const NormalForm& nf_phi, double h, double alpha, double z0,
                                    std::size_t n_max) {
    if (!(z0 < 0.0)) throw InvalidArgument("outer sequence needs z0 < 0");
    const bool tc = nf_phi.kind() == NFKind::TC;
    FundamentalSequences s;
    s.z0 = z0;
    s.omega_zero = 0.0;
    double limit = 0.0;
    if (alpha > 0.0) {
        s.omega_minus = tc ? tc_nonzero_fixed_point(nf_phi, h, alpha).x
                           : pf_negative_fixed_point(nf_phi, h, alpha).x;
        limit = s.omega_minus;
    }
    const double z1 = nf_phi(h, z0, alpha);
    if (!(z1 > z0)) {
        throw BoundViolation("z0 < z1", "z0 = " + fmt(z0) + ", z1 = " + fmt(z1) +
                                            "; parameters outside the validity box");
    }
    double z = z0;
    s.z_seq.push_back(z);
    while (s.z_seq.size() <= n_max && std::abs(z - limit) >= kSequenceTruncation) {
        const double zn = nf_phi(h, z, alpha);
        if (zn == z) break;
        z = zn;
        s.z_seq.push_back(z);
    }
    return s;
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
    if (n < 2) throw InvalidArgument("grid needs at least 2 points");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    g.back() = hi;
    return g;
}

double conjugacy_residual(const ConjugacyMap& J, int grid_size) {
    const auto [lo, hi] = J.interval();
    const auto grid = uniform_grid(lo, hi, grid_size);
    std::vector<double> images(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) images[i] = J.phi(grid[i]);
    const auto Jx = J.values(grid);
    const auto Jphi = J.values(images);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(Jphi[i] - J.Phi(Jx[i])));
    }
    return worst;
}

}  // namespace bifconj

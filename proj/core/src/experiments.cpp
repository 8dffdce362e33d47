#include "bifconj/experiments.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>

#include "bifconj/catalog.hpp"
#include "bifconj/parallel.hpp"

namespace bifconj {

namespace mp = boost::multiprecision;
using Real50 = mp::cpp_bin_float_50;

namespace {

template <class T>
T rk4_quadratic(T h, T a) {
    const T z = a * h;
    return h * (1 + z * (T(3) / 2 + z * (T(7) / 6 + z * (T(5) / 8 + z * (T(5) / 24 + z * (T(5) / 96 + z / 96))))));
}

// 50 digits leave ample room for the cancellation in e^z - 1.
Real50 exact_quadratic(const Real50& h, const Real50& a) {
    if (a == 0) return h;
    const Real50 ez = mp::exp(a * h);
    return ez * (ez - 1) / a;
}

template <class T>
T p4(T w) {
    return 1 + w * (1 + w * (T(1) / 2 + w * (T(1) / 6 + w / 24)));
}

template <class T>
T dp4(T w) {
    return 1 + w * (1 + w * (T(1) / 2 + w / 6));
}

}  // namespace

long double section5_rk4_step(long double h, long double x, long double alpha) {
    auto f = [alpha](long double y) { return alpha * y + y * y; };
    const long double k1 = f(x);
    const long double k2 = f(x + h / 2 * k1);
    const long double k3 = f(x + h / 2 * k2);
    const long double k4 = f(x + h * k3);
    return x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

double exact_flow_quadratic_coefficient(double h, double alpha) {
    return static_cast<double>(exact_quadratic(Real50(h), Real50(alpha)));
}

double rk4_quadratic_coefficient(double h, double alpha) {
    return static_cast<double>(rk4_quadratic<Real50>(Real50(h), Real50(alpha)));
}

AlignmentPair compute_alignment(double h, double alpha) {
    if (!(h > 0.0)) throw InvalidArgument("compute_alignment needs h > 0");
    if (!(std::abs(alpha * h) < 0.5)) throw InvalidArgument("compute_alignment needs |alpha h| < 1/2");
    AlignmentPair out;
    out.h = h;
    out.alpha = alpha;
    const Real50 H(h), A(alpha);
    const Real50 z = A * H;
    Real50 at = 0, rho = 1;
    if (alpha != 0.0) {
        // linear multipliers at 0: P4(alpha_tilde h) = e^{alpha h}
        const Real50 target = mp::exp(z);
        Real50 w = z;
        int it = 0;
        for (; it < 100; ++it) {
            const Real50 step = (p4(w) - target) / dp4(w);
            w -= step;
            if (mp::abs(step) <= Real50("1e-45") * mp::abs(w)) break;
        }
        if (it == 100) throw ConvergenceError("alpha_tilde Newton solve", 100);
        at = w / H;
        rho = exact_quadratic(H, A) / rk4_quadratic(H, at);
    }
    out.alpha_tilde = static_cast<double>(at);
    out.rho = static_cast<double>(rho);
    out.alpha_tilde_ld = static_cast<long double>(at);
    out.rho_ld = static_cast<long double>(rho);
    out.rho_minus_one = static_cast<double>(rho - 1);
    out.alpha_tilde_minus_alpha = static_cast<double>(at - A);
    const Real50 z4 = z * z * z * z, z5 = z4 * z;
    out.series.alpha_tilde = static_cast<double>(mp::abs(at - A * (1 + z4 / 120 - z5 / 144)));
    out.series.rho = static_cast<double>(mp::abs(rho - (1 + z4 / 20 - 5 * z5 / 96)));
    out.series.bound = static_cast<double>(mp::pow(mp::abs(z), 6));
    return out;
}

namespace {

OrbitDiff run_orbits(double h, double x0, double alpha, std::size_t N, long double start,
                     long double alpha_num, long double rho) {
    OrbitDiff d;
    d.h = h;
    d.x0 = x0;
    d.alpha = alpha;
    d.values.resize(N + 1);
    const long double H = h, X0 = x0, A = alpha;
    const long double scale = 1.0L / (H * H * H * H);
    long double y = start;
    for (std::size_t n = 0; n <= N; ++n) {
        const long double exact = tc_model_exact_flow_t<long double>(static_cast<long double>(n) * H, X0, A);
        const long double v = std::abs(exact - y / rho) * scale;
        d.values[n] = static_cast<double>(v);
        if (d.values[n] > d.sup) {
            d.sup = d.values[n];
            d.argmax = n;
        }
        y = section5_rk4_step(H, y, alpha_num);
    }
    return d;
}

}  // namespace

OrbitDiff delta_sequence(double h, double x0, double alpha, std::size_t N) {
    if (x0 > 0.0) throw InvalidArgument("delta_sequence needs x0 <= 0");
    return run_orbits(h, x0, alpha, N, x0, alpha, 1.0L);
}

OrbitDiff orbit_closeness_experiment(double h, double x0, double alpha, std::size_t N,
                                     double perturb_alpha_tilde) {
    if (x0 > 0.0) throw InvalidArgument("orbit_closeness_experiment needs x0 <= 0");
    const AlignmentPair a = compute_alignment(h, alpha);
    const long double rho = a.rho_ld;
    OrbitDiff d = run_orbits(h, x0, alpha, N, rho * static_cast<long double>(x0),
                             a.alpha_tilde_ld + static_cast<long double>(perturb_alpha_tilde), rho);
    d.perturbation = perturb_alpha_tilde;
    return d;
}

double sup_prefix(const OrbitDiff& d, std::size_t n_last) {
    if (d.values.empty()) return 0.0;
    const auto end = d.values.begin() + static_cast<std::ptrdiff_t>(std::min(n_last + 1, d.values.size()));
    return *std::max_element(d.values.begin(), end);
}

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size() || !std::isfinite(out)) {
        throw InvalidArgument("config: '" + key + "' expects a number, got '" + v + "'");
    }
    return out;
}

int parse_int(const std::string& key, const std::string& v) {
    const double d = parse_double(key, v);
    if (d != std::floor(d)) throw InvalidArgument("config: '" + key + "' expects an integer");
    return static_cast<int>(d);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw InvalidArgument("config: '" + key + "' is empty");
    return out;
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    bool have_h = false, have_alpha = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "kind") {
            cfg.kind = nf_kind_from_string(val);
        } else if (key == "p") {
            cfg.p = parse_int(key, val);
        } else if (key == "h") {
            cfg.h = parse_list(key, val);
            have_h = true;
        } else if (key == "alpha") {
            cfg.alpha = parse_list(key, val);
            have_alpha = true;
        } else if (key == "region") {
            cfg.region = region_from_string(val);
        } else if (key == "half") {
            cfg.half = half_plane_from_string(val);
        } else if (key == "tail") {
            cfg.tail = val;
        } else if (key == "tail_Phi") {
            cfg.tail_Phi = val;
        } else if (key == "grid") {
            cfg.grid = parse_int(key, val);
        } else if (key == "enforce_box") {
            if (val != "true" && val != "false") throw InvalidArgument("config: enforce_box expects true or false");
            cfg.enforce_box = val == "true";
        } else {
            throw InvalidArgument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (!have_h || !have_alpha) throw InvalidArgument("config needs both 'h' and 'alpha'");
    if (cfg.p < 1) throw InvalidArgument("config: p must be >= 1");
    for (double h : cfg.h)
        if (!(h > 0.0)) throw InvalidArgument("config: every h must be positive");
    return cfg;
}

namespace {

std::optional<double> simple_slope(const std::vector<double>& hs, const std::vector<double>& sups) {
    if (hs.size() < 2) return std::nullopt;
    const std::size_t n = hs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(hs[i]);
        my += std::log(sups[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(hs[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(sups[i]) - my);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

}  // namespace

SweepResult h_sweep(const SweepConfig& cfg) {
    const CatalogPair pair = catalog_pair(cfg.kind, cfg.p, cfg.tail, cfg.tail_Phi);
    SweepResult res;
    for (double h : cfg.h)
        for (double a : cfg.alpha) res.rows.push_back({h, a, 0.0, std::nullopt, {}});

    parallel_for(res.rows.size(), [&](std::size_t i) {
        auto& row = res.rows[i];
        try {
            BuildOptions opt;
            opt.enforce_box = cfg.enforce_box;
            const auto J = build_conjugacy(pair.Phi, pair.phi, row.h, row.alpha, cfg.region, cfg.half, opt);
            row.sup = sup_id_minus_J(J, cfg.grid).value;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });

    bool any_ok = false;
    res.degenerate = true;
    for (const auto& r : res.rows) {
        if (!r.error.empty()) continue;
        any_ok = true;
        if (r.sup > 1e-12) res.degenerate = false;
    }
    if (!any_ok) res.degenerate = false;
    if (res.degenerate) return res;

    std::map<double, std::pair<std::vector<double>, std::vector<double>>> per_alpha;
    for (auto& r : res.rows) {
        if (!r.error.empty() || !(r.sup > 0.0)) continue;
        auto& [hs, sups] = per_alpha[r.alpha];
        hs.push_back(r.h);
        sups.push_back(r.sup);
        r.slope_so_far = simple_slope(hs, sups);
    }
    for (double a : cfg.alpha) {
        const auto it = per_alpha.find(a);
        if (it == per_alpha.end() || it->second.first.size() < 4) continue;
        if (std::any_of(res.fits.begin(), res.fits.end(), [&](const auto& f) { return f.first == a; })) continue;
        res.fits.emplace_back(a, order_fit(it->second.first, it->second.second));
    }
    return res;
}

std::vector<PortraitRow> portrait_orbits(double h, double alpha,
                                         const std::vector<std::pair<double, double>>& starts,
                                         std::size_t N) {
    std::vector<PortraitRow> rows;
    rows.reserve(starts.size() * (N + 1));
    for (std::size_t k = 0; k < starts.size(); ++k) {
        const auto [x0, y0] = starts[k];
        for (std::size_t n = 0; n <= N; ++n) {
            const double t = static_cast<double>(n) * h;
            rows.push_back({k, n, tc_model_exact_flow(t, x0, alpha), model_y_flow(t, y0)});
        }
    }
    return rows;
}

}  // namespace bifconj

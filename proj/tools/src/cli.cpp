#include "bifconj/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "bifconj/catalog.hpp"
#include "bifconj/conjugacy.hpp"
#include "bifconj/error.hpp"
#include "bifconj/estimates.hpp"
#include "bifconj/experiments.hpp"
#include "bifconj/fixedpoints.hpp"
#include "bifconj/report.hpp"
#include "bifconj/suites.hpp"

namespace bifconj::cli {

namespace {

using json = nlohmann::ordered_json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Writes to path when given, else to the fallback stream. Files are opened
// in binary mode so line endings stay LF.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
    if (path.empty()) {
        body(fallback);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
    body(f);
    if (!f) throw Error("write to '" + path + "' failed");
}

// ------------------------------------------------------------ branches

struct BranchesArgs {
    std::string map;
    int p = 1;
    double h = 0.1;
    double alpha_min = -0.1;
    double alpha_max = 0.1;
    int n_alpha = 41;
    double x_min = -1.0;
    double x_max = 1.0;
    std::string out;
};

int run_branches(const BranchesArgs& a, std::ostream& out) {
    if (a.n_alpha < 3) throw InvalidArgument("--n-alpha must be at least 3");
    if (!(a.alpha_min < a.alpha_max)) throw InvalidArgument("--alpha-min must be below --alpha-max");
    if (!(a.x_min < a.x_max)) throw InvalidArgument("--x-min must be below --x-max");
    if (!(a.h > 0.0)) throw InvalidArgument("--h must be positive");
    const ParamMap m = catalog_map(a.map, a.p);
    const BranchDiagram d = trace_branches(m.eval, a.h, a.alpha_min, a.alpha_max, a.n_alpha, a.x_min, a.x_max);
    emit(a.out, out, [&](std::ostream& os) {
        os << "alpha,x,multiplier,stability,branch_id\n";
        for (const auto& b : d.branches) {
            for (const auto& pt : b.points) {
                os << num(pt.alpha) << ',' << num(pt.x) << ',' << num(pt.multiplier) << ','
                   << to_string(pt.stability) << ',' << b.id << '\n';
            }
        }
    });
    return kOk;
}

// ------------------------------------------------------------ classify

struct ClassifyArgs {
    std::string map;
    int p = 1;
    double h = 0.1;
    double tol = kZeroTolerance;
};

int run_classify(const ClassifyArgs& a, std::ostream& out) {
    if (!(a.h > 0.0)) throw InvalidArgument("--h must be positive");
    if (!(a.tol > 0.0)) throw InvalidArgument("--tol must be positive");
    const ParamMap m = catalog_map(a.map, a.p);
    const BifClass c = classify_bifurcation(m.eval, a.h, a.tol);
    json j;
    j["verdict"] = to_string(c.verdict);
    j["conditions"] = json::object();
    for (const auto& [k, v] : c.conditions) j["conditions"][k] = v;
    j["discriminant"] = c.discriminant;
    j["values"] = json::object();
    for (const auto& [k, v] : c.values) j["values"][k] = v;
    j["map"] = a.map;
    j["h"] = a.h;
    out << j.dump() << '\n';
    return kOk;
}

// ----------------------------------------------------------- conjugacy

struct ConjugacyArgs {
    std::string kind;
    double h = 0.0;
    double alpha = 0.0;
    int p = 1;
    std::string tail = "hp_power";
    std::string tail_Phi = "zero";
    std::string region = "inner";
    std::string half = "lower";
    int grid = 1024;
    std::string out;
};

int run_conjugacy(const ConjugacyArgs& a, std::ostream& out, std::ostream& err) {
    const NFKind kind = nf_kind_from_string(a.kind);
    const Region region = region_from_string(a.region);
    const HalfPlane half = half_plane_from_string(a.half);
    if (a.grid < 2) throw InvalidArgument("--grid must be at least 2");
    const CatalogPair pair = catalog_pair(kind, a.p, a.tail, a.tail_Phi);
    // box validation happens inside the build, before any orbit is computed
    const ConjugacyMap J = build_conjugacy(pair.Phi, pair.phi, a.h, a.alpha, region, half);
    if (J.mirrored()) err << "note: upper half-plane map uses the mirrored construction\n";
    const auto [lo, hi] = J.interval();
    const auto grid = uniform_grid(lo, hi, a.grid);
    std::vector<double> images(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) images[i] = J.phi(grid[i]);
    const auto Jx = J.values(grid);
    const auto Jphi = J.values(images);
    emit(a.out, out, [&](std::ostream& os) {
        os << "x,Jx,id_minus_J,residual\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            os << num(grid[i]) << ',' << num(Jx[i]) << ',' << num(grid[i] - Jx[i]) << ','
               << num(std::abs(Jphi[i] - J.Phi(Jx[i]))) << '\n';
        }
    });
    return kOk;
}

// -------------------------------------------------------------- verify

int run_verify(const std::string& suite, std::uint64_t seed, std::ostream& out) {
    std::vector<std::string> names;
    if (suite == "all") {
        names = suite_names();
    } else {
        names.push_back(suite);
    }
    bool ok = true;
    for (const auto& n : names) {
        const auto reports = run_suite(n, seed);
        for (const auto& r : reports) out << to_json_line(r) << '\n';
        ok = ok && all_passed(reports);
    }
    return ok ? kOk : kReportFailure;
}

// ------------------------------------------------------------ section5

struct Section5Args {
    double h = 1e-3;
    double alpha = -0.5;
    double x0 = -1.0;
    std::size_t N = 3000;
    double perturb = 0.0;
    std::string out;
    std::string summary;
};

int run_section5(const Section5Args& a, std::ostream& out, std::ostream& err) {
    if (!(a.h > 0.0)) throw InvalidArgument("--h must be positive");
    if (!(std::abs(a.alpha * a.h) < 0.5)) throw InvalidArgument("|alpha h| < 1/2 required");
    if (!(a.x0 <= 0.0)) throw InvalidArgument("--x0 must be <= 0");
    const AlignmentPair al = compute_alignment(a.h, a.alpha);
    const OrbitDiff d = orbit_closeness_experiment(a.h, a.x0, a.alpha, a.N, a.perturb);
    emit(a.out, out, [&](std::ostream& os) {
        os << "n,delta\n";
        for (std::size_t n = 0; n < d.values.size(); ++n) os << n << ',' << num(d.values[n]) << '\n';
    });
    json j;
    j["sup"] = d.sup;
    j["argmax"] = d.argmax;
    j["rho"] = al.rho;
    j["alpha_tilde"] = al.alpha_tilde;
    j["rho_minus_one"] = al.rho_minus_one;
    j["alpha_tilde_minus_alpha"] = al.alpha_tilde_minus_alpha;
    j["series_residuals"] = {{"alpha_tilde", al.series.alpha_tilde},
                             {"rho", al.series.rho},
                             {"bound", al.series.bound}};
    j["h"] = a.h;
    j["alpha"] = a.alpha;
    j["x0"] = a.x0;
    j["N"] = a.N;
    j["perturb"] = a.perturb;
    const std::string line = j.dump() + "\n";
    if (!a.summary.empty()) {
        emit(a.summary, out, [&](std::ostream& os) { os << line; });
    } else if (!a.out.empty()) {
        out << line;
    } else {
        err << line;
    }
    return kOk;
}

// --------------------------------------------------------------- sweep

int run_sweep(const std::string& config, const std::string& path, std::ostream& out, std::ostream& err) {
    std::ifstream in(config);
    if (!in) throw InvalidArgument("cannot read config '" + config + "'");
    const SweepConfig cfg = parse_sweep_config(in);
    const SweepResult r = h_sweep(cfg);
    emit(path, out, [&](std::ostream& os) {
        os << "h,alpha,sup,slope_so_far\n";
        for (const auto& row : r.rows) {
            os << num(row.h) << ',' << num(row.alpha) << ',' << (row.error.empty() ? num(row.sup) : "nan") << ','
               << (row.slope_so_far ? num(*row.slope_so_far) : "") << '\n';
        }
    });
    for (const auto& row : r.rows) {
        if (!row.error.empty()) err << "cell h=" << num(row.h) << " alpha=" << num(row.alpha) << " failed: " << row.error << '\n';
    }
    if (r.degenerate) {
        out << "degenerate: every sup <= 1e-12, no fit\n";
    }
    for (const auto& [alpha, fit] : r.fits) {
        out << "alpha=" << num(alpha) << " slope=" << num(fit.slope) << " intercept=" << num(fit.intercept)
            << " r2=" << num(fit.r2) << '\n';
    }
    return kOk;
}

// ------------------------------------------------------------ portrait

std::pair<double, double> parse_start(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw InvalidArgument("--start expects x,y but got '" + s + "'");
    try {
        std::size_t used = 0;
        const double x = std::stod(s.substr(0, comma), &used);
        if (used != comma) throw std::invalid_argument(s);
        const std::string rest = s.substr(comma + 1);
        const double y = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(s);
        return {x, y};
    } catch (const std::logic_error&) {
        throw InvalidArgument("--start expects x,y but got '" + s + "'");
    }
}

int run_portrait(double h, double alpha, std::size_t N, const std::vector<std::string>& starts,
                 const std::string& path, std::ostream& out) {
    if (!(h > 0.0)) throw InvalidArgument("--h must be positive");
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : starts) pts.push_back(parse_start(s));
    if (pts.empty()) pts = {{-0.5, 0.5}, {-1.5, 0.5}, {0.5, 0.5}, {-0.5, -0.5}, {0.0, 0.0}};
    const auto rows = portrait_orbits(h, alpha, pts, N);
    emit(path, out, [&](std::ostream& os) {
        os << "orbit,n,x,y\n";
        for (const auto& r : rows) os << r.orbit << ',' << r.n << ',' << num(r.x) << ',' << num(r.y) << '\n';
    });
    return kOk;
}

}  // namespace

int parse_and_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Conjugacies between time-h maps and one-step discretizations near TC and PF points", "bifconj"};
    // --h is the step size, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.set_version_flag("--version", "bifconj 0.1.0");

    std::function<int()> action;

    BranchesArgs br;
    auto* s_br = app.add_subcommand("branches", "Trace fixed-point branches of a catalog map (CSV)");
    s_br->add_option("--map", br.map, "Catalog map name")->required();
    s_br->add_option("--p", br.p, "Order used by the example maps")->capture_default_str();
    s_br->add_option("--h", br.h, "Step size")->capture_default_str();
    s_br->add_option("--alpha-min", br.alpha_min)->capture_default_str();
    s_br->add_option("--alpha-max", br.alpha_max)->capture_default_str();
    s_br->add_option("--n-alpha", br.n_alpha)->capture_default_str();
    s_br->add_option("--x-min", br.x_min)->capture_default_str();
    s_br->add_option("--x-max", br.x_max)->capture_default_str();
    s_br->add_option("--out", br.out, "Output file (default stdout)");
    s_br->callback([&] { action = [&] { return run_branches(br, out); }; });

    ClassifyArgs cl;
    auto* s_cl = app.add_subcommand("classify", "Classify the bifurcation of a catalog map at (0, 0) (JSON)");
    s_cl->add_option("--map", cl.map, "Catalog map name")->required();
    s_cl->add_option("--p", cl.p)->capture_default_str();
    s_cl->add_option("--h", cl.h)->capture_default_str();
    s_cl->add_option("--tol", cl.tol, "Zero tolerance for the derivative conditions")->capture_default_str();
    s_cl->callback([&] { action = [&] { return run_classify(cl, out); }; });

    ConjugacyArgs cj;
    auto* s_cj = app.add_subcommand("conjugacy", "Build J between two normal forms and tabulate it (CSV)");
    s_cj->add_option("--kind", cj.kind, "tc or pf")->required();
    s_cj->add_option("--h", cj.h)->required();
    s_cj->add_option("--alpha", cj.alpha)->required();
    s_cj->add_option("--p", cj.p)->capture_default_str();
    s_cj->add_option("--tail", cj.tail, "Tail of N_phi: zero, sin, hp_power or hp_power:<p>")->capture_default_str();
    s_cj->add_option("--tail-Phi", cj.tail_Phi, "Tail of N_Phi")->capture_default_str();
    s_cj->add_option("--region", cj.region, "inner or outer")->capture_default_str();
    s_cj->add_option("--half", cj.half, "lower (x <= 0) or upper (x > 0)")->capture_default_str();
    s_cj->add_option("--grid", cj.grid)->capture_default_str();
    s_cj->add_option("--out", cj.out, "Output file (default stdout)");
    s_cj->callback([&] { action = [&] { return run_conjugacy(cj, out, err); }; });

    std::string suite;
    std::uint64_t seed = 0;
    auto* s_v = app.add_subcommand("verify", "Run an invariant suite and print one JSON report per line");
    s_v->add_option("--suite", suite, "Suite name or 'all'")->required();
    s_v->add_option("--seed", seed)->capture_default_str();
    s_v->callback([&] { action = [&] { return run_verify(suite, seed, out); }; });

    Section5Args s5;
    auto* s_5 = app.add_subcommand("section5", "Orbit difference of the exact flow and RK4 for x' = alpha x + x^2");
    s_5->add_option("--h", s5.h)->capture_default_str();
    s_5->add_option("--alpha", s5.alpha)->capture_default_str();
    s_5->add_option("--x0", s5.x0)->capture_default_str();
    s_5->add_option("--N", s5.N)->capture_default_str();
    s_5->add_option("--perturb", s5.perturb, "Offset added to alpha_tilde")->capture_default_str();
    s_5->add_option("--out", s5.out, "CSV file (default stdout)");
    s_5->add_option("--summary", s5.summary, "JSON summary file");
    s_5->callback([&] { action = [&] { return run_section5(s5, out, err); }; });

    std::string config, sweep_out = "sweep.csv";
    auto* s_sw = app.add_subcommand("sweep", "Measure sup|id - J| over an (h, alpha) grid and fit the order");
    s_sw->add_option("--config", config, "key=value config file")->required();
    s_sw->add_option("--out", sweep_out)->capture_default_str();
    s_sw->callback([&] { action = [&] { return run_sweep(config, sweep_out, out, err); }; });

    double ph = 0.01, palpha = 1.0;
    std::size_t pN = 600;
    std::vector<std::string> starts;
    std::string pout;
    auto* s_p = app.add_subcommand("portrait", "Orbits of the exact 2-D model flow (CSV)");
    s_p->add_option("--h", ph)->capture_default_str();
    s_p->add_option("--alpha", palpha)->capture_default_str();
    s_p->add_option("--N", pN)->capture_default_str();
    s_p->add_option("--start", starts, "Initial point x,y (repeatable)");
    s_p->add_option("--out", pout, "Output file (default stdout)");
    s_p->callback([&] { action = [&] { return run_portrait(ph, palpha, pN, starts, pout, out); }; });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kInputError;
    }

    try {
        return action ? action() : kInputError;
    } catch (const BoundViolation& e) {
        err << "error: constraint violated: " << e.constraint() << '\n' << "  " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kReportFailure;
    }
}

}  // namespace bifconj::cli

#include "bifconj/catalog.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "bifconj/estimates.hpp"
#include "bifconj/rk.hpp"

namespace bifconj {

namespace {

double ipow(double b, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

const DomainBox kCatalogBox{0.2, 1.0, 1.0};

}  // namespace

std::vector<std::string> catalog_names() {
    return {"example21", "example25", "example26", "example27", "wiggins-counterexample",
            "tc-phi",    "pf-phi",    "section5-phi", "section5-rk4"};
}

ParamMap catalog_map(std::string_view name, int p) {
    if (p < 0) throw InvalidArgument("catalog maps need p >= 0");
    ParamMap m;
    m.name = std::string(name);
    m.box = kCatalogBox;
    if (name == "example21") {
        m.eval = [p](double h, double x, double a) {
            return ipow(h, 2 * p + 1) + (1.0 + h * a) * x + h * x * x;
        };
    } else if (name == "example25") {
        m.eval = [p](double h, double x, double a) {
            return ipow(h, 3 * p + 1) + (1.0 + h * a) * x + h * x * x * x;
        };
    } else if (name == "example26") {
        m.eval = [p](double h, double x, double a) {
            return (1.0 + h * a) * x + ipow(h, p + 1) * x * x + h * x * x * x;
        };
    } else if (name == "example27") {
        m.eval = [p](double h, double x, double a) {
            return (1.0 + h * a - ipow(h, p + 1)) * x + h * a * x * x + h * x * x * x;
        };
    } else if (name == "wiggins-counterexample") {
        m.eval = [](double, double x, double a) { return a * a + (1.0 + a) * x + x * x; };
    } else if (name == "tc-phi") {
        m.eval = [p](double h, double x, double a) {
            return (1.0 + h * a) * x + h * x * x + ipow(h, p + 1) * x * x * x;
        };
        m.monotone = true;
    } else if (name == "pf-phi") {
        m.eval = [p](double h, double x, double a) {
            return (1.0 + h * a) * x - h * x * x * x + ipow(h, p + 1) * x * x * x * x;
        };
        m.monotone = true;
    } else if (name == "section5-phi") {
        m.eval = [](double h, double x, double a) { return tc_model_exact_flow(h, x, a); };
        m.box = {0.1, 0.5, 1.0};
    } else if (name == "section5-rk4") {
        RKMethod rk{ButcherTableau::rk4(), [](double x, double a) { return a * x + x * x; }};
        m.eval = [rk](double h, double x, double a) { return rk_apply(rk, h, x, a); };
        m.box = {0.1, 0.5, 1.0};
    } else {
        std::string known;
        for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
        throw InvalidArgument("unknown map '" + std::string(name) + "' (known: " + known + ")");
    }
    return m;
}

std::string resolve_tail_name(std::string_view tail, int p) {
    if (tail == "hp_power") return "hp_power:" + std::to_string(p);
    return std::string(tail);
}

namespace {

// Building a normal form samples its tail on a 201^3 grid; cache the result.
NormalForm cached_normal_form(NFKind kind, const std::string& tail) {
    static std::mutex m;
    static std::map<std::pair<NFKind, std::string>, NormalForm> cache;
    {
        std::lock_guard lk(m);
        if (auto it = cache.find({kind, tail}); it != cache.end()) return it->second;
    }
    NormalForm nf = kind == NFKind::TC ? make_tc_normal_form(tail_from_name(tail), 1.0)
                                       : make_pf_normal_form(tail_from_name(tail), 1.0);
    std::lock_guard lk(m);
    return cache.emplace(std::make_pair(kind, tail), nf).first->second;
}

}  // namespace

CatalogPair catalog_pair(NFKind kind, int p, std::string_view tail_phi, std::string_view tail_Phi) {
    if (p < 1) throw InvalidArgument("catalog pair needs p >= 1");
    CatalogPair out{cached_normal_form(kind, resolve_tail_name(tail_Phi, p)),
                    cached_normal_form(kind, resolve_tail_name(tail_phi, p)), p, 1.0};
    out.c = empirical_closeness_constant(out.Phi, out.phi, p);
    return out;
}

}  // namespace bifconj

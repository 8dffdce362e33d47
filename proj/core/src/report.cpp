#include "bifconj/report.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace bifconj {

EstimateReport make_report(std::string name, double measured, double bound, double constant_used,
                           ReportContext ctx, std::string detail) {
    EstimateReport r;
    r.name = std::move(name);
    r.measured = measured;
    r.bound = bound;
    r.constant_used = constant_used;
    r.passed = std::isfinite(measured) && within_bound(measured, bound);
    r.context = std::move(ctx);
    r.detail = std::move(detail);
    return r;
}

EstimateReport make_lower_report(std::string name, double measured, double bound,
                                 double constant_used, ReportContext ctx, std::string detail) {
    EstimateReport r = make_report(std::move(name), measured, bound, constant_used, std::move(ctx),
                                   std::move(detail));
    r.passed = std::isfinite(measured) && measured >= bound * (1.0 - kReportRelSlack);
    return r;
}

namespace {
nlohmann::ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}
}  // namespace

std::string to_json_line(const EstimateReport& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["measured"] = number(r.measured);
    j["bound"] = number(r.bound);
    j["margin"] = number(r.bound - r.measured);
    j["constant_used"] = number(r.constant_used);
    j["passed"] = r.passed;
    j["context"] = {{"h", number(r.context.h)},
                    {"alpha", number(r.context.alpha)},
                    {"p", r.context.p},
                    {"kind", r.context.kind},
                    {"region", r.context.region}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    j["seed"] = r.seed;
    return j.dump();
}

bool all_passed(const std::vector<EstimateReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
}

}  // namespace bifconj

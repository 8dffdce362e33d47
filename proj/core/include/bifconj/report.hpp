#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bifconj {

struct ReportContext {
    double h = 0.0;
    double alpha = 0.0;
    int p = 0;
    std::string kind;    // "tc", "pf" or "" when not applicable
    std::string region;  // "inner", "outer", ...
};

// Universal result record: a measured quantity against a bound.
struct EstimateReport {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    double constant_used = 0.0;
    bool passed = false;
    ReportContext context;
    std::string detail;
    std::uint64_t seed = 0;
};

inline constexpr double kReportRelSlack = 1e-9;

inline bool within_bound(double measured, double bound) {
    return measured <= bound * (1.0 + kReportRelSlack);
}

EstimateReport make_report(std::string name, double measured, double bound, double constant_used,
                           ReportContext ctx, std::string detail = {});

// Lower-bound variant: passes when measured >= bound*(1 - 1e-9).
EstimateReport make_lower_report(std::string name, double measured, double bound,
                                 double constant_used, ReportContext ctx, std::string detail = {});

// Single-line JSON with a fixed key order.
std::string to_json_line(const EstimateReport& r);

bool all_passed(const std::vector<EstimateReport>& reports);

}  // namespace bifconj

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bifconj/report.hpp"

namespace bifconj {

std::vector<std::string> suite_names();

// Runs a named invariant suite. Reports come back in a fixed order, so equal
// seeds give identical output. Throws InvalidArgument for unknown names.
std::vector<EstimateReport> run_suite(std::string_view name, std::uint64_t seed);

}  // namespace bifconj

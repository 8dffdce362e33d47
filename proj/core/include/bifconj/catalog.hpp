#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bifconj/maps.hpp"

namespace bifconj {

// Named maps for the command line and the test suites. p is the order used by
// the examples that depend on it.
ParamMap catalog_map(std::string_view name, int p = 1);
std::vector<std::string> catalog_names();

struct CatalogPair {
    NormalForm Phi;
    NormalForm phi;
    int p = 1;
    double c = 1.0;  // closeness constant of the pair
};

// N_Phi with tail_Phi and N_phi with tail_phi, both with K = 1. "hp_power"
// without an exponent means hp_power:p.
CatalogPair catalog_pair(NFKind kind, int p, std::string_view tail_phi = "hp_power",
                         std::string_view tail_Phi = "zero");

std::string resolve_tail_name(std::string_view tail, int p);

}  // namespace bifconj

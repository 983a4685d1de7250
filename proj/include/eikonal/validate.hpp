#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eikonal/io.hpp"
#include "json.hpp"

namespace eikonal {

/// Overrides for the Monte-Carlo parts of a case; 0 keeps the case default.
struct CaseOptions {
    int n = 0;
    int seeds = 0;
    std::uint64_t seed = 1;
};

struct Check {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool pass = false;
};

struct CaseResult {
    std::string name;
    std::vector<Check> checks;
    int n = 0;
    int seeds = 0;
    std::uint64_t seed = 0;
    io::Table data;
    double runtime_ms = 0.0;

    bool pass() const;
    /// Deterministic summary (no timings).
    nlohmann::json to_json() const;
};

/// semicircle, pastur-residual, ginibre-field, ginibre-radial, ginibre-overlap,
/// elliptic, unitary, duality, hciz-zero, bridge-endpoints, determinism.
const std::vector<std::string>& case_names();

/// ConfigError("case") for an unknown name.
CaseResult run_case(const std::string& name, const CaseOptions& options = {});

/// Writes <dir>/<case>.csv and <dir>/<case>.json.
void write_case(const CaseResult& result, const std::string& dir);

}  // namespace eikonal

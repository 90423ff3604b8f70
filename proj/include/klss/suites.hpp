#pragma once

#include "klss/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace klss {

/// Everything a verification run needs; defaults match the module-level
/// tolerances. The effective (post-default) config is embedded in every
/// report and re-running from that block reproduces the results.
struct RunConfig {
    std::vector<std::string> suites; // subset of kls, vectorize, ladder, rotor, rp, criterion
    int d = 1;
    int edge = 4;   // 2N
    int cutoff = 2; // M
    double inertia = 1.0;
    double coupling = 1.0;
    std::int64_t trials = 10000; // randomized matrix suite
    std::int64_t field_trials = 100;     // random perturbation fields (rp)
    std::int64_t curvature_trials = 20;
    int max_dim = 16;
    std::uint64_t seed = 1;
    double integral_tol = 1e-5;
    std::map<std::string, double> tol_overrides;
    std::string out_path;
    std::string format = "json";

    double tol(const std::string& name, double fallback) const {
        auto it = tol_overrides.find(name);
        return it == tol_overrides.end() ? fallback : it->second;
    }
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

struct CheckRecord {
    std::string name;
    std::string inputs_digest;
    nlohmann::json values;
    double slack = 0.0;
    std::string status; // pass | fail | flagged
};

struct SuiteReport {
    int schema_version = 1;
    std::uint64_t master_seed = 0;
    nlohmann::json effective_config;
    nlohmann::json environment;
    std::vector<CheckRecord> checks;
    double elapsed_seconds = 0.0;

    bool all_passed() const;
    std::vector<std::string> failing() const;
    nlohmann::json to_json() const;
    std::string momentum_csv() const; // rotor momentum table, empty if absent
};

/// Executes the selected suites in dependency order. Flagged checks carry
/// diagnostics only and never fail a run.
SuiteReport run_suite(const RunConfig& config);

/// Writes the report per config.out_path/config.format; no-op without a path.
void write_report(const SuiteReport& report, const RunConfig& config);

/// Derived per-check seed: master seed plus a stable index of the check name.
std::uint64_t derived_seed(std::uint64_t master, const std::string& name);

} // namespace klss

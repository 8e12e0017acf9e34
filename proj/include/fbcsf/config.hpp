#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fbcsf/verification.hpp"

namespace fbcsf {

// Raised on malformed experiment configs; `field` is the JSON path of the
// offending entry (e.g. "domain.radius").
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string field_, const std::string& what)
        : std::runtime_error(field_ + ": " + what), field(std::move(field_)) {}
};

struct ExperimentConfig {
    nlohmann::json domain_spec;
    nlohmann::json curve_spec;
    nlohmann::json phi_spec;  // null when absent
    FlowConfig flow;
    std::vector<std::string> checks;
    double barrier_c = 0.005;
    double barrier_eps = 0.05;
    bool barrier_enforce_hypothesis = true;
    int profile_bins = 64;
    std::string output_dir = "out";
    unsigned long seed = 0;
    int svg_every = 0;  // 0 disables SVG frames

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig defaults();
    nlohmann::json to_json() const;
};

ConvexDomain build_domain(const nlohmann::json& spec);
DiscreteCurve build_initial_curve(const nlohmann::json& spec, const ConvexDomain& domain);
std::optional<ComparisonFunction> build_phi(const nlohmann::json& spec);

// Runs the configured experiment and writes snapshots.ndjson, profile CSVs,
// reports and the summary into the output directory. Returns the process
// exit status: 0 when every requested check passes or is inapplicable.
int run_experiment(const ExperimentConfig& config,
                   const std::string& output_dir_override = "");

// Static-curve mode: extended profile + condition record, no flow.
int profile_only(const std::string& curve_file, const nlohmann::json& domain_spec,
                 const nlohmann::json& phi_spec, int bins, const std::string& out_dir);

// Serialisation helpers shared by the CLI and tests.
void write_snapshots_ndjson(const std::filesystem::path& path, const FlowTrace& trace);
void write_profile_csv(const std::filesystem::path& path, const ProfileReport& report);
nlohmann::json report_to_json(const CheckReport& rep);
nlohmann::json minimum_conditions_to_json(const MinimumConditionReport& rep);

}  // namespace fbcsf

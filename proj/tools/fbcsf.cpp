#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "fbcsf/config.hpp"

using namespace fbcsf;
using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("parse error: ") + e.what());
    }
    return j;
}

// --domain / --phi arguments accept inline JSON or @file.
json parse_spec_arg(const std::string& arg) {
    if (arg.empty()) return json();
    if (arg[0] == '@') return load_json_file(arg.substr(1));
    try {
        return json::parse(arg);
    } catch (const json::parse_error& e) {
        throw ConfigError("spec", std::string("parse error: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fbcsf: free-boundary curve shortening flow laboratory"};
    app.require_subcommand(1);

    std::string config_path, output_dir;
    CLI::App* run_cmd = app.add_subcommand("run", "run a configured experiment");
    run_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
    run_cmd->add_option("--output-dir", output_dir, "override the output directory");

    std::string curve_file, domain_arg, phi_arg, prof_out = "out";
    int bins = 64;
    CLI::App* prof_cmd = app.add_subcommand("profile", "extended chord-arc profile of a curve");
    prof_cmd->add_option("curve", curve_file, "curve JSON file with a 'vertices' array")
        ->required();
    prof_cmd->add_option("--domain", domain_arg, "domain spec (inline JSON or @file)")
        ->required();
    prof_cmd->add_option("--phi", phi_arg, "comparison function spec (inline JSON or @file)");
    prof_cmd->add_option("--bins", bins, "number of profile bins");
    prof_cmd->add_option("--out", prof_out, "output directory");

    CLI::App* defaults_cmd = app.add_subcommand("print-defaults", "print the default config");

    std::string validate_path;
    CLI::App* validate_cmd = app.add_subcommand("validate", "lint a config file");
    validate_cmd->add_option("config", validate_path, "experiment config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            ExperimentConfig cfg = ExperimentConfig::from_json(load_json_file(config_path));
            return run_experiment(cfg, output_dir);
        }
        if (prof_cmd->parsed()) {
            return profile_only(curve_file, parse_spec_arg(domain_arg), parse_spec_arg(phi_arg),
                                bins, prof_out);
        }
        if (defaults_cmd->parsed()) {
            std::cout << ExperimentConfig::defaults().to_json().dump(2) << "\n";
            return 0;
        }
        if (validate_cmd->parsed()) {
            json j = load_json_file(validate_path);
            ExperimentConfig cfg = ExperimentConfig::from_json(j);
            build_domain(cfg.domain_spec);
            build_phi(cfg.phi_spec);
            std::cout << "config ok\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error at '" << e.field << "': " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include "fbcsf/config.hpp"

#include <cstdio>
#include <fstream>

#include "fbcsf/initial_curves.hpp"
#include "fbcsf/svg.hpp"

namespace fbcsf {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double require_number(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ConfigError(path + "." + key, "missing or non-numeric field");
    }
    return j[key].get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(key, "must be numeric");
    return j[key].get<double>();
}

}  // namespace

ConvexDomain build_domain(const json& spec) {
    if (!spec.is_object() || !spec.contains("kind")) {
        throw ConfigError("domain.kind", "missing domain kind");
    }
    std::string kind = spec["kind"].get<std::string>();
    if (kind == "half_plane") return ConvexDomain::half_plane();
    if (kind == "disk") return ConvexDomain::disk(require_number(spec, "domain", "radius"));
    if (kind == "ellipse") {
        return ConvexDomain::ellipse(require_number(spec, "domain", "a"),
                                     require_number(spec, "domain", "b"));
    }
    if (kind == "sampled") {
        if (!spec.contains("points") || !spec["points"].is_array()) {
            throw ConfigError("domain.points", "missing sample points");
        }
        std::vector<Vec2> pts;
        for (const auto& p : spec["points"]) pts.push_back({p.at(0), p.at(1)});
        return ConvexDomain::sampled(std::move(pts));
    }
    throw ConfigError("domain.kind", "unknown kind '" + kind + "'");
}

DiscreteCurve build_initial_curve(const json& spec, const ConvexDomain& domain) {
    if (!spec.is_object() || !spec.contains("kind")) {
        throw ConfigError("initial_curve.kind", "missing curve kind");
    }
    std::string kind = spec["kind"].get<std::string>();
    int n = static_cast<int>(number_or(spec, "n", 200));
    if (kind == "vertices") {
        if (!spec.contains("points") || !spec["points"].is_array() || spec["points"].empty()) {
            throw ConfigError("initial_curve.points", "missing or empty vertex list");
        }
        std::vector<Vec2> pts;
        for (const auto& p : spec["points"]) pts.push_back({p.at(0), p.at(1)});
        return make_explicit(domain, std::move(pts));
    }
    if (kind == "chord") {
        return make_chord(domain, require_number(spec, "initial_curve", "s0"),
                          require_number(spec, "initial_curve", "s1"), n);
    }
    if (kind == "boundary_arc") {
        double radius;
        if (spec.contains("radius")) {
            radius = require_number(spec, "initial_curve", "radius");
        } else if (spec.contains("angular_extent") && domain.kind() == DomainKind::disk) {
            // Orthogonal arcs subtending boundary angle 2*sigma have radius
            // R tan(sigma).
            double sigma = 0.5 * require_number(spec, "initial_curve", "angular_extent");
            radius = domain.disk_radius() * std::tan(sigma);
        } else {
            throw ConfigError("initial_curve.radius", "missing arc radius");
        }
        return make_boundary_arc(domain, number_or(spec, "center_s", 0.0), radius, n);
    }
    if (kind == "perturbed_chord") {
        return make_perturbed_chord(domain, require_number(spec, "initial_curve", "s0"),
                                    require_number(spec, "initial_curve", "s1"),
                                    require_number(spec, "initial_curve", "amplitude"),
                                    static_cast<int>(number_or(spec, "frequency", 1)), n,
                                    spec.value("mean_zero", false));
    }
    throw ConfigError("initial_curve.kind", "unknown kind '" + kind + "'");
}

std::optional<ComparisonFunction> build_phi(const json& spec) {
    if (spec.is_null() || (spec.is_object() && spec.empty())) return std::nullopt;
    if (!spec.is_object() || !spec.contains("kind")) {
        throw ConfigError("phi.kind", "missing comparison function kind");
    }
    std::string kind = spec["kind"].get<std::string>();
    if (kind == "barrier") {
        return ComparisonFunction::barrier(require_number(spec, "phi", "c"),
                                           require_number(spec, "phi", "eps"));
    }
    if (kind == "scaled_sine") {
        return ComparisonFunction::scaled_sine(require_number(spec, "phi", "c"),
                                               number_or(spec, "tau", 0.0));
    }
    if (kind == "tabulated") {
        if (!spec.contains("values") || !spec["values"].is_array()) {
            throw ConfigError("phi.values", "missing table");
        }
        return ComparisonFunction::tabulated(spec["values"].get<std::vector<double>>());
    }
    throw ConfigError("phi.kind", "unknown kind '" + kind + "'");
}

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig c;
    c.domain_spec = {{"kind", "disk"}, {"radius", 1.0}};
    c.curve_spec = {{"kind", "perturbed_chord"}, {"s0", kPi}, {"s1", 0.0},
                    {"amplitude", 0.05},         {"frequency", 1}, {"n", 200}};
    c.phi_spec = nullptr;
    c.checks = {"grayson_dichotomy", "monotonicity"};
    return c;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
    ExperimentConfig c = defaults();
    if (!j.contains("domain")) throw ConfigError("domain", "missing required field");
    c.domain_spec = j["domain"];
    if (!j.contains("initial_curve")) throw ConfigError("initial_curve", "missing required field");
    c.curve_spec = j["initial_curve"];
    c.phi_spec = j.value("phi", json());

    if (j.contains("flow")) {
        const json& f = j["flow"];
        c.flow.dt_safety = number_or(f, "dt_safety", c.flow.dt_safety);
        c.flow.remesh_every = static_cast<int>(number_or(f, "remesh_every", c.flow.remesh_every));
        c.flow.target_edge_count =
            static_cast<int>(number_or(f, "target_edge_count", c.flow.target_edge_count));
        c.flow.output_interval = number_or(f, "output_interval", c.flow.output_interval);
        c.flow.tol_orth = number_or(f, "tol_orth", c.flow.tol_orth);
        if (f.contains("stop")) {
            const json& s = f["stop"];
            c.flow.stop.length_below = number_or(s, "length_below", 0.0);
            double ta = number_or(s, "time_at", 0.0);
            c.flow.stop.time_at = ta > 0.0 ? ta : kInf;
            c.flow.stop.max_steps =
                static_cast<long>(number_or(s, "max_steps", c.flow.stop.max_steps));
            c.flow.stop.min_z_negative = s.value("min_z_negative", false);
        }
    }
    if (j.contains("checks")) {
        if (!j["checks"].is_array()) throw ConfigError("checks", "must be an array");
        c.checks = j["checks"].get<std::vector<std::string>>();
    }
    if (j.contains("barrier_check")) {
        const json& b = j["barrier_check"];
        c.barrier_c = number_or(b, "c", c.barrier_c);
        c.barrier_eps = number_or(b, "eps", c.barrier_eps);
        c.barrier_enforce_hypothesis = b.value("enforce_hypothesis", true);
    }
    c.profile_bins = static_cast<int>(number_or(j, "profile_bins", c.profile_bins));
    c.output_dir = j.value("output_dir", c.output_dir);
    c.seed = static_cast<unsigned long>(number_or(j, "seed", 0.0));
    c.svg_every = static_cast<int>(number_or(j, "svg_every", 0));
    return c;
}

json ExperimentConfig::to_json() const {
    json f = {{"dt_safety", flow.dt_safety},
              {"remesh_every", flow.remesh_every},
              {"target_edge_count", flow.target_edge_count},
              {"output_interval", flow.output_interval},
              {"tol_orth", flow.tol_orth},
              {"stop",
               {{"length_below", flow.stop.length_below},
                {"time_at", std::isfinite(flow.stop.time_at) ? flow.stop.time_at : 0.0},
                {"max_steps", flow.stop.max_steps},
                {"min_z_negative", flow.stop.min_z_negative}}}};
    return json{{"domain", domain_spec},{"initial_curve", curve_spec},
                {"phi", phi_spec},      {"flow", f},
                {"checks", checks},
                {"barrier_check",
                 {{"c", barrier_c},
                  {"eps", barrier_eps},
                  {"enforce_hypothesis", barrier_enforce_hypothesis}}},
                {"profile_bins", profile_bins},
                {"output_dir", output_dir},
                {"seed", seed},
                {"svg_every", svg_every}};
}

void write_snapshots_ndjson(const std::filesystem::path& path, const FlowTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    for (const Snapshot& s : trace.snapshots) {
        out << "{\"t\":" << fmt(s.t) << ",\"vertices\":[";
        const auto& v = s.curve.vertices();
        for (size_t i = 0; i < v.size(); ++i) {
            out << (i ? "," : "") << "[" << fmt(v[i].x) << "," << fmt(v[i].y) << "]";
        }
        const SnapshotDiagnostics& d = s.diag;
        out << "],\"diagnostics\":{"
            << "\"length\":" << fmt(d.length);
        if (std::isfinite(d.dL_dt_step)) out << ",\"dL_dt_step\":" << fmt(d.dL_dt_step);
        out
            << ",\"int_kappa_sq\":" << fmt(d.int_kappa_sq)
            << ",\"total_curvature_K\":" << fmt(d.total_curvature_K)
            << ",\"boundary_travel\":" << fmt(d.boundary_travel)
            << ",\"max_abs_kappa\":" << fmt(d.max_abs_kappa)
            << ",\"inflection_count\":" << d.inflection_count
            << ",\"curvature_vertex_count\":" << d.curvature_vertex_count;
        if (std::isfinite(d.min_z)) out << ",\"min_z\":" << fmt(d.min_z);
        out << ",\"s_left\":" << fmt(d.s_left) << ",\"s_right\":" << fmt(d.s_right)
            << ",\"orth_left\":" << fmt(d.orth_left) << ",\"orth_right\":" << fmt(d.orth_right)
            << ",\"h_min\":" << fmt(d.h_min) << ",\"h_max\":" << fmt(d.h_max)
            << ",\"min_boundary_distance\":" << fmt(d.min_boundary_distance)
            << ",\"step_index\":" << d.step_index << ",\"remesh_count\":" << d.remesh_count
            << "}}\n";
    }
}

void write_profile_csv(const std::filesystem::path& path, const ProfileReport& report) {
    std::ofstream out(path, std::ios::binary);
    out << "delta,psi,branch\n";
    for (const ProfileBin& bin : report.bins) {
        if (bin.branch == ProfileBranch::empty) continue;
        out << fmt(bin.delta) << "," << fmt(bin.psi) << ","
            << (bin.branch == ProfileBranch::classical ? "classical" : "reflected") << "\n";
    }
}

json report_to_json(const CheckReport& rep) {
    return json{{"check", rep.check},
                {"pass", rep.pass},
                {"applicable", rep.applicable},
                {"hypothesis_held", rep.hypothesis_held},
                {"hypothesis_mode", rep.hypothesis_mode},
                {"residuals", rep.residuals},
                {"tolerances", rep.tolerances},
                {"notes", rep.notes}};
}

json minimum_conditions_to_json(const MinimumConditionReport& rep) {
    const char* outcome = "";
    switch (rep.outcome) {
        case MinimumConditionReport::Outcome::case_a: outcome = "case_a"; break;
        case MinimumConditionReport::Outcome::case_b: outcome = "case_b"; break;
        case MinimumConditionReport::Outcome::inconclusive_min_not_zero:
            outcome = "inconclusive_min_not_zero";
            break;
        case MinimumConditionReport::Outcome::inconclusive_diagonal:
            outcome = "inconclusive_diagonal";
            break;
        case MinimumConditionReport::Outcome::skipped_crossover:
            outcome = "skipped_crossover";
            break;
    }
    json angles = {{"alpha_x", rep.angles.alpha_x}, {"alpha_y", rep.angles.alpha_y},
                   {"beta_x", rep.angles.beta_x},   {"beta_y", rep.angles.beta_y},
                   {"theta_x", rep.angles.theta_x}, {"theta_y", rep.angles.theta_y}};
    return json{{"outcome", outcome},
                {"pass", rep.pass},
                {"h", rep.h},
                {"tol_angle", rep.tol_angle},
                {"tol_ineq", rep.tol_ineq},
                {"angles", angles},
                {"alpha_sum_residual", rep.alpha_sum_residual},
                {"second_variation_a", rep.second_variation_a},
                {"beta_residual", rep.beta_residual},
                {"theta_residual", rep.theta_residual},
                {"sign_condition", rep.sign_condition},
                {"second_variation_b", rep.second_variation_b}};
}

int run_experiment(const ExperimentConfig& config, const std::string& output_dir_override) {
    namespace fs = std::filesystem;
    std::string out_dir = config.output_dir;
    if (!output_dir_override.empty()) out_dir = output_dir_override;
    if (const char* env = std::getenv("FBCSF_OUTPUT_DIR")) out_dir = env;
    fs::create_directories(out_dir);
    fs::path base(out_dir);

    ConvexDomain domain = build_domain(config.domain_spec);
    DiscreteCurve initial = build_initial_curve(config.curve_spec, domain);
    std::optional<ComparisonFunction> phi = build_phi(config.phi_spec);

    FlowTrace trace = run(initial, domain, config.flow, phi ? &*phi : nullptr);
    write_snapshots_ndjson(base / "snapshots.ndjson", trace);

    DoubledCurve dc_initial(trace.snapshots.front().curve, domain);
    ProfileReport prof_initial =
        extended_profile(dc_initial, config.profile_bins, phi ? &*phi : nullptr);
    write_profile_csv(base / "profile_initial.csv", prof_initial);
    DoubledCurve dc_final(trace.snapshots.back().curve, domain);
    ProfileReport prof_final =
        extended_profile(dc_final, config.profile_bins, phi ? &*phi : nullptr);
    write_profile_csv(base / "profile_final.csv", prof_final);

    if (config.svg_every > 0) {
        for (size_t i = 0; i < trace.snapshots.size();
             i += static_cast<size_t>(config.svg_every)) {
            char name[64];
            std::snprintf(name, sizeof(name), "frame_%05zu.svg", i);
            std::vector<Vec2> inset;
            const std::vector<Vec2>* inset_ptr = nullptr;
            if (trace.classification == Classification::extinction_suspected) {
                try {
                    ExtinctionEstimate est = extinction_estimate(trace);
                    if (trace.snapshots[i].t < est.T) {
                        inset = rescale(trace.snapshots[i].curve, domain, est.z, est.T,
                                        trace.snapshots[i].t)
                                    .vertices;
                        inset_ptr = &inset;
                    }
                } catch (const std::exception&) {
                }
            }
            write_svg_frame(base / name, domain, trace.snapshots[i].curve, inset_ptr);
        }
    }

    json summary;
    summary["classification"] = to_string(trace.classification);
    summary["stop_reason"] = trace.stop_reason;
    summary["total_steps"] = trace.total_steps;
    summary["final_time"] = trace.snapshots.back().t;
    summary["final_length"] = trace.snapshots.back().diag.length;
    if (trace.classification == Classification::extinction_suspected) {
        try {
            ExtinctionEstimate est = extinction_estimate(trace);
            summary["T_est"] = est.T;
            summary["z_est"] = {est.z.x, est.z.y};
        } catch (const std::exception& e) {
            summary["extinction_estimate_error"] = e.what();
        }
    }

    bool all_ok = true;
    json checks = json::array();
    for (const std::string& name : config.checks) {
        try {
            if (name == "barrier_preservation") {
                BarrierCheckConfig bc(config.barrier_c, config.barrier_eps,
                                      config.barrier_enforce_hypothesis);
                CheckReport rep = check_barrier_preservation(trace, bc);
                checks.push_back(report_to_json(rep));
                all_ok = all_ok && rep.ok();
            } else if (name == "crude_bound") {
                CheckReport rep = check_crude_bound(trace);
                checks.push_back(report_to_json(rep));
                all_ok = all_ok && rep.ok();
            } else if (name == "grayson_dichotomy") {
                CheckReport rep = check_grayson_dichotomy(trace);
                checks.push_back(report_to_json(rep));
                all_ok = all_ok && rep.ok();
            } else if (name == "boundary_avoidance") {
                CheckReport rep = check_boundary_avoidance(trace);
                checks.push_back(report_to_json(rep));
                all_ok = all_ok && rep.ok();
            } else if (name == "monotonicity") {
                CheckReport rep = check_monotonicity(trace);
                checks.push_back(report_to_json(rep));
                all_ok = all_ok && rep.ok();
            } else if (name == "minimum_conditions") {
                if (!phi) throw ConfigError("checks.minimum_conditions", "needs a phi spec");
                MinimumConditionReport rep =
                    check_minimum_conditions(dc_initial, *phi, prof_initial);
                json j = minimum_conditions_to_json(rep);
                j["check"] = "minimum_conditions";
                checks.push_back(j);
                // Inconclusive outcomes are reports, not failures.
                bool conclusive =
                    rep.outcome == MinimumConditionReport::Outcome::case_a ||
                    rep.outcome == MinimumConditionReport::Outcome::case_b;
                all_ok = all_ok && (!conclusive || rep.pass);
            } else {
                throw ConfigError("checks", "unknown check '" + name + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            json err = {{"check", name}, {"pass", false}, {"applicable", true},
                        {"error", e.what()}};
            checks.push_back(err);
            all_ok = false;
        }
    }
    summary["checks"] = checks;
    summary["exit_status"] = all_ok ? 0 : 1;

    std::ofstream sf(base / "summary.json", std::ios::binary);
    sf << summary.dump(2) << "\n";
    return all_ok ? 0 : 1;
}

int profile_only(const std::string& curve_file, const json& domain_spec, const json& phi_spec,
                 int bins, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::ifstream in(curve_file);
    if (!in) throw ConfigError("curve", "cannot open '" + curve_file + "'");
    json j;
    in >> j;
    if (!j.contains("vertices") || !j["vertices"].is_array() || j["vertices"].empty()) {
        throw ConfigError("curve.vertices", "missing or empty vertex list");
    }
    ConvexDomain domain = build_domain(domain_spec);
    std::vector<Vec2> pts;
    for (const auto& p : j["vertices"]) pts.push_back({p.at(0), p.at(1)});
    DiscreteCurve curve = make_explicit(domain, std::move(pts));
    std::optional<ComparisonFunction> phi = build_phi(phi_spec);

    fs::create_directories(out_dir);
    fs::path base(out_dir);
    DoubledCurve dc(curve, domain);
    ProfileReport rep = extended_profile(dc, bins, phi ? &*phi : nullptr);
    write_profile_csv(base / "profile.csv", rep);

    json out;
    out["doubled_length"] = rep.doubled_length;
    if (rep.has_z) {
        out["min_z"] = rep.min_z;
        out["argmin"] = {{"i", rep.argmin_a.i},
                         {"sign_i", rep.argmin_a.sign},
                         {"j", rep.argmin_b.i},
                         {"sign_j", rep.argmin_b.sign},
                         {"l", rep.argmin_l},
                         {"d", rep.argmin_d},
                         {"branch", rep.argmin_branch == ProfileBranch::reflected
                                        ? "reflected"
                                        : "classical"}};
        MinimumConditionReport mc = check_minimum_conditions(dc, *phi, rep);
        out["minimum_conditions"] = minimum_conditions_to_json(mc);
    }
    std::ofstream of(base / "profile_report.json", std::ios::binary);
    of << out.dump(2) << "\n";
    return 0;
}

}  // namespace fbcsf

#include "helegraph/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace helegraph {

namespace {

template <typename T>
T field_or(const nlohmann::json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(key, e.what());
    }
}

void require_positive(double v, const std::string& field) {
    if (!(v > 0.0)) throw ConfigError(field, "must be positive");
}

} // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.nx = field_or<int>(g, "nx", c.nx);
        c.ny = field_or<int>(g, "ny", c.ny);
        c.period = field_or<double>(g, "period", c.period);
    }
    if (c.nx < 8 || c.nx % 2 != 0) throw ConfigError("grid.nx", "must be even and >= 8");
    if (c.ny < 0) throw ConfigError("grid.ny", "must be >= 0");
    require_positive(c.period, "grid.period");

    if (j.contains("class_k")) {
        const auto& k = j.at("class_k");
        c.class_k.delta = field_or<double>(k, "delta", c.class_k.delta);
        c.class_k.strip_height = field_or<double>(k, "L", c.class_k.strip_height);
        c.class_k.lip_bound = field_or<double>(k, "m", c.class_k.lip_bound);
        if (k.contains("modulus")) {
            const auto& mod = k.at("modulus");
            const std::string kind = field_or<std::string>(mod, "kind", "holder");
            if (kind == "holder")
                c.class_k.modulus = DiniModulus::holder(field_or<double>(mod, "beta", 0.5));
            else if (kind == "log")
                c.class_k.modulus = DiniModulus::log();
            else
                throw ConfigError("class_k.modulus.kind", "must be holder or log");
        }
    }
    try {
        c.class_k.validate();
    } catch (const std::exception& e) {
        throw ConfigError("class_k", e.what());
    }

    if (j.contains("law")) {
        const auto& l = j.at("law");
        c.law_kind = field_or<std::string>(l, "kind", c.law_kind);
        if (c.law_kind != "one_phase" && c.law_kind != "difference")
            throw ConfigError("law.kind", "must be one_phase or difference");
        if (l.contains("A2")) {
            const auto& a = l.at("A2");
            if (!a.is_array() || a.size() != 2 || !a[0].is_array() || a[0].size() != 2)
                throw ConfigError("law.A2", "must be a 2x2 matrix");
            c.A2.a11 = a[0][0].get<double>();
            c.A2.a12 = a[0][1].get<double>();
            c.A2.a22 = a[1][1].get<double>();
            if (std::abs(a[1][0].get<double>() - c.A2.a12) > 1e-14)
                throw ConfigError("law.A2", "must be symmetric");
            if (!c.A2.is_spd()) throw ConfigError("law.A2", "must be SPD");
        }
    }

    if (j.contains("time")) {
        const auto& t = j.at("time");
        c.T = field_or<double>(t, "T", c.T);
        c.cfl = field_or<double>(t, "cfl", c.cfl);
        c.dt_max = field_or<double>(t, "dt_max", c.dt_max);
        c.cadence = field_or<double>(t, "cadence", c.cadence);
    }
    require_positive(c.T, "time.T");
    if (!(c.cfl > 0.0) || c.cfl > 1.0) throw ConfigError("time.cfl", "must lie in (0, 1]");
    require_positive(c.dt_max, "time.dt_max");
    require_positive(c.cadence, "time.cadence");

    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        c.solver_tol = field_or<double>(t, "solver", c.solver_tol);
        c.probe_eps = field_or<double>(t, "probe_eps", c.probe_eps);
        c.probe_defect_tol = field_or<double>(t, "probe_defect", c.probe_defect_tol);
    }
    require_positive(c.solver_tol, "tolerances.solver");
    require_positive(c.probe_eps, "tolerances.probe_eps");
    require_positive(c.probe_defect_tol, "tolerances.probe_defect");

    if (j.contains("probes")) {
        const auto& p = j.at("probes");
        c.xi_list = field_or<std::vector<double>>(p, "xi", c.xi_list);
        c.R0 = field_or<double>(p, "R0", c.R0);
    }
    if (c.R0 < 0.0) throw ConfigError("probes.R0", "must be >= 0");

    if (j.contains("initial")) {
        const auto& ini = j.at("initial");
        c.initial = field_or<std::string>(ini, "kind", c.initial);
        c.initial_value = field_or<double>(ini, "value", c.initial_value);
        c.perturb_amplitude = field_or<double>(ini, "amplitude", c.perturb_amplitude);
        c.perturb_mode = field_or<int>(ini, "mode", c.perturb_mode);
        if (c.initial != "flat" && c.initial != "cosine" && c.initial != "rough_dini")
            throw ConfigError("initial.kind", "must be flat, cosine or rough_dini");
    }

    c.output_dir = field_or<std::string>(j, "output_dir", c.output_dir);
    c.seed = field_or<std::uint64_t>(j, "seed", c.seed);
    c.threads = field_or<int>(j, "threads", c.threads);
    if (c.threads < 1) throw ConfigError("threads", "must be >= 1");
    c.gradient_backend = field_or<std::string>(j, "gradient_backend", c.gradient_backend);
    if (c.gradient_backend != "spectral" && c.gradient_backend != "centered")
        throw ConfigError("gradient_backend", "must be spectral or centered");
    c.solver_method = field_or<std::string>(j, "solver_method", c.solver_method);
    if (c.solver_method != "automatic" && c.solver_method != "direct" &&
        c.solver_method != "krylov" && c.solver_method != "fourier")
        throw ConfigError("solver_method", "must be automatic, direct, krylov or fourier");
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", std::string("parse error: ") + e.what());
    }
    return from_json(j);
}

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["grid"] = {{"nx", nx}, {"ny", ny}, {"period", period}};
    nlohmann::ordered_json mod;
    if (class_k.modulus.kind == DiniModulus::Kind::holder)
        mod = {{"kind", "holder"}, {"beta", class_k.modulus.beta}};
    else
        mod = {{"kind", "log"}};
    j["class_k"] = {{"delta", class_k.delta},
                    {"L", class_k.strip_height},
                    {"m", class_k.lip_bound},
                    {"modulus", mod}};
    j["law"] = {{"kind", law_kind},
                {"A2", {{A2.a11, A2.a12}, {A2.a12, A2.a22}}}};
    j["time"] = {{"T", T}, {"cfl", cfl}, {"dt_max", dt_max}, {"cadence", cadence}};
    j["tolerances"] = {{"solver", solver_tol},
                       {"probe_eps", probe_eps},
                       {"probe_defect", probe_defect_tol}};
    j["probes"] = {{"xi", xi_list}, {"R0", R0}};
    j["initial"] = {{"kind", initial},
                    {"value", initial_value},
                    {"amplitude", perturb_amplitude},
                    {"mode", perturb_mode}};
    j["output_dir"] = output_dir;
    j["seed"] = seed;
    j["threads"] = threads;
    j["gradient_backend"] = gradient_backend;
    j["solver_method"] = solver_method;
    return j;
}

BoundaryLaw RunConfig::law() const {
    if (law_kind == "one_phase") return BoundaryLaw::one_phase();
    return BoundaryLaw::difference(A2);
}

GraphInterface RunConfig::initial_interface() const {
    std::vector<double> s(nx);
    const double w0 = 2.0 * M_PI / period;
    for (int j = 0; j < nx; ++j) {
        const double x = j * period / nx;
        if (initial == "flat") {
            s[j] = initial_value;
        } else if (initial == "cosine") {
            s[j] = initial_value + perturb_amplitude * std::cos(perturb_mode * w0 * x);
        } else {
            // Gradient with a barely-Dini (log) modulus at x = pi.
            const double u = std::abs(std::remainder(x - M_PI, period));
            const double q = u > 0.0 ? u / std::log(std::exp(1.0) + 1.0 / u) : 0.0;
            s[j] = initial_value + perturb_amplitude * q * std::cos(w0 * (x - M_PI));
        }
    }
    return make_interface(std::move(s), period, class_k.strip_height);
}

DtnOptions RunConfig::dtn_options() const {
    DtnOptions o;
    o.class_k = class_k;
    o.enforce_class_k = true;
    o.ny = effective_ny();
    o.solver.tol = solver_tol;
    o.solver.method = solver_method == "direct"    ? SolveOptions::Method::direct
                      : solver_method == "krylov"  ? SolveOptions::Method::krylov
                      : solver_method == "fourier" ? SolveOptions::Method::fourier
                                                   : SolveOptions::Method::automatic;
    o.gradient = gradient_backend == "centered" ? GradientBackend::centered
                                                : GradientBackend::spectral;
    return o;
}

EvolveOptions RunConfig::evolve_options() const {
    EvolveOptions o;
    o.cfl = cfl;
    o.dt_max = dt_max;
    o.dtn = dtn_options();
    return o;
}

double RunConfig::effective_R0() const {
    if (R0 > 0.0) return R0;
    return std::min(period / 4.0, class_k.delta);
}

std::string config_hash(const RunConfig& cfg) {
    const std::string dump = cfg.to_json().dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string resolve_output_dir(const RunConfig& cfg) {
    if (const char* env = std::getenv("HELEGRAPH_OUT"); env && *env) return env;
    return cfg.output_dir;
}

void ensure_directory(const std::string& path) {
    std::filesystem::create_directories(path);
}

void save_snapshot(const Snapshot& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_snapshot: cannot open " + path);
    out << "{\n";
    out << "  \"version\": \"" << s.version << "\",\n";
    out << "  \"t\": " << format_g17(s.t) << ",\n";
    out << "  \"period\": " << format_g17(s.period) << ",\n";
    out << "  \"strip_height\": " << format_g17(s.strip_height) << ",\n";
    out << "  \"diagnostics\": {\n";
    out << "    \"min_f\": " << format_g17(s.diagnostics.min_f) << ",\n";
    out << "    \"max_f\": " << format_g17(s.diagnostics.max_f) << ",\n";
    out << "    \"lip\": " << format_g17(s.diagnostics.lip) << ",\n";
    out << "    \"class_k_member\": " << (s.diagnostics.class_k_member ? "true" : "false")
        << ",\n";
    out << "    \"holder_grad\": [";
    for (size_t i = 0; i < s.diagnostics.holder_grad.size(); ++i)
        out << (i ? ", " : "") << format_g17(s.diagnostics.holder_grad[i]);
    out << "]\n  },\n";
    out << "  \"samples\": [";
    for (size_t i = 0; i < s.samples.size(); ++i)
        out << (i ? ", " : "") << format_g17(s.samples[i]);
    out << "]\n}\n";
    if (!out) throw std::runtime_error("save_snapshot: write failure on " + path);
}

Snapshot load_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_snapshot: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("load_snapshot: malformed file: ") + e.what());
    }
    Snapshot s;
    if (!j.contains("version") || !j.at("version").is_string())
        throw std::runtime_error("load_snapshot: missing version tag");
    s.version = j.at("version").get<std::string>();
    if (s.version != kSnapshotVersion)
        throw std::runtime_error("load_snapshot: version mismatch, expected " +
                                 std::string(kSnapshotVersion) + ", found " + s.version);
    s.t = j.at("t").get<double>();
    s.period = j.at("period").get<double>();
    s.strip_height = j.at("strip_height").get<double>();
    s.samples = j.at("samples").get<std::vector<double>>();
    const auto& d = j.at("diagnostics");
    s.diagnostics.t = s.t;
    s.diagnostics.min_f = d.at("min_f").get<double>();
    s.diagnostics.max_f = d.at("max_f").get<double>();
    s.diagnostics.lip = d.at("lip").get<double>();
    s.diagnostics.class_k_member = d.at("class_k_member").get<bool>();
    s.diagnostics.holder_grad = d.at("holder_grad").get<std::vector<double>>();
    return s;
}

nlohmann::ordered_json report_json(const Report& r, const std::string& cfg_hash) {
    nlohmann::ordered_json j;
    j["tool_version"] = kToolVersion;
    j["config_hash"] = cfg_hash;
    j["test"] = r.test;
    j["params"] = r.params;
    j["measured"] = r.measured;
    j["tolerances"] = r.tolerances;
    j["pass"] = r.pass;
    return j;
}

void write_report(const Report& r, const std::string& cfg_hash, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_report: cannot open " + path);
    out << report_json(r, cfg_hash).dump(2) << "\n";
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_g17(row[i]);
        out << "\n";
    }
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& series) {
    std::string header = "t,min_f,max_f,lip";
    const size_t ng = series.empty() ? 0 : series.front().holder_grad.size();
    for (size_t g = 0; g < ng; ++g) header += ",holder_g" + std::to_string(g + 1);
    std::vector<std::vector<double>> rows;
    for (const auto& rec : series) {
        std::vector<double> row{rec.t, rec.min_f, rec.max_f, rec.lip};
        row.insert(row.end(), rec.holder_grad.begin(), rec.holder_grad.end());
        rows.push_back(std::move(row));
    }
    write_csv(path, header, rows);
}

void write_solution_csv(const std::string& path, const BulkSolution& u) {
    const TransformedProblem& p = *u.problem;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_solution_csv: cannot open " + path);
    out << "# " << p.nx << " " << p.ny << " " << (p.phase == Phase::plus ? "plus" : "minus")
        << "\n";
    for (int j = 0; j <= p.ny; ++j) {
        for (int i = 0; i < p.nx; ++i) out << (i ? "," : "") << format_g17(u.value(i, j));
        out << "\n";
    }
}

} // namespace helegraph

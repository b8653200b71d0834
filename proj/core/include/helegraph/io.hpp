#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "helegraph/dtn.hpp"
#include "helegraph/evolution.hpp"
#include "helegraph/interface.hpp"

namespace helegraph {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSnapshotVersion = "helegraph-snapshot-v1";

// Configuration errors name the offending field; the CLI maps them to exit 2.
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string f, const std::string& what)
        : std::runtime_error("config field '" + f + "': " + what), field(std::move(f)) {}
};

struct RunConfig {
    // grid
    int nx = 128;
    int ny = 0;  // 0: same as nx
    double period = 2.0 * M_PI;
    // class K
    ClassKParams class_k{};
    // boundary law
    std::string law_kind = "one_phase";  // one_phase | difference
    SpdMatrix2 A2 = SpdMatrix2::identity();
    // time stepping
    double T = 0.5;
    double cfl = 0.5;
    double dt_max = 1e-2;
    double cadence = 0.05;
    // tolerances
    double solver_tol = 1e-10;
    double probe_eps = 1e-3;
    double probe_defect_tol = 0.05;
    // probes
    std::vector<double> xi_list{1.0, 2.0, 4.0};
    double R0 = 0.0;  // 0: default min(P/4, delta)
    // initial data: flat | cosine (value + amp*cos(mode x)) | rough_dini
    std::string initial = "flat";
    double initial_value = 1.0;
    double perturb_amplitude = 0.0;
    int perturb_mode = 1;
    // misc
    std::string output_dir = "out";
    std::uint64_t seed = 7;
    int threads = 1;
    std::string gradient_backend = "spectral";  // spectral | centered
    std::string solver_method = "automatic";    // automatic | direct | krylov

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
    nlohmann::ordered_json to_json() const;

    BoundaryLaw law() const;
    GraphInterface initial_interface() const;
    DtnOptions dtn_options() const;
    EvolveOptions evolve_options() const;
    int effective_ny() const { return ny == 0 ? nx : ny; }
    double effective_R0() const;
};

// FNV-1a 64 over the canonical JSON dump; hex string.
std::string config_hash(const RunConfig& cfg);

// Output directory: HELEGRAPH_OUT env var overrides the config value.
std::string resolve_output_dir(const RunConfig& cfg);
void ensure_directory(const std::string& path);

struct Snapshot {
    std::string version = kSnapshotVersion;
    double t = 0.0;
    double period = 0.0;
    double strip_height = 0.0;
    std::vector<double> samples;
    DiagnosticsRecord diagnostics;
};

// Lossless round trip: binary64 values rendered with 17 significant digits.
void save_snapshot(const Snapshot& s, const std::string& path);
Snapshot load_snapshot(const std::string& path);

struct Report {
    std::string test;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    nlohmann::ordered_json measured = nlohmann::ordered_json::object();
    nlohmann::ordered_json tolerances = nlohmann::ordered_json::object();
    bool pass = false;
};

nlohmann::ordered_json report_json(const Report& r, const std::string& cfg_hash);
void write_report(const Report& r, const std::string& cfg_hash, const std::string& path);

// CSV with a fixed header line; floats rendered with %.17g.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

// Diagnostics series with header t,min_f,max_f,lip,holder_g1,...
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& series);

// Row-major bulk solution dump with the documented `# Nx Ny phase` header.
void write_solution_csv(const std::string& path, const BulkSolution& u);

std::string format_g17(double v);

} // namespace helegraph

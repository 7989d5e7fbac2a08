// run.hpp — Declarative run configuration and pipeline execution
//
// A run is one JSON document naming a network (inline or preset), a mode,
// an initial state, and grid/ensemble parameters. Executing a run writes a
// manifest plus mode-specific result files into the output directory;
// identical configs (and seeds) produce byte-identical payloads apart from
// the manifest's wall-time field.

#pragma once

#include "dephnet/network.hpp"
#include "dephnet/record.hpp"
#include "dephnet/states.hpp"
#include "dephnet/trajectory.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dephnet {

// Exit-code mapping for the CLI: ConfigError (jsonio.hpp) -> 2,
// NumericalError -> 3, IoError -> 4.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RunMode {
    single_master,
    two_master,
    trajectories,
    steady_state,
    dephasing_sweep,
    compare,
};

struct InitialStateSpec {
    enum class Form { site, kind, matrix, profile } form{Form::site};
    int site{0};  // 0-based internally; 1-based in documents
    InitialStateKind kind{InitialStateKind::separable_boson};
    int site_a{0};
    int site_b{1};
    Eigen::MatrixXcd matrix;   // explicit two-particle density (N^2 x N^2)
    Eigen::MatrixXcd profile;  // explicit pure pair profile (N x N)
};

struct RunConfig {
    NetworkSpec network;
    std::string network_preset;  // empty when the network was inline
    RunMode mode{RunMode::single_master};
    InitialStateSpec initial;
    double z_max{12.0};
    int z_points{121};
    std::uint64_t ensemble_size{1};
    std::uint64_t seed{0};
    NoiseMode noise_mode{NoiseMode::piecewise_constant};
    double wiener_step{1e-3};
    ExchangeStatistics statistics{ExchangeStatistics::boson};
    MatrixOrder steady_order{MatrixOrder::two};
    std::vector<double> sweep_factors;
    double reference_z{20.0};
    std::string output_dir{"."};
    bool write_json{true};
    bool write_csv{true};
    unsigned threads{0};  // scheduling hint only; never affects values
};

// Preset lookup ("paper-trimer-classical" | "paper-trimer-quantum").
NetworkSpec preset_network(const std::string& name);
std::vector<std::string> preset_names();

// Parse/serialize the config document. Parsing rejects unknown keys and
// missing mode-specific fields with ConfigError.
RunConfig parse_run_config_text(const std::string& text);
std::string run_config_to_json_text(const RunConfig& config);

struct RunOutcome {
    std::vector<std::string> files;  // paths written, manifest first
};

RunOutcome execute_run(const RunConfig& config);

// Uniform grid 0..z_max with z_points entries (helper shared with tests).
std::vector<double> uniform_grid(double z_max, int z_points);

}  // namespace dephnet

#include "dephnet/run.hpp"

#include "dephnet/analysis.hpp"
#include "dephnet/jsonio.hpp"
#include "dephnet/master.hpp"
#include "json_emit.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dephnet {

using nlohmann::json;
using nlohmann::ordered_json;

NetworkSpec network_from_json_internal(const json& j);           // jsonio.cpp
ordered_json network_to_json_internal(const NetworkSpec& spec);  // jsonio.cpp

namespace {

constexpr double kAsymptoteZ = 1e5;  // effectively z -> infinity for any gamma > 0

// ------------------------------ name tables ------------------------------

const std::pair<RunMode, const char*> kModeNames[] = {
    {RunMode::single_master, "single_master"},
    {RunMode::two_master, "two_master"},
    {RunMode::trajectories, "trajectories"},
    {RunMode::steady_state, "steady_state"},
    {RunMode::dephasing_sweep, "dephasing_sweep"},
    {RunMode::compare, "compare"},
};

const std::pair<InitialStateKind, const char*> kKindNames[] = {
    {InitialStateKind::separable_boson, "separable_boson"},
    {InitialStateKind::separable_fermion, "separable_fermion"},
    {InitialStateKind::path_entangled_boson, "path_entangled_boson"},
    {InitialStateKind::classically_correlated, "classically_correlated"},
    {InitialStateKind::incoherent_distinguishable, "incoherent_distinguishable"},
};

template <class Table, class T>
const char* to_name(const Table& table, T value) {
    for (const auto& [v, name] : table) {
        if (v == value) return name;
    }
    throw std::logic_error("unknown enum value");
}

template <class Table, class T>
bool from_name(const Table& table, const std::string& name, T& out) {
    for (const auto& [v, n] : table) {
        if (name == n) {
            out = v;
            return true;
        }
    }
    return false;
}

std::complex<double> complex_from_json(const json& j, const char* what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    if (j.is_object() && j.contains("re") && j.contains("im")) {
        return {j["re"].get<double>(), j["im"].get<double>()};
    }
    throw ConfigError(std::string(what) + ": complex values must be a number, [re, im], or {re, im}");
}

Eigen::MatrixXcd complex_matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw ConfigError(std::string(what) + " must be a nested array");
    }
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    Eigen::MatrixXcd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            throw ConfigError(std::string(what) + " must be rectangular");
        }
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c], what);
    }
    return m;
}

ordered_json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(ordered_json{{"re", m(r, c).real()}, {"im", m(r, c).imag()}});
        }
        rows.push_back(row);
    }
    return rows;
}

// ------------------------------ initial states ------------------------------

InitialStateSpec initial_from_json(const json& j) {
    InitialStateSpec spec;
    if (j.is_number_integer()) {
        spec.form = InitialStateSpec::Form::site;
        spec.site = j.get<int>() - 1;
        return spec;
    }
    if (!j.is_object()) throw ConfigError("initial_state must be a site index or an object");
    if (j.contains("site")) {
        spec.form = InitialStateSpec::Form::site;
        spec.site = j["site"].get<int>() - 1;
        return spec;
    }
    if (j.contains("kind")) {
        spec.form = InitialStateSpec::Form::kind;
        const std::string name = j["kind"].get<std::string>();
        if (!from_name(kKindNames, name, spec.kind)) {
            throw ConfigError("initial_state.kind: unknown kind '" + name + "'");
        }
        if (j.contains("sites")) {
            const auto& s = j["sites"];
            if (!s.is_array() || s.size() != 2) {
                throw ConfigError("initial_state.sites must be a pair [a, b]");
            }
            spec.site_a = s[0].get<int>() - 1;
            spec.site_b = s[1].get<int>() - 1;
        }
        return spec;
    }
    if (j.contains("matrix")) {
        spec.form = InitialStateSpec::Form::matrix;
        spec.matrix = complex_matrix_from_json(j["matrix"], "initial_state.matrix");
        return spec;
    }
    if (j.contains("profile")) {
        spec.form = InitialStateSpec::Form::profile;
        spec.profile = complex_matrix_from_json(j["profile"], "initial_state.profile");
        return spec;
    }
    throw ConfigError("initial_state: expected site, kind, matrix, or profile");
}

ordered_json initial_to_json(const InitialStateSpec& spec) {
    ordered_json j;
    switch (spec.form) {
        case InitialStateSpec::Form::site:
            j["site"] = spec.site + 1;
            break;
        case InitialStateSpec::Form::kind:
            j["kind"] = to_name(kKindNames, spec.kind);
            j["sites"] = {spec.site_a + 1, spec.site_b + 1};
            break;
        case InitialStateSpec::Form::matrix:
            j["matrix"] = complex_matrix_to_json(spec.matrix);
            break;
        case InitialStateSpec::Form::profile:
            j["profile"] = complex_matrix_to_json(spec.profile);
            break;
    }
    return j;
}

}  // namespace

NetworkSpec preset_network(const std::string& name) {
    if (name == "paper-trimer-classical") return paper_trimer(TrimerProfile::classical);
    if (name == "paper-trimer-quantum") return paper_trimer(TrimerProfile::quantum);
    throw ConfigError("unknown network preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    return {"paper-trimer-classical", "paper-trimer-quantum"};
}

std::vector<double> uniform_grid(double z_max, int z_points) {
    if (!(z_max > 0.0)) throw ConfigError("z_max must be positive");
    if (z_points < 2) throw ConfigError("z_points must be >= 2");
    std::vector<double> grid(z_points);
    for (int k = 0; k < z_points; ++k) {
        grid[k] = z_max * static_cast<double>(k) / static_cast<double>(z_points - 1);
    }
    return grid;
}

RunConfig parse_run_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    static const char* known[] = {"network", "mode", "initial_state", "z_max", "z_points",
                                  "ensemble_size", "seed", "noise_mode", "wiener_step",
                                  "statistics", "order", "sweep_factors", "reference_z",
                                  "output_dir", "formats", "threads"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || (it.key() == k);
        if (!ok) throw ConfigError("unknown config key '" + it.key() + "'");
    }

    RunConfig config;

    if (!j.contains("network")) throw ConfigError("config.network missing");
    if (j["network"].is_string()) {
        config.network_preset = j["network"].get<std::string>();
        config.network = preset_network(config.network_preset);
    } else {
        config.network = network_from_json_internal(j["network"]);
    }

    if (!j.contains("mode") || !j["mode"].is_string()) {
        throw ConfigError("config.mode missing or not a string");
    }
    if (!from_name(kModeNames, j["mode"].get<std::string>(), config.mode)) {
        throw ConfigError("unknown mode '" + j["mode"].get<std::string>() + "'");
    }

    const bool needs_grid = config.mode != RunMode::steady_state;
    if (needs_grid) {
        if (!j.contains("z_max")) throw ConfigError("config.z_max required for this mode");
        config.z_max = j["z_max"].get<double>();
        if (!j.contains("z_points")) throw ConfigError("config.z_points required for this mode");
        config.z_points = j["z_points"].get<int>();
        if (config.z_points < 2) throw ConfigError("z_points must be >= 2");
        if (!(config.z_max > 0.0)) throw ConfigError("z_max must be positive");
    }

    const bool needs_initial = config.mode != RunMode::steady_state;
    if (needs_initial) {
        if (!j.contains("initial_state")) {
            throw ConfigError("config.initial_state required for this mode");
        }
        config.initial = initial_from_json(j["initial_state"]);
    } else if (j.contains("initial_state")) {
        config.initial = initial_from_json(j["initial_state"]);
    }

    if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("ensemble_size")) config.ensemble_size = j["ensemble_size"].get<std::uint64_t>();
    if (config.mode == RunMode::trajectories || config.mode == RunMode::compare) {
        if (config.ensemble_size < 1) throw ConfigError("ensemble_size must be >= 1");
    }

    if (j.contains("noise_mode")) {
        const std::string m = j["noise_mode"].get<std::string>();
        if (m == "piecewise_constant") {
            config.noise_mode = NoiseMode::piecewise_constant;
        } else if (m == "wiener") {
            config.noise_mode = NoiseMode::wiener;
        } else {
            throw ConfigError("noise_mode must be piecewise_constant or wiener");
        }
    }
    if (j.contains("wiener_step")) {
        config.wiener_step = j["wiener_step"].get<double>();
        if (!(config.wiener_step > 0.0)) throw ConfigError("wiener_step must be positive");
    }

    if (j.contains("statistics")) {
        const std::string s = j["statistics"].get<std::string>();
        if (s == "boson") {
            config.statistics = ExchangeStatistics::boson;
        } else if (s == "fermion") {
            config.statistics = ExchangeStatistics::fermion;
        } else if (s == "distinguishable") {
            config.statistics = ExchangeStatistics::distinguishable;
        } else {
            throw ConfigError("statistics must be boson, fermion, or distinguishable");
        }
    }
    if (j.contains("order")) {
        const std::string o = j["order"].get<std::string>();
        if (o == "single") {
            config.steady_order = MatrixOrder::single;
        } else if (o == "two") {
            config.steady_order = MatrixOrder::two;
        } else {
            throw ConfigError("order must be single or two");
        }
    }

    if (config.mode == RunMode::dephasing_sweep) {
        if (!j.contains("sweep_factors") || !j["sweep_factors"].is_array() ||
            j["sweep_factors"].empty()) {
            throw ConfigError("dephasing_sweep requires a non-empty sweep_factors array");
        }
        for (const auto& f : j["sweep_factors"]) {
            const double v = f.get<double>();
            if (!(v > 0.0)) throw ConfigError("sweep_factors entries must be positive");
            config.sweep_factors.push_back(v);
        }
        if (j.contains("reference_z")) config.reference_z = j["reference_z"].get<double>();
        if (!(config.reference_z > 0.0)) throw ConfigError("reference_z must be positive");
    } else if (j.contains("sweep_factors")) {
        throw ConfigError("sweep_factors is only valid in dephasing_sweep mode");
    }

    if (j.contains("output_dir")) config.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("threads")) config.threads = j["threads"].get<unsigned>();

    if (j.contains("formats")) {
        config.write_json = false;
        config.write_csv = false;
        const auto apply = [&](const std::string& f) {
            if (f == "json") {
                config.write_json = true;
            } else if (f == "csv") {
                config.write_csv = true;
            } else if (f == "both") {
                config.write_json = config.write_csv = true;
            } else {
                throw ConfigError("formats entries must be json, csv, or both");
            }
        };
        if (j["formats"].is_string()) {
            apply(j["formats"].get<std::string>());
        } else if (j["formats"].is_array()) {
            for (const auto& f : j["formats"]) apply(f.get<std::string>());
        } else {
            throw ConfigError("formats must be a string or array");
        }
        if (!config.write_json && !config.write_csv) {
            throw ConfigError("formats selected no outputs");
        }
    }
    return config;
}

std::string run_config_to_json_text(const RunConfig& config) {
    ordered_json j;
    if (!config.network_preset.empty()) {
        j["network"] = config.network_preset;
    } else {
        j["network"] = network_to_json_internal(config.network);
    }
    j["mode"] = to_name(kModeNames, config.mode);
    if (config.mode != RunMode::steady_state) {
        j["initial_state"] = initial_to_json(config.initial);
        j["z_max"] = config.z_max;
        j["z_points"] = config.z_points;
    }
    if (config.mode == RunMode::trajectories || config.mode == RunMode::compare) {
        j["ensemble_size"] = config.ensemble_size;
        j["noise_mode"] = config.noise_mode == NoiseMode::wiener ? "wiener" : "piecewise_constant";
        if (config.noise_mode == NoiseMode::wiener) j["wiener_step"] = config.wiener_step;
    }
    j["seed"] = config.seed;
    const char* stats = config.statistics == ExchangeStatistics::boson
                            ? "boson"
                            : (config.statistics == ExchangeStatistics::fermion
                                   ? "fermion"
                                   : "distinguishable");
    j["statistics"] = stats;
    if (config.mode == RunMode::steady_state) {
        j["order"] = config.steady_order == MatrixOrder::single ? "single" : "two";
    }
    if (config.mode == RunMode::dephasing_sweep) {
        j["sweep_factors"] = config.sweep_factors;
        j["reference_z"] = config.reference_z;
    }
    j["output_dir"] = config.output_dir;
    ordered_json fmts = ordered_json::array();
    if (config.write_json) fmts.push_back("json");
    if (config.write_csv) fmts.push_back("csv");
    j["formats"] = fmts;
    return emit_json(j);
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

namespace {

struct OutputWriter {
    std::filesystem::path dir;
    std::vector<std::string> files;

    explicit OutputWriter(const std::string& output_dir) : dir(output_dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory '" + output_dir + "': " + ec.message());
    }

    void write(const std::string& name, const std::string& payload) {
        const auto path = dir / name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
        os << payload;
        if (!os) throw IoError("write failed for '" + path.string() + "'");
        files.push_back(path.string());
    }
};

// Two-particle initial density matrix from the config.
Eigen::MatrixXcd initial_two_density(const RunConfig& config) {
    const int n = config.network.num_sites;
    const auto& init = config.initial;
    switch (init.form) {
        case InitialStateSpec::Form::kind:
            return make_initial(init.kind, n, init.site_a, init.site_b);
        case InitialStateSpec::Form::matrix: {
            if (init.matrix.rows() != n * n || init.matrix.cols() != n * n) {
                throw ConfigError("initial_state.matrix must be N^2 x N^2");
            }
            const double tr = init.matrix.trace().real();
            if (std::abs(tr - 1.0) > 1e-8) throw ConfigError("initial_state.matrix must have unit trace");
            return init.matrix;
        }
        case InitialStateSpec::Form::profile: {
            if (init.profile.rows() != n || init.profile.cols() != n) {
                throw ConfigError("initial_state.profile must be N x N");
            }
            const PairStatistics stats = config.statistics == ExchangeStatistics::fermion
                                             ? PairStatistics::fermion
                                             : PairStatistics::boson;
            const Eigen::MatrixXcd psi =
                two_particle_amplitude(Eigen::MatrixXcd::Identity(n, n), init.profile, stats) /
                std::sqrt(symmetrized_norm2(init.profile, stats));
            Eigen::VectorXcd flat(n * n);
            for (int p = 0; p < n; ++p) {
                for (int q = 0; q < n; ++q) flat[pair_index(p, q, n)] = psi(p, q);
            }
            return flat * flat.adjoint();
        }
        case InitialStateSpec::Form::site:
            throw ConfigError("this mode requires a two-particle initial state");
    }
    throw ConfigError("unsupported initial state");
}

ExchangeStatistics effective_statistics(const RunConfig& config) {
    if (config.initial.form == InitialStateSpec::Form::kind) {
        return kind_statistics(config.initial.kind);
    }
    return config.statistics;
}

ordered_json manifest_json(const RunConfig& config, const std::vector<std::string>& files,
                           double wall_seconds) {
    ordered_json m;
    m["mode"] = to_name(kModeNames, config.mode);
    m["seed"] = config.seed;
    m["library_version"] = DEPHNET_VERSION;
    m["config"] = ordered_json::parse(run_config_to_json_text(config));
    ordered_json fs = ordered_json::array();
    for (const auto& f : files) fs.push_back(std::filesystem::path(f).filename().string());
    m["files"] = fs;
    m["wall_time_seconds"] = wall_seconds;
    return m;
}

void run_single_master(const RunConfig& config, OutputWriter& out) {
    const int n = config.network.num_sites;
    if (config.initial.form != InitialStateSpec::Form::site) {
        throw ConfigError("single_master requires initial_state = {site: n}");
    }
    if (config.initial.site < 0 || config.initial.site >= n) {
        throw ConfigError("initial_state.site out of range");
    }
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(n, n);
    rho0(config.initial.site, config.initial.site) = 1.0;
    const auto grid = uniform_grid(config.z_max, config.z_points);
    const auto record = integrate(build_single_liouvillian(config.network), rho0, grid);
    if (config.write_json) out.write("density.json", record_to_json_text(record));
    if (config.write_csv) {
        std::ostringstream os;
        write_populations_csv(os, record);
        out.write("populations.csv", os.str());
    }
}

void run_two_master(const RunConfig& config, OutputWriter& out) {
    const auto rho0 = initial_two_density(config);
    const auto grid = uniform_grid(config.z_max, config.z_points);
    auto record = integrate(build_two_liouvillian(config.network), rho0, grid);
    record.statistics = effective_statistics(config);
    if (config.write_json) out.write("density.json", record_to_json_text(record));
    if (config.write_csv) {
        std::ostringstream os;
        write_g2_csv(os, record);
        out.write("g2.csv", os.str());
    }
}

void run_trajectories(const RunConfig& config, OutputWriter& out) {
    const int n = config.network.num_sites;
    const auto grid = uniform_grid(config.z_max, config.z_points);
    EnsembleOptions opts;
    opts.trajectories = config.ensemble_size;
    opts.seed = config.seed;
    opts.mode = config.noise_mode;
    opts.wiener_step = config.wiener_step;
    opts.threads = config.threads;

    if (config.initial.form == InitialStateSpec::Form::site) {
        if (config.initial.site < 0 || config.initial.site >= n) {
            throw ConfigError("initial_state.site out of range");
        }
        Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(n);
        psi0[config.initial.site] = 1.0;
        const auto result = run_single_ensemble(config.network, psi0, grid, opts);
        if (config.write_json) {
            out.write("density.json", ensemble_to_json_text(result, MatrixOrder::single, n));
        }
        if (config.write_csv) {
            std::ostringstream os;
            write_populations_csv(os, result);
            out.write("populations.csv", os.str());
        }
        return;
    }

    // Two-particle ensemble: needs a pure profile.
    Eigen::MatrixXcd phi;
    PairStatistics stats = PairStatistics::boson;
    if (config.initial.form == InitialStateSpec::Form::kind) {
        phi = pure_input_profile(config.initial.kind, n, config.initial.site_a,
                                 config.initial.site_b);
        stats = kind_statistics(config.initial.kind) == ExchangeStatistics::fermion
                    ? PairStatistics::fermion
                    : PairStatistics::boson;
    } else if (config.initial.form == InitialStateSpec::Form::profile) {
        if (config.initial.profile.rows() != n || config.initial.profile.cols() != n) {
            throw ConfigError("initial_state.profile must be N x N");
        }
        phi = config.initial.profile;
        stats = config.statistics == ExchangeStatistics::fermion ? PairStatistics::fermion
                                                                 : PairStatistics::boson;
    } else {
        throw ConfigError(
            "trajectories requires a site, a pure state kind, or an explicit profile "
            "(mixed kinds evolve via two_master)");
    }
    const auto result = run_two_ensemble(config.network, phi, stats, grid, opts);
    if (config.write_json) {
        out.write("density.json", ensemble_to_json_text(result.reduced, MatrixOrder::two, n));
    }
    if (config.write_csv) {
        std::ostringstream os;
        write_g2_csv(os, result.reduced, n);
        out.write("g2.csv", os.str());
    }
}

void run_steady_state(const RunConfig& config, OutputWriter& out) {
    const int n = config.network.num_sites;
    if (config.steady_order == MatrixOrder::single) {
        const auto result = steady_state(build_single_liouvillian(config.network));
        out.write("steady_state.json",
                  steady_state_to_json_text(result, MatrixOrder::single, n));
        return;
    }
    SectorFilter sector = SectorFilter::none;
    if (config.statistics == ExchangeStatistics::boson) sector = SectorFilter::boson;
    if (config.statistics == ExchangeStatistics::fermion) sector = SectorFilter::fermion;
    SteadyStateResult result;
    try {
        result = steady_state(build_two_liouvillian(config.network), sector);
    } catch (const std::runtime_error& e) {
        throw NumericalError(e.what());
    }
    out.write("steady_state.json", steady_state_to_json_text(result, MatrixOrder::two, n));
}

void run_dephasing_sweep(const RunConfig& config, OutputWriter& out) {
    const auto grid = uniform_grid(config.z_max, config.z_points);
    const bool single = config.initial.form == InitialStateSpec::Form::site;
    Eigen::MatrixXcd rho0;
    if (single) {
        const int n = config.network.num_sites;
        if (config.initial.site < 0 || config.initial.site >= n) {
            throw ConfigError("initial_state.site out of range");
        }
        rho0 = Eigen::MatrixXcd::Zero(n, n);
        rho0(config.initial.site, config.initial.site) = 1.0;
    } else {
        rho0 = initial_two_density(config);
    }

    ordered_json report;
    report["reference_z"] = config.reference_z;
    report["factors"] = config.sweep_factors;
    ordered_json per_factor = ordered_json::array();
    std::vector<Eigen::MatrixXcd> asymptotes;
    std::vector<double> ref_distance;

    for (double factor : config.sweep_factors) {
        const NetworkSpec scaled = scale_dephasing(config.network, factor);
        const Liouvillian liou =
            single ? build_single_liouvillian(scaled) : build_two_liouvillian(scaled);
        MasterIntegrator integrator(liou);
        const auto record = integrator.integrate(rho0, grid);
        const Eigen::MatrixXcd target = integrator.propagate(rho0, kAsymptoteZ);
        asymptotes.push_back(target);

        ordered_json entry;
        entry["factor"] = factor;
        ordered_json dist = ordered_json::array();
        for (std::size_t k = 0; k < record.size(); ++k) {
            dist.push_back((record.rho[k] - target).norm());
        }
        entry["distance_to_steady"] = dist;
        const double at_ref =
            (integrator.propagate(rho0, config.reference_z) - target).norm();
        entry["distance_at_reference"] = at_ref;
        ref_distance.push_back(at_ref);
        per_factor.push_back(entry);
    }
    report["per_factor"] = per_factor;

    // Convergence report: factors ordered by distance at the reference z.
    std::vector<std::size_t> order(config.sweep_factors.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ref_distance[a] < ref_distance[b]; });
    ordered_json ordering = ordered_json::array();
    for (std::size_t i : order) ordering.push_back(config.sweep_factors[i]);
    report["factors_by_closeness_at_reference"] = ordering;

    double spread = 0.0;
    for (std::size_t i = 0; i < asymptotes.size(); ++i) {
        for (std::size_t k = i + 1; k < asymptotes.size(); ++k) {
            spread = std::max(spread, (asymptotes[i] - asymptotes[k]).norm());
        }
    }
    report["max_steady_state_spread"] = spread;
    out.write("sweep_report.json", emit_json(report));
}

void run_compare(const RunConfig& config, OutputWriter& out) {
    const int n = config.network.num_sites;
    const auto grid = uniform_grid(config.z_max, config.z_points);

    // Trajectory route.
    Eigen::MatrixXcd phi;
    PairStatistics stats = PairStatistics::boson;
    if (config.initial.form == InitialStateSpec::Form::kind) {
        phi = pure_input_profile(config.initial.kind, n, config.initial.site_a,
                                 config.initial.site_b);
        stats = kind_statistics(config.initial.kind) == ExchangeStatistics::fermion
                    ? PairStatistics::fermion
                    : PairStatistics::boson;
    } else if (config.initial.form == InitialStateSpec::Form::profile) {
        phi = config.initial.profile;
        stats = config.statistics == ExchangeStatistics::fermion ? PairStatistics::fermion
                                                                 : PairStatistics::boson;
    } else {
        throw ConfigError("compare requires a pure two-particle initial state");
    }
    EnsembleOptions opts;
    opts.trajectories = config.ensemble_size;
    opts.seed = config.seed;
    opts.mode = config.noise_mode;
    opts.wiener_step = config.wiener_step;
    opts.threads = config.threads;
    const auto mc = run_two_ensemble(config.network, phi, stats, grid, opts);

    // Master route from the matching density matrix.
    const auto rho0 = initial_two_density(config);
    const auto record = integrate(build_two_liouvillian(config.network), rho0, grid);

    ordered_json report;
    report["trajectories"] = config.ensemble_size;
    report["seed"] = config.seed;
    report["noise_mode"] =
        config.noise_mode == NoiseMode::wiener ? "wiener" : "piecewise_constant";
    if (config.noise_mode == NoiseMode::wiener) report["wiener_step"] = config.wiener_step;
    report["z"] = ordered_json::array();
    for (double z : grid) report["z"].push_back(z);

    ordered_json sims = ordered_json::array();
    ordered_json ratios = ordered_json::array();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto& mom = mc.reduced.rho[k];
        const auto& exact = record.rho[k];
        double worst = 0.0;
        for (int i = 0; i < n * n; ++i) {
            for (int jj = 0; jj < n * n; ++jj) {
                const double dre = std::abs(mom.mean(i, jj).real() - exact(i, jj).real());
                const double dim = std::abs(mom.mean(i, jj).imag() - exact(i, jj).imag());
                worst = std::max(worst, dre / std::max(mom.se_real(i, jj), 1e-15));
                worst = std::max(worst, dim / std::max(mom.se_imag(i, jj), 1e-15));
            }
        }
        ratios.push_back(worst);
        sims.push_back(similarity(g2_extract(mom.mean), g2_extract(exact)));
    }
    report["similarity"] = sims;
    report["max_se_ratio"] = ratios;
    out.write("compare_report.json", emit_json(report));

    if (config.write_csv) {
        std::ostringstream os1;
        write_g2_csv(os1, mc.reduced, n);
        out.write("g2_trajectories.csv", os1.str());
        std::ostringstream os2;
        write_g2_csv(os2, record);
        out.write("g2_master.csv", os2.str());
    }
}

}  // namespace

RunOutcome execute_run(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    OutputWriter out(config.output_dir);
    switch (config.mode) {
        case RunMode::single_master: run_single_master(config, out); break;
        case RunMode::two_master: run_two_master(config, out); break;
        case RunMode::trajectories: run_trajectories(config, out); break;
        case RunMode::steady_state: run_steady_state(config, out); break;
        case RunMode::dephasing_sweep: run_dephasing_sweep(config, out); break;
        case RunMode::compare: run_compare(config, out); break;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto manifest = manifest_json(config, out.files, wall);
    out.write("manifest.json", emit_json(manifest));

    RunOutcome outcome;
    outcome.files.push_back(out.files.back());  // manifest
    for (std::size_t i = 0; i + 1 < out.files.size(); ++i) outcome.files.push_back(out.files[i]);
    return outcome;
}

}  // namespace dephnet

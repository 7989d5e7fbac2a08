// dephnet CLI: declarative runs of the dephasing-network engines plus the
// executable verification checklist.

#include "dephnet/jsonio.hpp"
#include "dephnet/network.hpp"
#include "dephnet/run.hpp"
#include "dephnet/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

void print_error_json(const std::string& kind, const std::string& message, int code) {
    // Machine-readable failure record on stderr.
    std::cerr << "{\"error\": \"" << kind << "\", \"message\": " << nlohmann::json(message).dump()
              << ", \"exit_code\": " << code << "}\n";
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw dephnet::IoError("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

const char* mode_name(dephnet::RunMode mode) {
    switch (mode) {
        case dephnet::RunMode::single_master: return "single_master";
        case dephnet::RunMode::two_master: return "two_master";
        case dephnet::RunMode::trajectories: return "trajectories";
        case dephnet::RunMode::steady_state: return "steady_state";
        case dephnet::RunMode::dephasing_sweep: return "dephasing_sweep";
        case dephnet::RunMode::compare: return "compare";
    }
    return "?";
}

struct CommonFlags {
    std::string config_path;
    std::string output_dir;
    std::string format;
    std::uint64_t seed{0};
    bool seed_set{false};
    unsigned threads{0};
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Run configuration JSON file")->required();
    cmd->add_option("--output", flags.output_dir, "Output directory (overrides config)");
    cmd->add_option("--seed", flags.seed, "Random seed (overrides config)")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--threads", flags.threads,
                    "Worker thread hint; never affects numerical results");
    cmd->add_option("--format", flags.format, "Output formats: json, csv, or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
}

// expected_mode == nullptr lets the config pick (the generic `run` command).
int run_mode(const CommonFlags& flags, const char* expected_mode) {
    try {
        auto config = dephnet::parse_run_config_text(read_file(flags.config_path));
        if (expected_mode != nullptr && std::string(mode_name(config.mode)) != expected_mode) {
            throw dephnet::ConfigError(std::string("config mode '") + mode_name(config.mode) +
                                       "' does not match the subcommand");
        }
        if (!flags.output_dir.empty()) config.output_dir = flags.output_dir;
        if (flags.seed_set) config.seed = flags.seed;
        if (flags.threads > 0) config.threads = flags.threads;
        if (flags.format == "json") {
            config.write_json = true;
            config.write_csv = false;
        } else if (flags.format == "csv") {
            config.write_json = false;
            config.write_csv = true;
        } else if (flags.format == "both") {
            config.write_json = config.write_csv = true;
        }
        const auto outcome = dephnet::execute_run(config);
        for (const auto& f : outcome.files) std::cout << f << '\n';
        return 0;
    } catch (const dephnet::ConfigError& e) {
        print_error_json("config", e.what(), kExitConfig);
        return kExitConfig;
    } catch (const dephnet::IoError& e) {
        print_error_json("io", e.what(), kExitIo);
        return kExitIo;
    } catch (const std::exception& e) {
        print_error_json("numerical", e.what(), kExitNumerical);
        return kExitNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dephnet: coupled-site networks with white-noise dephasing — stochastic "
                 "trajectories, master equations, and steady-state analysis"};
    app.require_subcommand(1);

    struct ModeCmd {
        const char* name;
        const char* mode;  // nullptr: taken from the config
        const char* help;
        CLI::App* cmd{nullptr};
        std::unique_ptr<CommonFlags> flags;
    };
    ModeCmd mode_cmds[] = {
        {"single-master", "single_master", "Integrate the single-excitation master equation"},
        {"two-master", "two_master", "Integrate the two-particle master equation"},
        {"trajectories", "trajectories", "Monte Carlo stochastic trajectory ensemble"},
        {"steady-state", "steady_state", "Solve for the Liouvillian null-space steady state"},
        {"dephasing-sweep", "dephasing_sweep", "Integrate with scaled dephasing rates"},
        {"compare", "compare", "Trajectory ensemble vs master equation comparison"},
        {"run", nullptr, "Run whichever mode the config file selects"},
    };
    for (auto& mc : mode_cmds) {
        mc.cmd = app.add_subcommand(mc.name, mc.help);
        mc.flags = std::make_unique<CommonFlags>();
        add_common(mc.cmd, *mc.flags);
    }

    auto* dump = app.add_subcommand("dump-preset", "Print an embedded network preset as JSON");
    std::string preset_name;
    dump->add_option("name", preset_name, "Preset name (see --help-presets)")->required();

    auto* verify = app.add_subcommand("verify", "Run the acceptance checklist");
    int criterion = 0;
    unsigned verify_threads = 0;
    verify->add_option("--criterion", criterion, "Run a single criterion (1-11); 0 = all");
    verify->add_option("--threads", verify_threads, "Worker thread hint");

    CLI11_PARSE(app, argc, argv);

    if (dump->parsed()) {
        try {
            std::cout << dephnet::network_to_json_text(dephnet::preset_network(preset_name));
            return 0;
        } catch (const dephnet::ConfigError& e) {
            print_error_json("config", e.what(), kExitConfig);
            return kExitConfig;
        }
    }

    if (verify->parsed()) {
        if (criterion < 0 || criterion > dephnet::criterion_count()) {
            print_error_json("config", "criterion out of range", kExitConfig);
            return kExitConfig;
        }
        const auto results = dephnet::run_acceptance(criterion, verify_threads);
        dephnet::print_acceptance_table(std::cout, results);
        for (const auto& r : results) {
            if (!r.passed) return 1;
        }
        return 0;
    }

    for (auto& mc : mode_cmds) {
        if (mc.cmd->parsed()) return run_mode(*mc.flags, mc.mode);
    }
    return 0;
}

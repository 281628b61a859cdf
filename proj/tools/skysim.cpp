// SPDX-License-Identifier: Apache-2.0
//
// skysim — LTE aerial-UE system simulator.
//
//   skysim run <spec|preset> [--seed S] [--jobs N] [--out DIR]
//   skysim replay <trace.csv> <meascfg.json> [--out FILE]
//   skysim presets list
//   skysim presets write <name|all> [--out DIR]
//
// Exit codes: 0 ok, 2 parse error, 3 validation error, 4 trace contract.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "skysim/campaign.hpp"
#include "skysim/presets.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitTrace = 4;

std::string resolve_out_dir(const std::string& flag_value, const std::string& spec_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("SKYSIM_OUT"); env != nullptr && env[0] != '\0')
        return env;
    if (!spec_value.empty()) return spec_value;
    return "out";
}

int cmd_run(const std::string& spec_arg, const std::string& out_flag, int jobs,
            std::optional<std::uint64_t> seed) {
    skysim::CampaignSpec spec;
    if (skysim::is_preset(spec_arg)) {
        spec = skysim::preset_spec(spec_arg);
    } else {
        spec = skysim::load_spec(spec_arg);
    }

    skysim::RunOptions opts;
    opts.jobs = jobs;
    opts.seed_override = seed;
    const std::string out_dir = resolve_out_dir(out_flag, spec.output_dir);

    const skysim::ArtifactSet files = skysim::run_action(spec, opts);
    skysim::write_artifacts(out_dir, files);
    std::cout << spec.name << ": wrote " << files.size() << " file(s) to " << out_dir
              << "\n";
    return 0;
}

int cmd_replay(const std::string& trace_path, const std::string& meas_path,
               const std::string& out_file) {
    const auto trace = skysim::load_trace(trace_path);
    const auto meas = skysim::load_meas_config(meas_path);
    const auto height = skysim::load_height_config(meas_path);
    const std::string log = skysim::report_log_csv(skysim::replay_trace(trace, meas, height));
    if (out_file.empty() || out_file == "-") {
        std::cout << log;
    } else {
        std::ofstream out(out_file, std::ios::binary);
        if (!out) throw skysim::ConfigError("cannot write report log '" + out_file + "'");
        out << log;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skysim - LTE aerial-UE system simulator"};
    app.require_subcommand(1);

    std::string spec_arg;
    std::string out_flag;
    int jobs = 1;
    std::uint64_t seed_value = 0;

    auto* run = app.add_subcommand("run", "run a campaign spec file or preset");
    run->add_option("spec", spec_arg, "spec/manifest file, or a preset name")->required();
    run->add_option("--out", out_flag, "output directory (also via SKYSIM_OUT)");
    run->add_option("--jobs", jobs, "parallel workers")->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed_value, "master seed override");

    std::string trace_path;
    std::string meas_path;
    std::string report_out;
    auto* replay = app.add_subcommand("replay", "replay a measurement trace");
    replay->add_option("trace", trace_path, "trace CSV file")->required();
    replay->add_option("meascfg", meas_path, "measurement config JSON")->required();
    replay->add_option("--out", report_out, "report log file (default stdout)");

    auto* presets = app.add_subcommand("presets", "list or write built-in presets");
    presets->require_subcommand(1);
    presets->add_subcommand("list", "list preset names");
    std::string preset_name;
    std::string preset_dir = ".";
    auto* presets_write = presets->add_subcommand("write", "write preset spec file(s)");
    presets_write->add_option("name", preset_name, "preset name or 'all'")->required();
    presets_write->add_option("--out", preset_dir, "target directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitParse;
    }

    try {
        if (run->parsed()) {
            std::optional<std::uint64_t> seed;
            if (seed_opt->count() > 0) seed = seed_value;
            return cmd_run(spec_arg, out_flag, jobs, seed);
        }
        if (replay->parsed()) return cmd_replay(trace_path, meas_path, report_out);
        if (presets->parsed()) {
            if (presets->get_subcommand("list")->parsed()) {
                for (const auto& p : skysim::preset_list())
                    std::cout << p.name << "\t" << p.description << "\n";
                return 0;
            }
            if (presets_write->parsed()) {
                std::vector<std::string> names;
                if (preset_name == "all") {
                    for (const auto& p : skysim::preset_list()) names.push_back(p.name);
                } else {
                    names.push_back(preset_name);
                }
                for (const std::string& name : names) {
                    const auto spec = skysim::preset_spec(name);
                    skysim::write_artifacts(
                        preset_dir, {{name + ".json", skysim::spec_to_json(spec)}});
                    std::cout << preset_dir << "/" << name << ".json\n";
                }
                return 0;
            }
        }
    } catch (const skysim::SpecParseError& e) {
        std::cerr << "parse error at line " << e.line << ", column " << e.column << ": "
                  << e.what() << "\n";
        return kExitParse;
    } catch (const skysim::TraceError& e) {
        std::cerr << "trace error: " << e.what() << "\n";
        return kExitTrace;
    } catch (const skysim::ConfigError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

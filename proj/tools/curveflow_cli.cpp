#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "curveflow/runner.hpp"

namespace {

namespace fs = std::filesystem;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::invalid_argument("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path output_root(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("CURVEFLOW_OUT"); env && *env) return env;
    return ".";
}

int report(const curveflow::RunOutcome& outcome) {
    std::printf("dir: %s\n", outcome.dir.string().c_str());
    std::printf("termination: %s\n", curveflow::to_string(outcome.termination));
    if (outcome.handoff) std::printf("handoff_t: %.17g\n", outcome.handoff_t);
    std::printf("T_est: %.17g\nT_max: %.17g\n", outcome.t_est, outcome.t_max);
    std::printf("verdict: %s\n", outcome.verdict.c_str());
    for (const std::string& error : outcome.errors)
        std::fprintf(stderr, "analysis error: %s\n", error.c_str());
    return outcome.termination == curveflow::Termination::step_failure ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Plane curve flow laboratory: evolves closed curves by the normal\n"
                 "velocity sigma1 * k + sigma2 and analyzes the collapse"};
    app.require_subcommand(1);

    std::string config_path, sweep_path, run_dir, out_flag;

    CLI::App* run = app.add_subcommand("run", "Execute one scenario from a JSON config");
    run->add_option("config", config_path, "scenario config file")->required();
    run->add_option("--out", out_flag, "output root (default $CURVEFLOW_OUT or .)");

    CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a JSON config");
    sweep->add_option("config", sweep_path, "sweep config file")->required();
    sweep->add_option("--out", out_flag, "output root (default $CURVEFLOW_OUT or .)");

    CLI::App* analyze =
        app.add_subcommand("analyze", "Recompute analyses and summary.json for a stored run");
    analyze->add_option("dir", run_dir, "run directory")->required();

    CLI::App* plot = app.add_subcommand("plot", "Emit SVG figures for a stored run");
    plot->add_option("dir", run_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) {
            const curveflow::ScenarioConfig config =
                curveflow::parse_config(read_text_file(config_path));
            return report(curveflow::run_scenario(config, output_root(out_flag)));
        }
        if (sweep->parsed()) {
            const curveflow::SweepConfig config =
                curveflow::parse_sweep_config(read_text_file(sweep_path));
            const curveflow::SweepOutcome outcome =
                curveflow::run_sweep(config, output_root(out_flag));
            std::printf("index: %s\ncells: %zu\nfailures: %zu\n",
                        outcome.index_path.string().c_str(), outcome.cells,
                        outcome.failures);
            return outcome.failures == 0 ? 0 : 2;
        }
        if (analyze->parsed()) return report(curveflow::analyze_run(run_dir));
        if (plot->parsed()) {
            curveflow::plot_run(run_dir);
            std::printf("figures written under %s\n", run_dir.c_str());
            return 0;
        }
    } catch (const std::invalid_argument& error) {
        std::fprintf(stderr, "error: %s\n", error.what());
        return 1;
    } catch (const std::exception& error) {
        std::fprintf(stderr, "error: %s\n", error.what());
        return 2;
    }
    return 1;
}

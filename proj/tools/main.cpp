#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"

namespace {

void configure_logging() {
    spdlog::set_default_logger(spdlog::stderr_color_mt("interq"));
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("INTERQ_LOG")) spdlog::set_level(spdlog::level::from_str(level));
}

} // namespace

int main(int argc, char** argv) {
    configure_logging();
    using namespace interq::cli;

    CLI::App app{"Communication-aware scheduling of modular quantum workloads"};
    app.set_config("--config", "", "TOML file with default flag values (flags on the command line win)");
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Simulate one policy on one platform");
    run_cmd->add_option("--platform", run.platform, "Preset name or platform JSON")->required();
    run_cmd->add_option("--workload", run.workload, "Workload JSON or random:N:WMIN:WMAX[:SEED]")->required();
    run_cmd->add_option("--policy", run.policy, "interq | serial-rr")->capture_default_str();
    run_cmd->add_option("--arrivals", run.arrivals, "burst | event-driven")->capture_default_str();
    run_cmd->add_option("--seed", run.seed, "Random seed")->capture_default_str();
    run_cmd->add_option("--weights", run.weights, "alpha,beta,gamma,eta")->delimiter(',')->expected(4);
    run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
    run_cmd->add_flag("--strict", run.strict, "Exit 2 when a job cannot be scheduled");

    CompareOptions cmp;
    auto* cmp_cmd = app.add_subcommand("compare", "Run several configurations and compare against a baseline");
    cmp_cmd->add_option("--platforms", cmp.runs, "Run ids PLATFORM[:policy]")->delimiter(',')->required();
    cmp_cmd->add_option("--workload", cmp.workload, "Workload JSON or random:N:WMIN:WMAX[:SEED]")->required();
    cmp_cmd->add_option("--baseline", cmp.baseline, "Run id used as the baseline")->required();
    cmp_cmd->add_option("--arrivals", cmp.arrivals, "burst | event-driven")->capture_default_str();
    cmp_cmd->add_option("--seed", cmp.seed, "Random seed")->capture_default_str();
    cmp_cmd->add_option("--weights", cmp.weights, "alpha,beta,gamma,eta")->delimiter(',')->expected(4);
    cmp_cmd->add_option("--out", cmp.out, "Output directory")->capture_default_str();

    CharacterizeOptions chr;
    auto* chr_cmd = app.add_subcommand("characterize", "Per-job QComm partition statistics");
    chr_cmd->add_option("--platform", chr.platform, "Preset name or platform JSON")->required();
    chr_cmd->add_option("--workload", chr.workload, "Workload JSON or random:N:WMIN:WMAX[:SEED]")->required();
    chr_cmd->add_option("--out", chr.out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    if (*run_cmd) return cmd_run(run, std::cout, std::cerr);
    if (*cmp_cmd) return cmd_compare(cmp, std::cout, std::cerr);
    return cmd_characterize(chr, std::cout, std::cerr);
}

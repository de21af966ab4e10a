#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "export.hpp"
#include "lgcrit/errors.hpp"

namespace {

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("lgcrit");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("LGCRIT_LOG")) {
        std::string level = env;
        if (level == "error" || level == "warn" || level == "info" || level == "debug")
            spdlog::set_level(spdlog::level::from_str(level));
        else
            spdlog::warn("ignoring LGCRIT_LOG={}", level);
    }
}

int exit_code(lgcrit::ErrorCode code) {
    switch (lgcrit::kind_of(code)) {
    case lgcrit::ErrorKind::Verification: return 1;
    case lgcrit::ErrorKind::Usage: return 2;
    case lgcrit::ErrorKind::Numerical: return 3;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    using namespace lgcrit::cli;

    CLI::App app{"Critical points of toric Landau-Ginzburg potentials and their exceptional collections", "lgcrit"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&cfg](CLI::App* sub) {
        sub->add_option("-m,--model", cfg.model, "ps:s=2 | pb:s=3,a=1,2 | bp:n=4,r=2 | bb:n=5,b=0")->required();
        sub->add_option("-t", cfg.t, "LG parameter (defaults to the family's working value)");
        sub->add_option("--seed", cfg.seed, "multistart seed");
        sub->add_option("--newton-tol", cfg.newtonTol)->check(CLI::PositiveNumber);
        sub->add_option("--dedup-tol", cfg.dedupTol)->check(CLI::PositiveNumber);
        sub->add_option("--snap-eps", cfg.snapEps)->check(CLI::PositiveNumber);
        sub->add_option("--match-ratio", cfg.matchRatio)->check(CLI::Range(0.0, 1.0));
        sub->add_option("--threads", cfg.threads)->check(CLI::Range(1, 256));
        sub->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "dot", "csv", "svg"}));
        sub->add_option("-o,--output", cfg.output, "output file, stdout if omitted");
    };

    std::function<CommandOutput(const RunConfig&)> action;
    auto add = [&](const char* name, const char* help, CommandOutput (*fn)(const RunConfig&)) {
        auto* sub = app.add_subcommand(name, help);
        common(sub);
        sub->callback([&action, fn] { action = fn; });
        return sub;
    };

    add("model", "rays, facets, Pic basis and reference collection", run_model);
    add("solve", "all critical points at t", run_solve)->add_option("--coord", cfg.coord, "coordinate for svg");
    add("emap", "exceptional map at t", run_emap);
    add("verify", "exceptional map bijectivity and strong exceptionality", run_verify);
    add("monodromy", "monodromy permutation of a divisor", run_monodromy)
        ->add_option("--divisor", cfg.divisor, "coefficients in ray order, comma separated")
        ->required();
    add("aligned", "M-aligned check over all pairs", run_aligned)
        ->add_option("--recipe", cfg.recipe, "auto | direct | conjugated")
        ->check(CLI::IsMember({"auto", "direct", "conjugated"}));
    auto* frob = add("frobenius", "Frobenius pushforward classes against the reference collection", run_frobenius);
    frob->add_option("-l", cfg.level, "level")->check(CLI::Range(2, 1 << 20));
    frob->add_option("--mode", cfg.frobeniusMode, "characters | cube")->check(CLI::IsMember({"characters", "cube"}));
    add("quiver", "quiver of the reference collection", run_quiver);
    auto* sweep = add("sweep", "continue the critical points across a t range", run_sweep);
    sweep->add_option("--from", cfg.from)->required();
    sweep->add_option("--to", cfg.to)->required();
    sweep->add_option("--steps", cfg.steps)->required()->check(CLI::PositiveNumber);
    sweep->add_option("--coord", cfg.coord, "coordinate for svg");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        auto out = action(cfg);
        lgcrit::io::write_output(cfg.output, out.text);
        return out.exitCode;
    } catch (const lgcrit::Error& e) {
        spdlog::error("{}", e.what());
        return exit_code(e.code());
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 3;
    }
}

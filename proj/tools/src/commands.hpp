#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace lgcrit::cli {

struct RunConfig {
    std::string model;
    std::optional<double> t;
    double newtonTol = 1e-12;
    double dedupTol = 1e-8;
    double snapEps = 1e-6;
    double matchRatio = 0.1;
    std::uint64_t seed = 0x4C47;
    int threads = 1;
    std::string output;
    std::string format = "json";

    // per command
    std::string divisor;
    std::optional<int> level;
    std::string frobeniusMode = "characters";
    std::string recipe = "auto";
    double from = -30.0;
    double to = 30.0;
    int steps = 60;
    int coord = 0;
};

struct CommandOutput {
    std::string text;
    int exitCode = 0;
};

CommandOutput run_model(const RunConfig& cfg);
CommandOutput run_solve(const RunConfig& cfg);
CommandOutput run_emap(const RunConfig& cfg);
CommandOutput run_verify(const RunConfig& cfg);
CommandOutput run_monodromy(const RunConfig& cfg);
CommandOutput run_aligned(const RunConfig& cfg);
CommandOutput run_frobenius(const RunConfig& cfg);
CommandOutput run_quiver(const RunConfig& cfg);
CommandOutput run_sweep(const RunConfig& cfg);

}  // namespace lgcrit::cli

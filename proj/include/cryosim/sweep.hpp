#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cryosim/stats.hpp"
#include "cryosim/system.hpp"

namespace cryosim {

struct SweepOptions {
    std::vector<std::filesystem::path> traces;
    std::filesystem::path out_dir;
    std::string baseline = "CryoAll";
    // Independent simulations may run concurrently; results merge
    // deterministically by (preset, trace) key.
    int jobs = 1;
    bool resume = false; // skip cells whose stats file already exists
    bool warmup = true;
    std::optional<std::filesystem::path> config_file; // overrides applied on every preset
    std::optional<std::filesystem::path> weights;     // regions csv: trace,weight
};

struct SweepResult {
    std::vector<RunStats> runs;
    std::vector<std::string> failures; // one message per failed cell
};

std::filesystem::path sweep_stats_path(const std::filesystem::path &out_dir,
                                       const std::filesystem::path &trace,
                                       const std::string &preset);

// Runs all six presets over every trace, writes one stats file per cell,
// then emits report.csv and the SVG charts into out_dir.
SweepResult run_sweep(const SweepOptions &options);

struct WeightedRegion {
    std::filesystem::path trace;
    double weight = 0.0;
};

std::vector<WeightedRegion> read_weights_file(const std::filesystem::path &path);

} // namespace cryosim

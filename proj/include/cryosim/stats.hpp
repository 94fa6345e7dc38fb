#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cryosim/kernel.hpp"
#include "cryosim/memsys.hpp"

namespace cryosim {

// Flat counter record of one simulation run; every derived metric is a pure
// function of these fields.
struct RunStats {
    std::string config_id;
    std::string trace_name;
    Tick sim_ticks = 0;
    Tick core_period = 0;
    std::uint64_t core_cycles = 0;
    std::uint64_t committed_instructions = 0;
    std::uint64_t branches = 0;
    std::uint64_t mispredictions = 0;
    std::uint64_t squashed_mem_accesses = 0;
    std::uint64_t max_rob = 0;
    std::uint64_t max_iq = 0;
    std::uint64_t max_lsq = 0;
    LevelCounters l1i, l1d, l2, l3;
    MemCounters mem;

    bool operator==(const RunStats &) const = default;

    double ipc() const {
        return core_cycles == 0 ? 0.0
                                : static_cast<double>(committed_instructions) /
                                      static_cast<double>(core_cycles);
    }
};

// baseline.sim_ticks / test.sim_ticks; both runs must cover the same trace.
double speedup(const RunStats &baseline, const RunStats &test);

// misses per thousand committed instructions.
double mpki(std::uint64_t misses, std::uint64_t instructions);

// bytes / (sim_ticks * 1e-12), i.e. bytes per simulated second.
double bandwidth(std::uint64_t bytes, Tick sim_ticks);

struct RegionWeight {
    double weight = 0.0;
    RunStats stats;
};

struct SimpointAggregate {
    std::string config_id;
    double cpi = 0.0;
    double est_time_ticks = 0.0;
    double l3_mpki = 0.0;
    double l1d_demand_bw = 0.0; // bytes/s
    double l1i_bw = 0.0;
    double l2_bw = 0.0;
    double l3_bw = 0.0;
    double mem_bw = 0.0;
    std::uint64_t total_instructions = 0;
};

// Weighted combination of region statistics: CPI and rate metrics combine as
// sum(w_i * value_i); estimated time is cpi * total_instructions * period.
// Weights must sum to 1 within 1e-9 and regions must share one config.
SimpointAggregate simpoint_combine(const std::vector<RegionWeight> &regions,
                                   std::uint64_t total_instructions);

// One run per file, UTF-8 key=value lines.
void write_stats(const RunStats &stats, const std::filesystem::path &path);
RunStats read_stats(const std::filesystem::path &path);

} // namespace cryosim

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cryosim/core.hpp"
#include "cryosim/memsys.hpp"
#include "cryosim/stats.hpp"
#include "cryosim/trace.hpp"

namespace cryosim {

// Full parameterization of one simulated system: core, cache geometry,
// memory, and the frequency of every clock domain. The board and memory
// domains stay at room-temperature frequencies in all shipped presets.
struct SystemConfig {
    std::string preset_name = "custom";
    CoreConfig core = CoreConfig::out_of_order();
    CacheConfig l1i{32 * 1024, 8, 2};
    CacheConfig l1d{32 * 1024, 8, 2};
    CacheConfig l2{512 * 1024, 8, 8};
    CacheConfig l3{16 * 1024 * 1024, 16, 21};
    MemConfig mem;
    std::uint64_t freq_core = 4'000'000'000;
    std::uint64_t freq_l1 = 4'000'000'000;
    std::uint64_t freq_l2 = 4'000'000'000;
    std::uint64_t freq_l3 = 4'000'000'000;
    std::uint64_t freq_board = 2'000'000'000;
    std::uint64_t freq_mem = 800'000'000;
    int cores = 1;
    // Functional cache pre-touch of the whole trace before the timed run, so
    // short synthetic traces are not dominated by cold misses.
    bool warmup = true;
};

// CryoAll, SuperCryo, SuperAll and their InOrder variants.
const std::vector<std::string> &preset_names();
SystemConfig make_preset(const std::string &name);

// key = value lines with dotted nesting ('#' comments). Sizes accept
// KB/MB/GB suffixes, frequencies GHz/MHz/kHz. A `preset = NAME` line resets
// the base configuration before other keys apply.
void apply_config_file(SystemConfig &config, const std::filesystem::path &path);
void apply_config_line(SystemConfig &config, const std::string &key, const std::string &value);

std::uint64_t parse_size(const std::string &text);
std::uint64_t parse_freq(const std::string &text);

// Runs one trace per core (cores follows config.cores) and returns one stats
// record per core. L3 and memory counters are system-wide on both records.
std::vector<RunStats> run_simulation(const SystemConfig &config,
                                     const std::vector<const Trace *> &traces,
                                     const std::vector<std::string> &trace_names);

// Single-core convenience wrapper.
RunStats run_simulation(const SystemConfig &config, const Trace &trace,
                        const std::string &trace_name);

} // namespace cryosim

#include "cryosim/stats.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace cryosim {

double speedup(const RunStats &baseline, const RunStats &test) {
    if (baseline.committed_instructions != test.committed_instructions)
        throw MismatchedRunsError("speedup: runs committed different instruction counts (" +
                                  std::to_string(baseline.committed_instructions) + " vs " +
                                  std::to_string(test.committed_instructions) + ")");
    if (test.sim_ticks == 0)
        throw InvalidParamError("speedup: test run has zero sim_ticks");
    return static_cast<double>(baseline.sim_ticks) / static_cast<double>(test.sim_ticks);
}

double mpki(std::uint64_t misses, std::uint64_t instructions) {
    if (instructions == 0)
        throw InvalidParamError("mpki: instruction count must be > 0");
    return static_cast<double>(misses) * 1000.0 / static_cast<double>(instructions);
}

double bandwidth(std::uint64_t bytes, Tick sim_ticks) {
    if (sim_ticks == 0)
        throw InvalidParamError("bandwidth: sim_ticks must be > 0");
    return static_cast<double>(bytes) * 1e12 / static_cast<double>(sim_ticks);
}

SimpointAggregate simpoint_combine(const std::vector<RegionWeight> &regions,
                                   std::uint64_t total_instructions) {
    if (regions.empty())
        throw BadWeightsError("simpoint_combine: no regions");
    double sum = 0.0;
    for (const RegionWeight &r : regions)
        sum += r.weight;
    if (std::abs(sum - 1.0) > 1e-9)
        throw BadWeightsError("simpoint_combine: weights sum to " + std::to_string(sum) +
                              ", expected 1");
    const std::string &config = regions.front().stats.config_id;
    const Tick period = regions.front().stats.core_period;
    for (const RegionWeight &r : regions) {
        if (r.stats.config_id != config)
            throw MixedConfigsError("simpoint_combine: regions mix configs '" + config +
                                    "' and '" + r.stats.config_id + "'");
        if (r.stats.committed_instructions == 0)
            throw InvalidParamError("simpoint_combine: region with zero instructions");
    }

    SimpointAggregate agg;
    agg.config_id = config;
    agg.total_instructions = total_instructions;
    for (const RegionWeight &r : regions) {
        const RunStats &s = r.stats;
        agg.cpi += r.weight * static_cast<double>(s.core_cycles) /
                   static_cast<double>(s.committed_instructions);
        agg.l3_mpki += r.weight * mpki(s.l3.misses, s.committed_instructions);
        agg.l1d_demand_bw += r.weight * bandwidth(s.l1d.demand_bytes, s.sim_ticks);
        agg.l1i_bw += r.weight * bandwidth(s.l1i.demand_bytes, s.sim_ticks);
        agg.l2_bw += r.weight * bandwidth(s.l2.demand_bytes, s.sim_ticks);
        agg.l3_bw += r.weight * bandwidth(s.l3.demand_bytes, s.sim_ticks);
        agg.mem_bw += r.weight * bandwidth(s.mem.bytes, s.sim_ticks);
    }
    agg.est_time_ticks = agg.cpi * static_cast<double>(total_instructions) *
                         static_cast<double>(period);
    return agg;
}

namespace {

void put_level(std::map<std::string, std::string> &kv, const std::string &prefix,
               const LevelCounters &c) {
    kv[prefix + ".demand_accesses"] = std::to_string(c.demand_accesses);
    kv[prefix + ".hits"] = std::to_string(c.hits);
    kv[prefix + ".misses"] = std::to_string(c.misses);
    kv[prefix + ".mshr_merges"] = std::to_string(c.mshr_merges);
    kv[prefix + ".demand_bytes"] = std::to_string(c.demand_bytes);
    kv[prefix + ".fill_bytes"] = std::to_string(c.fill_bytes);
}

std::uint64_t need_u64(const std::map<std::string, std::string> &kv, const std::string &key,
                       const std::filesystem::path &path) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw FormatError("'" + path.string() + "': missing key " + key);
    return std::stoull(it->second);
}

LevelCounters get_level(const std::map<std::string, std::string> &kv, const std::string &prefix,
                        const std::filesystem::path &path) {
    LevelCounters c;
    c.demand_accesses = need_u64(kv, prefix + ".demand_accesses", path);
    c.hits = need_u64(kv, prefix + ".hits", path);
    c.misses = need_u64(kv, prefix + ".misses", path);
    c.mshr_merges = need_u64(kv, prefix + ".mshr_merges", path);
    c.demand_bytes = need_u64(kv, prefix + ".demand_bytes", path);
    c.fill_bytes = need_u64(kv, prefix + ".fill_bytes", path);
    return c;
}

} // namespace

void write_stats(const RunStats &s, const std::filesystem::path &path) {
    std::map<std::string, std::string> kv;
    kv["config_id"] = s.config_id;
    kv["trace"] = s.trace_name;
    kv["sim_ticks"] = std::to_string(s.sim_ticks);
    kv["core_period"] = std::to_string(s.core_period);
    kv["core_cycles"] = std::to_string(s.core_cycles);
    kv["committed_instructions"] = std::to_string(s.committed_instructions);
    kv["branches"] = std::to_string(s.branches);
    kv["mispredictions"] = std::to_string(s.mispredictions);
    kv["squashed_mem_accesses"] = std::to_string(s.squashed_mem_accesses);
    kv["max_rob"] = std::to_string(s.max_rob);
    kv["max_iq"] = std::to_string(s.max_iq);
    kv["max_lsq"] = std::to_string(s.max_lsq);
    put_level(kv, "l1i", s.l1i);
    put_level(kv, "l1d", s.l1d);
    put_level(kv, "l2", s.l2);
    put_level(kv, "l3", s.l3);
    kv["mem.reads"] = std::to_string(s.mem.reads);
    kv["mem.writes"] = std::to_string(s.mem.writes);
    kv["mem.bytes"] = std::to_string(s.mem.bytes);

    std::string out;
    for (const auto &[k, v] : kv)
        out += k + "=" + v + "\n";
    std::FILE *f = std::fopen(path.string().c_str(), "wb");
    if (!f)
        throw IoError("cannot open '" + path.string() + "' for writing");
    const std::size_t written = std::fwrite(out.data(), 1, out.size(), f);
    const int rc = std::fclose(f);
    if (written != out.size() || rc != 0)
        throw IoError("short write to '" + path.string() + "'");
}

RunStats read_stats(const std::filesystem::path &path) {
    std::FILE *f = std::fopen(path.string().c_str(), "rb");
    if (!f)
        throw IoError("cannot open '" + path.string() + "' for reading");
    std::string data;
    char buf[1 << 14];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0)
        data.append(buf, got);
    std::fclose(f);

    std::map<std::string, std::string> kv;
    std::istringstream in(data);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            continue;
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }

    RunStats s;
    auto str = [&](const std::string &key) {
        auto it = kv.find(key);
        if (it == kv.end())
            throw FormatError("'" + path.string() + "': missing key " + key);
        return it->second;
    };
    s.config_id = str("config_id");
    s.trace_name = str("trace");
    s.sim_ticks = need_u64(kv, "sim_ticks", path);
    s.core_period = need_u64(kv, "core_period", path);
    s.core_cycles = need_u64(kv, "core_cycles", path);
    s.committed_instructions = need_u64(kv, "committed_instructions", path);
    s.branches = need_u64(kv, "branches", path);
    s.mispredictions = need_u64(kv, "mispredictions", path);
    s.squashed_mem_accesses = need_u64(kv, "squashed_mem_accesses", path);
    s.max_rob = need_u64(kv, "max_rob", path);
    s.max_iq = need_u64(kv, "max_iq", path);
    s.max_lsq = need_u64(kv, "max_lsq", path);
    s.l1i = get_level(kv, "l1i", path);
    s.l1d = get_level(kv, "l1d", path);
    s.l2 = get_level(kv, "l2", path);
    s.l3 = get_level(kv, "l3", path);
    s.mem.reads = need_u64(kv, "mem.reads", path);
    s.mem.writes = need_u64(kv, "mem.writes", path);
    s.mem.bytes = need_u64(kv, "mem.bytes", path);
    return s;
}

} // namespace cryosim

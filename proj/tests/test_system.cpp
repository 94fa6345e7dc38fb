#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cryosim/system.hpp"

using namespace cryosim;
namespace fs = std::filesystem;

TEST_CASE("the six presets exist with the documented domain assignments") {
    CHECK(preset_names().size() == 6);
    for (const std::string &name : preset_names())
        CHECK_NOTHROW(make_preset(name));

    const SystemConfig sc = make_preset("SuperCryo");
    CHECK(sc.core.kind == CoreKind::OutOfOrder);
    CHECK(sc.freq_core == 100'000'000'000ULL);
    CHECK(sc.freq_l1 == 4'000'000'000ULL);
    CHECK(sc.freq_l3 == 4'000'000'000ULL);
    CHECK(sc.freq_board == 2'000'000'000ULL);
    CHECK(sc.freq_mem == 800'000'000ULL);

    const SystemConfig io = make_preset("InOrderSuperAll");
    CHECK(io.core.kind == CoreKind::InOrder);
    CHECK(io.core.width == 1);
    CHECK(io.freq_core == 100'000'000'000ULL);
    CHECK(io.freq_l1 == 100'000'000'000ULL);

    try {
        make_preset("NoSuchPreset");
        FAIL("expected ConfigError");
    } catch (const ConfigError &e) {
        for (const std::string &name : preset_names())
            CHECK(std::string(e.what()).find(name) != std::string::npos);
    }
}

TEST_CASE("preset cache geometry matches the shipped hierarchy") {
    const SystemConfig sc = make_preset("CryoAll");
    CHECK(sc.l1d.size == 32 * 1024);
    CHECK(sc.l1d.associativity == 8);
    CHECK(sc.l1d.data_latency == 2);
    CHECK(sc.l2.size == 512 * 1024);
    CHECK(sc.l2.data_latency == 8);
    CHECK(sc.l3.size == 16 * 1024 * 1024);
    CHECK(sc.l3.associativity == 16);
    CHECK(sc.l3.data_latency == 21);
    CHECK(sc.l3.num_sets() == 16384);
    CHECK(sc.core.rob == 96);
    CHECK(sc.core.iq == 72);
    CHECK(sc.core.lsq == 24);
    CHECK(sc.core.fetch_queue == 24);
    CHECK(sc.core.int_regs == 180);
    CHECK(sc.core.fp_regs == 168);
    CHECK(sc.core.cache_ports == 1);
}

TEST_CASE("config files override preset fields") {
    const fs::path p = fs::temp_directory_path() / "cryosim_test.cfg";
    std::ofstream(p) << "# overrides\n"
                     << "core.width = 2\n"
                     << "l2.latency = 16\n"
                     << "freq.core = 2GHz\n"
                     << "l1d.size = 64KB\n"
                     << "mem.peak_bandwidth = 25.6e9\n"
                     << "warmup = false\n";
    SystemConfig sc = make_preset("CryoAll");
    apply_config_file(sc, p);
    CHECK(sc.core.width == 2);
    CHECK(sc.l2.data_latency == 16);
    CHECK(sc.freq_core == 2'000'000'000ULL);
    CHECK(sc.l1d.size == 64 * 1024);
    CHECK(sc.mem.peak_bandwidth == 25.6e9);
    CHECK_FALSE(sc.warmup);
    fs::remove(p);

    std::ofstream(p) << "no_such_key = 1\n";
    SystemConfig sc2 = make_preset("CryoAll");
    CHECK_THROWS_AS(apply_config_file(sc2, p), ConfigError);
    fs::remove(p);
}

TEST_CASE("size and frequency suffixes") {
    CHECK(parse_size("16KB") == 16 * 1024);
    CHECK(parse_size("64MB") == 64ULL * 1024 * 1024);
    CHECK(parse_size("4096") == 4096);
    CHECK(parse_freq("4GHz") == 4'000'000'000ULL);
    CHECK(parse_freq("800MHz") == 800'000'000ULL);
    CHECK_THROWS_AS(parse_size("sixteen"), ConfigError);
}

TEST_CASE("run_simulation is deterministic") {
    const Trace t = gen_compute_bound(5000, 8192, 0.1, 33);
    const RunStats a = run_simulation(make_preset("CryoAll"), t, "t");
    const RunStats b = run_simulation(make_preset("CryoAll"), t, "t");
    CHECK(a == b);
    CHECK(a.committed_instructions == 5000);
    CHECK(a.sim_ticks > 0);
    CHECK(a.sim_ticks == a.core_cycles * a.core_period);
}

TEST_CASE("memory-bound traces dominate compute-bound traces in L3 MPKI") {
    const Trace compute = gen_compute_bound(20000, 16 * 1024, 0.1, 7);
    const Trace chase = gen_memory_bound(20000, 64ULL * 1024 * 1024, MemPattern::PointerChase, 7);
    const RunStats rc = run_simulation(make_preset("CryoAll"), compute, "compute");
    const RunStats rm = run_simulation(make_preset("CryoAll"), chase, "chase");
    const double mc = mpki(rc.l3.misses, rc.committed_instructions);
    const double mm = mpki(rm.l3.misses, rm.committed_instructions);
    CHECK(mm > 1.0);
    CHECK(mm >= 100.0 * mc); // compute-bound is fully cache-resident after warmup
}

TEST_CASE("raising a level's data latency never speeds up the run") {
    const Trace t = gen_memory_bound(5000, 32 * 1024 * 1024, MemPattern::UniformRandom, 11);
    const RunStats base = run_simulation(make_preset("CryoAll"), t, "t");
    SystemConfig slow_l2 = make_preset("CryoAll");
    slow_l2.l2.data_latency = 16;
    SystemConfig slow_l3 = make_preset("CryoAll");
    slow_l3.l3.data_latency = 42;
    CHECK(run_simulation(slow_l2, t, "t").sim_ticks >= base.sim_ticks);
    CHECK(run_simulation(slow_l3, t, "t").sim_ticks >= base.sim_ticks);
}

TEST_CASE("in-order L3 miss counts are identical across core/cache frequencies") {
    const Trace t = gen_memory_bound(5000, 32 * 1024 * 1024, MemPattern::UniformRandom, 13);
    const RunStats a = run_simulation(make_preset("InOrderCryoAll"), t, "t");
    const RunStats b = run_simulation(make_preset("InOrderSuperCryo"), t, "t");
    const RunStats c = run_simulation(make_preset("InOrderSuperAll"), t, "t");
    CHECK(a.l3.misses == b.l3.misses);
    CHECK(a.l3.misses == c.l3.misses);
    CHECK(a.l1d.misses == b.l1d.misses);
}

TEST_CASE("two cores run disjoint traces against a shared L3") {
    const Trace t0 = gen_compute_bound(3000, 8192, 0.1, 40);
    const Trace t1 = gen_compute_bound(3000, 8192, 0.1, 41);
    SystemConfig sc = make_preset("CryoAll");
    sc.cores = 2;
    const auto stats = run_simulation(sc, {&t0, &t1}, {"a", "b"});
    REQUIRE(stats.size() == 2);
    CHECK(stats[0].committed_instructions == 3000);
    CHECK(stats[1].committed_instructions == 3000);
    CHECK(stats[0].l3 == stats[1].l3); // shared counters
    CHECK(stats[0].l1d.demand_accesses > 0);
    CHECK(stats[1].l1d.demand_accesses > 0);
}

TEST_CASE("warmup eliminates cold misses for cache-resident traces") {
    const Trace t = gen_compute_bound(10000, 16 * 1024, 0.1, 3);
    const RunStats warm = run_simulation(make_preset("CryoAll"), t, "t");
    SystemConfig cold_cfg = make_preset("CryoAll");
    cold_cfg.warmup = false;
    const RunStats cold = run_simulation(cold_cfg, t, "t");
    CHECK(warm.l1d.misses == 0);
    CHECK(warm.l2.misses == 0);
    CHECK(warm.mem.reads == 0);
    CHECK(cold.l1d.misses > 0);
    CHECK(cold.sim_ticks > warm.sim_ticks);
}

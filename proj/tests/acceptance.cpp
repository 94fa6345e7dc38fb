// Acceptance suite: one test case per shipped performance property, each
// printing a PASS/FAIL line. Results across cases share a run cache.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "cryosim/core.hpp"
#include "cryosim/stats.hpp"
#include "cryosim/system.hpp"
#include "cryosim/trace.hpp"

using namespace cryosim;
namespace fs = std::filesystem;

namespace {

bool g_ok = false;

#define ACCEPT(expr)                                                                               \
    do {                                                                                           \
        const bool accept_ok_ = static_cast<bool>(expr);                                           \
        CHECK(accept_ok_);                                                                         \
        g_ok &= accept_ok_;                                                                        \
    } while (0)

void begin_criterion() { g_ok = true; }

void end_criterion(int number, const char *name) {
    std::printf("[%s] criterion %d: %s\n", g_ok ? "PASS" : "FAIL", number, name);
    std::fflush(stdout);
}

struct NamedTrace {
    std::string name;
    Trace trace;
};

// Twenty mixed-generator traces, five per workload class.
const std::vector<NamedTrace> &mixed_traces() {
    static const std::vector<NamedTrace> traces = [] {
        std::vector<NamedTrace> out;
        for (std::uint64_t s = 1; s <= 5; ++s)
            out.push_back({"compute" + std::to_string(s),
                           gen_compute_bound(50000, 16 * 1024, 0.1, s)});
        for (std::uint64_t s = 6; s <= 10; ++s)
            out.push_back({"uniform" + std::to_string(s),
                           gen_memory_bound(50000, 32ULL * 1024 * 1024,
                                            MemPattern::UniformRandom, s)});
        for (std::uint64_t s = 11; s <= 15; ++s)
            out.push_back({"chase" + std::to_string(s),
                           gen_memory_bound(50000, 64ULL * 1024 * 1024,
                                            MemPattern::PointerChase, s)});
        for (std::uint64_t s = 16; s <= 20; ++s)
            out.push_back({"branchy" + std::to_string(s), gen_branchy(50000, 1.0, s)});
        return out;
    }();
    return traces;
}

RunStats cached_run(const std::string &preset, const NamedTrace &t) {
    static std::map<std::string, RunStats> cache;
    const std::string key = preset + "/" + t.name;
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;
    const RunStats s = run_simulation(make_preset(preset), t.trace, t.name);
    cache.emplace(key, s);
    return s;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("criterion 1: frequency ceiling") {
    begin_criterion();
    for (const NamedTrace &t : mixed_traces()) {
        const RunStats cryo = cached_run("CryoAll", t);
        const RunStats super_all = cached_run("SuperAll", t);
        const double s = speedup(cryo, super_all);
        INFO("trace ", t.name, " speedup ", s);
        ACCEPT(s <= 25.0 + 1e-6);
    }
    end_criterion(1, "speedup(SuperAll vs CryoAll) <= 25.0 + 1e-6 on 20 mixed traces");
}

TEST_CASE("criterion 2: compute-bound high end") {
    begin_criterion();
    const NamedTrace t{"compute-high", gen_compute_bound(100000, 16 * 1024, 0.1, 77)};
    const double ooo = speedup(cached_run("CryoAll", t), cached_run("SuperAll", t));
    const double in_order =
        speedup(cached_run("InOrderCryoAll", t), cached_run("InOrderSuperAll", t));
    INFO("ooo ", ooo, " in-order ", in_order);
    ACCEPT(ooo >= 20.0);
    ACCEPT(in_order >= 20.0);
    end_criterion(2, "compute-bound speedup(SuperAll vs CryoAll) >= 20.0 (OoO and in-order)");
}

TEST_CASE("criterion 3: memory-bound saturation") {
    begin_criterion();
    const NamedTrace t{"chase-big",
                       gen_memory_bound(100000, 64ULL * 1024 * 1024, MemPattern::PointerChase, 78)};
    const RunStats cryo = cached_run("CryoAll", t);
    const double s_all = speedup(cryo, cached_run("SuperAll", t));
    const double s_core = speedup(cryo, cached_run("SuperCryo", t));
    INFO("SuperAll ", s_all, " SuperCryo ", s_core);
    ACCEPT(s_all <= 2.5);
    ACCEPT(s_core <= 2.5);
    end_criterion(3, "pointer-chase speedups (SuperAll, SuperCryo) <= 2.5");
}

TEST_CASE("criterion 4: core-only vs core+cache ordering") {
    begin_criterion();
    const NamedTrace t{"compute-high", gen_compute_bound(100000, 16 * 1024, 0.1, 77)};
    const RunStats cryo = cached_run("CryoAll", t);
    const double s_core = speedup(cryo, cached_run("SuperCryo", t));
    const double s_all = speedup(cryo, cached_run("SuperAll", t));
    INFO("SuperCryo ", s_core, " SuperAll ", s_all);
    ACCEPT(s_core < s_all);
    ACCEPT(s_core <= 4.0);
    end_criterion(4, "speedup(SuperCryo) < speedup(SuperAll) and SuperCryo <= 4.0");
}

TEST_CASE("criterion 5: MPKI frequency-invariance") {
    begin_criterion();
    const std::vector<NamedTrace> presets = {
        {"m5-compute", gen_compute_bound(50000, 16 * 1024, 0.1, 31)},
        {"m5-uniform", gen_memory_bound(50000, 32ULL * 1024 * 1024, MemPattern::UniformRandom, 32)},
        {"m5-chase", gen_memory_bound(50000, 64ULL * 1024 * 1024, MemPattern::PointerChase, 33)},
        {"m5-branchy", gen_branchy(50000, 1.0, 34)},
    };
    for (const NamedTrace &t : presets) {
        const std::uint64_t a = cached_run("InOrderCryoAll", t).l3.misses;
        const std::uint64_t b = cached_run("InOrderSuperCryo", t).l3.misses;
        const std::uint64_t c = cached_run("InOrderSuperAll", t).l3.misses;
        INFO("in-order ", t.name, " L3 misses ", a, " ", b, " ", c);
        ACCEPT(a == b);
        ACCEPT(a == c);

        const std::uint64_t x = cached_run("CryoAll", t).l3.misses;
        const std::uint64_t y = cached_run("SuperCryo", t).l3.misses;
        const std::uint64_t z = cached_run("SuperAll", t).l3.misses;
        const double ref = std::max<double>(1.0, static_cast<double>(x));
        INFO("ooo ", t.name, " L3 misses ", x, " ", y, " ", z);
        ACCEPT(std::abs(static_cast<double>(y) - static_cast<double>(x)) / ref <= 0.02);
        ACCEPT(std::abs(static_cast<double>(z) - static_cast<double>(x)) / ref <= 0.02);
    }
    end_criterion(5, "in-order L3 misses bit-identical across presets; OoO within 2%");
}

TEST_CASE("criterion 6: bandwidth ceiling and ordering") {
    begin_criterion();
    // One 8-byte load per instruction over an L1-resident footprint.
    NamedTrace loads{"load-every-cycle", {}};
    for (std::uint32_t k = 0; k < 100000; ++k) {
        TraceInstruction i;
        i.kind = InstrKind::Load;
        i.pc = 0x10000 + 4 * (k % 256);
        i.dest = static_cast<std::uint8_t>(8 + k % 16);
        i.mem_addr = 0x40000000ULL + (k * 8) % (16 * 1024);
        i.mem_size = 8;
        loads.trace.instructions.push_back(i);
    }
    const RunStats r = cached_run("SuperAll", loads);
    const double gbps = bandwidth(r.l1d.demand_bytes, r.sim_ticks) / 1e9;
    INFO("L1D demand bandwidth ", gbps, " GB/s");
    ACCEPT(gbps >= 700.0);
    ACCEPT(gbps <= 800.0);

    for (const NamedTrace &t : mixed_traces()) {
        const double cryo = bandwidth(cached_run("CryoAll", t).l1d.demand_bytes,
                                      cached_run("CryoAll", t).sim_ticks);
        const double super_cryo = bandwidth(cached_run("SuperCryo", t).l1d.demand_bytes,
                                            cached_run("SuperCryo", t).sim_ticks);
        INFO("trace ", t.name, " CryoAll ", cryo, " SuperCryo ", super_cryo);
        ACCEPT(super_cryo >= cryo);
    }
    end_criterion(6, "L1D bandwidth in [700, 800] GB/s at 100 GHz; SuperCryo >= CryoAll everywhere");
}

TEST_CASE("criterion 7: region-weighted estimate matches a full run within 1%") {
    begin_criterion();
    const std::uint64_t n1 = 50000, n2 = 50000;
    const Trace phase_a = gen_compute_bound(n1, 16 * 1024, 0.1, 81);
    const Trace phase_b =
        gen_memory_bound(n2, 64ULL * 1024 * 1024, MemPattern::UniformRandom, 82);
    Trace full = phase_a;
    full.instructions.insert(full.instructions.end(), phase_b.instructions.begin(),
                             phase_b.instructions.end());

    // Cold caches for all three runs so each region behaves as it does
    // inside the concatenated run.
    SystemConfig cfg = make_preset("CryoAll");
    cfg.warmup = false;
    const RunStats ra = run_simulation(cfg, phase_a, "phase-a");
    const RunStats rb = run_simulation(cfg, phase_b, "phase-b");
    const RunStats rf = run_simulation(cfg, full, "full");

    const double w1 = static_cast<double>(n1) / static_cast<double>(n1 + n2);
    const SimpointAggregate agg = simpoint_combine({{w1, ra}, {1.0 - w1, rb}}, n1 + n2);
    const double err = std::abs(agg.est_time_ticks - static_cast<double>(rf.sim_ticks)) /
                       static_cast<double>(rf.sim_ticks);
    INFO("estimate ", agg.est_time_ticks, " actual ", rf.sim_ticks, " err ", err);
    ACCEPT(err <= 0.01);
    end_criterion(7, "two-region weighted estimate within 1% of the full run");
}

TEST_CASE("criterion 8: pipeline microbenchmark oracles") {
    begin_criterion();
    EventQueue q1;
    PerfectMemPort ic, dc;
    const ClockDomain dom = make_domain("core", 4'000'000'000);

    Trace alu100;
    for (int k = 0; k < 100; ++k) {
        TraceInstruction i;
        i.kind = InstrKind::IntAlu;
        i.pc = 0x1000 + 4 * k;
        i.dest = static_cast<std::uint8_t>(5 + k % 8);
        alu100.instructions.push_back(i);
    }
    const CoreResult a = run_core(CoreConfig::in_order(), alu100, ic, dc, dom, q1);
    INFO("in-order 100 IntAlu cycles ", a.counters.cycles);
    ACCEPT(a.counters.cycles == 107);

    Trace divchain;
    for (int k = 0; k < 10; ++k) {
        TraceInstruction i;
        i.kind = InstrKind::IntDiv;
        i.pc = 0x1000 + 4 * k;
        i.dest = static_cast<std::uint8_t>(5 + k % 3);
        i.src1 = k == 0 ? kNoReg : static_cast<std::uint8_t>(5 + (k - 1) % 3);
        divchain.instructions.push_back(i);
    }
    EventQueue q2;
    const CoreResult b = run_core(CoreConfig::in_order(), divchain, ic, dc, dom, q2);
    INFO("div chain cycles ", b.counters.cycles);
    ACCEPT(b.counters.cycles == 67);      // 60 execution + 7 fill
    ACCEPT(b.counters.cycles - 7 == 60);

    Trace alu1000;
    for (int k = 0; k < 1000; ++k) {
        TraceInstruction i;
        i.kind = InstrKind::IntAlu;
        i.pc = 0x1000 + 4 * k;
        i.dest = static_cast<std::uint8_t>(5 + k % 16);
        alu1000.instructions.push_back(i);
    }
    EventQueue q3;
    const CoreResult c = run_core(CoreConfig::out_of_order(), alu1000, ic, dc, dom, q3);
    INFO("ooo 1000 IntAlu cycles ", c.counters.cycles);
    ACCEPT(c.counters.cycles <= 260);
    end_criterion(8, "107-cycle fill, 60-cycle div chain, <= 260-cycle 4-wide burst");
}

TEST_CASE("criterion 9: sweep determinism across runs and parallelism") {
    begin_criterion();
    const char *bin = std::getenv("CRYOSIM_BIN");
    REQUIRE(bin != nullptr);
    const fs::path dir = fs::temp_directory_path() / "cryosim_accept_sweep";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path t1 = dir / "alpha.ctrc", t2 = dir / "beta.ctrc";
    write_trace(gen_compute_bound(20000, 16 * 1024, 0.1, 91), t1);
    write_trace(gen_memory_bound(20000, 32ULL * 1024 * 1024, MemPattern::UniformRandom, 92), t2);

    auto sweep = [&](const std::string &out, const std::string &extra) {
        const std::string cmd = std::string(bin) + " sweep " + t1.string() + " " + t2.string() +
                                " -o " + (dir / out).string() + " " + extra + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    ACCEPT(sweep("s1", "--jobs 1"));
    ACCEPT(sweep("s2", "--jobs 1"));
    ACCEPT(sweep("s8", "--jobs 8"));
    const std::string r1 = slurp(dir / "s1" / "report.csv");
    ACCEPT(!r1.empty());
    ACCEPT(r1 == slurp(dir / "s2" / "report.csv"));
    ACCEPT(r1 == slurp(dir / "s8" / "report.csv"));
    fs::remove_all(dir);
    end_criterion(9, "byte-identical report.csv across reruns and parallelism levels");
}

TEST_CASE("criterion 10: structural limits honored on all acceptance traces") {
    begin_criterion();
    for (const NamedTrace &t : mixed_traces()) {
        for (const char *preset : {"CryoAll", "SuperAll"}) {
            const RunStats r = cached_run(preset, t);
            ACCEPT(r.max_rob <= 96);
            ACCEPT(r.max_iq <= 72);
            ACCEPT(r.max_lsq <= 24);
            // One L1D port: accepted demand accesses cannot outrun the
            // core cycle count when core and L1 share a frequency.
            ACCEPT(r.l1d.demand_accesses <= r.core_cycles + 1);
        }
    }
    end_criterion(10, "ROB <= 96, IQ <= 72, LSQ <= 24, <= 1 L1D access per cycle");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "cryosim/trace.hpp"

using namespace cryosim;
namespace fs = std::filesystem;

namespace {

struct Scan {
    std::uint64_t mem_ops = 0;
    std::uint64_t loads = 0;
    std::uint64_t stores = 0;
    std::uint64_t branches = 0;
    std::uint64_t addr_min = ~0ULL;
    std::uint64_t addr_max = 0;
};

Scan scan(const Trace &t) {
    Scan s;
    for (const TraceInstruction &i : t.instructions) {
        if (i.is_mem()) {
            ++s.mem_ops;
            if (i.kind == InstrKind::Load)
                ++s.loads;
            else
                ++s.stores;
            s.addr_min = std::min(s.addr_min, i.mem_addr);
            s.addr_max = std::max(s.addr_max, i.mem_addr + i.mem_size);
        }
        if (i.is_branch())
            ++s.branches;
    }
    return s;
}

fs::path tmp_file(const char *name) { return fs::temp_directory_path() / name; }

} // namespace

TEST_CASE("compute-bound: exact memory-op count and footprint bound") {
    const Trace t = gen_compute_bound(1000, 4096, 0.1, 7);
    REQUIRE(t.size() == 1000);
    const Scan s = scan(t);
    CHECK(s.mem_ops == 100);
    CHECK(s.addr_max - s.addr_min <= 4096);
    CHECK(s.branches <= 50); // <= 5%
    for (const TraceInstruction &i : t.instructions)
        if (i.is_branch())
            CHECK(i.taken); // fully biased
}

TEST_CASE("compute-bound: degenerate single instruction") {
    const Trace t = gen_compute_bound(1, 64, 0.0, 0);
    REQUIRE(t.size() == 1);
    CHECK(t.instructions[0].kind == InstrKind::IntAlu);
}

TEST_CASE("generators are pure functions of (parameters, seed)") {
    CHECK(gen_compute_bound(500, 8192, 0.2, 42) == gen_compute_bound(500, 8192, 0.2, 42));
    CHECK(gen_memory_bound(500, 32 * 1024 * 1024, MemPattern::UniformRandom, 3) ==
          gen_memory_bound(500, 32 * 1024 * 1024, MemPattern::UniformRandom, 3));
    CHECK(gen_branchy(500, 0.5, 9) == gen_branchy(500, 0.5, 9));
    CHECK_FALSE(gen_compute_bound(500, 8192, 0.2, 42) == gen_compute_bound(500, 8192, 0.2, 43));
}

TEST_CASE("compute-bound parameter validation") {
    CHECK_THROWS_AS(gen_compute_bound(0, 4096, 0.1, 1), InvalidParamError);
    CHECK_THROWS_AS(gen_compute_bound(100, 4096, 0.31, 1), InvalidParamError);
    CHECK_THROWS_AS(gen_compute_bound(100, 4096, -0.1, 1), InvalidParamError);
    CHECK_THROWS_AS(gen_compute_bound(100, 33 * 1024, 0.1, 1), InvalidParamError);
}

TEST_CASE("memory-bound: load share and address span") {
    const Trace t = gen_memory_bound(10000, 64ULL * 1024 * 1024, MemPattern::UniformRandom, 1);
    const Scan s = scan(t);
    CHECK(s.loads >= 5000);
    CHECK(s.addr_max - s.addr_min >= 32ULL * 1024 * 1024);
}

TEST_CASE("memory-bound: pointer-chase serializes loads through registers") {
    const Trace t = gen_memory_bound(4000, 32 * 1024 * 1024, MemPattern::PointerChase, 5);
    std::uint8_t prev_dest = kNoReg;
    bool first = true;
    for (const TraceInstruction &i : t.instructions) {
        if (i.kind != InstrKind::Load)
            continue;
        if (!first)
            CHECK(i.src1 == prev_dest);
        first = false;
        prev_dest = i.dest;
    }
}

TEST_CASE("memory-bound: footprint must defeat the L3") {
    CHECK_THROWS_AS(gen_memory_bound(10000, 1024 * 1024, MemPattern::UniformRandom, 1),
                    InvalidParamError);
    CHECK_THROWS_AS(gen_memory_bound(10000, 16 * 1024 * 1024, MemPattern::UniformRandom, 1),
                    InvalidParamError);
}

TEST_CASE("branchy: predictability 1.0 yields per-pc patterns of period <= 4") {
    const Trace t = gen_branchy(8000, 1.0, 11);
    std::map<std::uint64_t, std::vector<bool>> outcomes;
    for (const TraceInstruction &i : t.instructions)
        if (i.is_branch())
            outcomes[i.pc].push_back(i.taken);
    CHECK(!outcomes.empty());
    for (const auto &[pc, seq] : outcomes) {
        bool periodic = false;
        for (std::size_t period = 1; period <= 4 && !periodic; ++period) {
            periodic = true;
            for (std::size_t k = period; k < seq.size(); ++k)
                if (seq[k] != seq[k - period]) {
                    periodic = false;
                    break;
                }
        }
        CHECK(periodic);
    }
}

TEST_CASE("branchy: predictability 0.5 is a fair coin") {
    const Trace t = gen_branchy(40000, 0.5, 2);
    std::uint64_t taken = 0, total = 0;
    for (const TraceInstruction &i : t.instructions)
        if (i.is_branch()) {
            ++total;
            taken += i.taken;
        }
    CHECK(total >= 9000); // ~25% of n
    const double frac = static_cast<double>(taken) / static_cast<double>(total);
    CHECK(frac > 0.45);
    CHECK(frac < 0.55);
}

TEST_CASE("branchy: n = 0 gives an empty trace") {
    CHECK(gen_branchy(0, 1.0, 1).size() == 0);
    CHECK_THROWS_AS(gen_branchy(10, 1.5, 1), InvalidParamError);
}

TEST_CASE("trace file round-trip is the identity") {
    const fs::path p = tmp_file("cryosim_roundtrip.ctrc");
    for (const Trace &t : {gen_compute_bound(987, 8192, 0.25, 3),
                           gen_memory_bound(500, 32 * 1024 * 1024, MemPattern::PointerChase, 4),
                           gen_branchy(333, 0.75, 5)}) {
        write_trace(t, p);
        CHECK(read_trace(p) == t);
    }
    fs::remove(p);
}

TEST_CASE("same generator written twice produces byte-identical files") {
    const fs::path a = tmp_file("cryosim_a.ctrc");
    const fs::path b = tmp_file("cryosim_b.ctrc");
    write_trace(gen_compute_bound(1000, 4096, 0.1, 7), a);
    write_trace(gen_compute_bound(1000, 4096, 0.1, 7), b);
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    const std::string da((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string db((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(da == db);
    fs::remove(a);
    fs::remove(b);
}

TEST_CASE("bad magic is rejected") {
    const fs::path p = tmp_file("cryosim_badmagic.ctrc");
    std::ofstream(p, std::ios::binary) << "NOPE this is not a trace file";
    CHECK_THROWS_AS(read_trace(p), FormatError);
    fs::remove(p);
}

TEST_CASE("truncated record names the record index") {
    const fs::path p = tmp_file("cryosim_trunc.ctrc");
    write_trace(gen_branchy(10, 1.0, 1), p);
    const auto size = fs::file_size(p);
    fs::resize_file(p, size - 7); // chop into the last record
    try {
        read_trace(p);
        FAIL("expected FormatError");
    } catch (const FormatError &e) {
        CHECK(std::string(e.what()).find("record 9") != std::string::npos);
    }
    fs::remove(p);
}

TEST_CASE("unwritable destination raises IoError") {
    CHECK_THROWS_AS(write_trace(gen_branchy(5, 1.0, 1), "/nonexistent-dir/x.ctrc"), IoError);
    CHECK_THROWS_AS(read_trace("/nonexistent-dir/x.ctrc"), IoError);
}

TEST_CASE("footprint bound holds across generator parameters") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::uint64_t footprint = 1024 << seed;
        const Trace t = gen_compute_bound(2000, footprint, 0.3, seed);
        const Scan s = scan(t);
        if (s.mem_ops > 0)
            CHECK(s.addr_max - s.addr_min <= footprint);
    }
    const std::uint64_t big = 64ULL * 1024 * 1024;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const Trace t = gen_memory_bound(3000, big, MemPattern::UniformRandom, seed);
        const Scan s = scan(t);
        CHECK(s.addr_max - s.addr_min <= big);
    }
}

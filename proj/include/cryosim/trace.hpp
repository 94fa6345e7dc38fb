#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cryosim/errors.hpp"

namespace cryosim {

enum class InstrKind : std::uint8_t {
    IntAlu = 0,
    IntMul = 1,
    IntDiv = 2,
    FloatOp = 3,
    Load = 4,
    Store = 5,
    CondBranch = 6,
    Nop = 7,
};

inline constexpr std::uint8_t kKindCount = 8;
inline constexpr std::uint8_t kNoReg = 0xFF; // "no register" encoding
inline constexpr std::uint8_t kNumArchRegs = 64;
inline constexpr std::uint32_t kInstrBytes = 4;

const char *to_string(InstrKind kind);

struct TraceInstruction {
    InstrKind kind = InstrKind::Nop;
    std::uint64_t pc = 0;
    std::uint8_t dest = kNoReg;
    std::uint8_t src1 = kNoReg;
    std::uint8_t src2 = kNoReg;
    std::uint8_t mem_size = 0;  // bytes, Load/Store only
    bool taken = false;         // CondBranch only
    std::uint64_t mem_addr = 0; // Load/Store only
    std::uint64_t target = 0;   // CondBranch only

    bool is_mem() const { return kind == InstrKind::Load || kind == InstrKind::Store; }
    bool is_branch() const { return kind == InstrKind::CondBranch; }

    bool operator==(const TraceInstruction &) const = default;
};

// An immutable instruction sequence plus the generator provenance that
// produced it. Replaying a generator with identical (name, seed, parameters)
// yields a byte-identical trace.
struct Trace {
    std::vector<TraceInstruction> instructions;
    std::map<std::string, std::string> metadata;

    std::size_t size() const { return instructions.size(); }
    bool operator==(const Trace &) const = default;
};

enum class MemPattern { UniformRandom, PointerChase };

// Mostly independent integer ALU work with short (<= 2) dependency chains,
// a small strided data footprint that fits in L1D, and fully biased taken
// branches. Emulates the compute-bound workload class.
Trace gen_compute_bound(std::uint64_t n, std::uint64_t footprint_bytes, double mem_ratio,
                        std::uint64_t seed);

// At least half loads over a footprint that defeats the L3. PointerChase
// serializes all loads through a register dependency chain; UniformRandom
// draws independent addresses.
Trace gen_memory_bound(std::uint64_t n, std::uint64_t footprint_bytes, MemPattern pattern,
                       std::uint64_t seed);

// ~25% conditional branches. predictability 1.0 gives each branch pc a fixed
// repeating outcome pattern of period <= 4 (fully learnable); 0.5 draws
// i.i.d. fair-coin outcomes. Values below 0.5 behave like 0.5 since an ideal
// history predictor cannot be forced under coin-flip accuracy.
Trace gen_branchy(std::uint64_t n, double predictability, std::uint64_t seed);

// Binary trace file format (little-endian, 32-byte fixed records):
//   magic "CTRC", u16 version = 1, u16 reserved, u64 instruction count,
//   u32 metadata length, metadata bytes (UTF-8 key=value lines), records.
// Round-trips exactly.
void write_trace(const Trace &trace, const std::filesystem::path &path);
Trace read_trace(const std::filesystem::path &path);

} // namespace cryosim

#include "cryosim/trace.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <random>
#include <sstream>

namespace cryosim {

namespace {

constexpr char kMagic[4] = {'C', 'T', 'R', 'C'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kRecordBytes = 32;

// All generated addresses live above this base; the seed offsets the region
// so traces with different seeds use disjoint footprints (up to 64 MB each).
std::uint64_t region_base(std::uint64_t seed) {
    return 0x4000'0000ULL + ((seed & 0xFF) << 26);
}

std::uint64_t code_base(std::uint64_t seed) {
    return 0x1'0000ULL + ((seed & 0xFF) << 16);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// Even spread of `want` picks over `n` slots; returns true for slot i.
bool spread_pick(std::uint64_t i, std::uint64_t n, std::uint64_t want) {
    return ((i + 1) * want) / n > (i * want) / n;
}

void put_u16(std::string &out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string &out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string &out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint16_t get_u16(const unsigned char *p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const unsigned char *p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t get_u64(const unsigned char *p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | p[i];
    return v;
}

} // namespace

const char *to_string(InstrKind kind) {
    switch (kind) {
    case InstrKind::IntAlu: return "IntAlu";
    case InstrKind::IntMul: return "IntMul";
    case InstrKind::IntDiv: return "IntDiv";
    case InstrKind::FloatOp: return "FloatOp";
    case InstrKind::Load: return "Load";
    case InstrKind::Store: return "Store";
    case InstrKind::CondBranch: return "CondBranch";
    case InstrKind::Nop: return "Nop";
    }
    return "?";
}

Trace gen_compute_bound(std::uint64_t n, std::uint64_t footprint_bytes, double mem_ratio,
                        std::uint64_t seed) {
    if (n == 0)
        throw InvalidParamError("gen_compute_bound: n must be > 0");
    if (mem_ratio < 0.0 || mem_ratio > 0.3)
        throw InvalidParamError("gen_compute_bound: mem_ratio must be in [0, 0.3]");
    if (footprint_bytes > 32 * 1024)
        throw InvalidParamError("gen_compute_bound: footprint must fit L1D (<= 32 KB)");
    const std::uint64_t mem_ops = static_cast<std::uint64_t>(mem_ratio * static_cast<double>(n) + 0.5);
    if (mem_ops > 0 && footprint_bytes < 8)
        throw InvalidParamError("gen_compute_bound: footprint too small for 8-byte accesses");

    std::mt19937_64 rng(seed);
    Trace t;
    t.instructions.reserve(n);

    const std::uint64_t body = 200; // static loop body, 800 B of code
    const std::uint64_t cbase = code_base(seed);
    const std::uint64_t dbase = region_base(seed);
    const std::uint64_t slots = footprint_bytes / 8;

    std::uint64_t mem_idx = 0;
    std::uint8_t rot = 0; // rotating destination registers r8..r23
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t slot = i % body;
        TraceInstruction ins;
        ins.pc = cbase + 4 * slot;
        if (spread_pick(i, n, mem_ops)) {
            // Sequential 8-byte stride over the footprint, 3:1 load:store.
            ins.kind = (mem_idx % 4 == 3) ? InstrKind::Store : InstrKind::Load;
            ins.mem_addr = dbase + (mem_idx * 8) % (slots * 8);
            ins.mem_size = 8;
            if (ins.kind == InstrKind::Load) {
                ins.dest = static_cast<std::uint8_t>(8 + (rot++ % 16));
            } else {
                ins.src1 = static_cast<std::uint8_t>(8 + ((rot + 15) % 16));
                ins.src2 = 2;
            }
            ++mem_idx;
        } else if (slot == body - 1) {
            // Loop-closing branch, always taken.
            ins.kind = InstrKind::CondBranch;
            ins.taken = true;
            ins.target = cbase;
            ins.src1 = static_cast<std::uint8_t>(8 + ((rot + 15) % 16));
        } else if (slot % 20 == 9) {
            // Intra-body biased branch to the next pc.
            ins.kind = InstrKind::CondBranch;
            ins.taken = true;
            ins.target = ins.pc + 4;
        } else {
            ins.kind = InstrKind::IntAlu;
            // Producer/consumer pairs: chains of length exactly 2.
            const std::uint8_t d = static_cast<std::uint8_t>(8 + (rot % 16));
            if (i % 2 == 0) {
                ins.dest = d;
                ins.src1 = 1;
                ins.src2 = 2;
            } else {
                ins.dest = static_cast<std::uint8_t>(8 + ((rot + 1) % 16));
                ins.src1 = static_cast<std::uint8_t>(8 + ((rot + 15) % 16));
                rot = static_cast<std::uint8_t>(rot + 2);
            }
        }
        t.instructions.push_back(ins);
    }

    t.metadata["generator"] = "compute-bound";
    t.metadata["n"] = std::to_string(n);
    t.metadata["footprint"] = std::to_string(footprint_bytes);
    t.metadata["mem_ratio"] = format_double(mem_ratio);
    t.metadata["seed"] = std::to_string(seed);
    t.metadata["prng"] = "mt19937_64";
    return t;
}

Trace gen_memory_bound(std::uint64_t n, std::uint64_t footprint_bytes, MemPattern pattern,
                       std::uint64_t seed) {
    if (n == 0)
        throw InvalidParamError("gen_memory_bound: n must be > 0");
    if (footprint_bytes <= 16 * 1024 * 1024)
        throw InvalidParamError(
            "gen_memory_bound: footprint must exceed the 16 MB L3 capacity");

    std::mt19937_64 rng(seed);
    Trace t;
    t.instructions.reserve(n);

    const std::uint64_t body = 128;
    const std::uint64_t cbase = code_base(seed);
    const std::uint64_t dbase = region_base(seed);
    const std::uint64_t slots = footprint_bytes / 8;

    // Two alternating registers carry the pointer-chase dependency.
    std::uint8_t chase_reg = 10;
    bool have_prev_load = false;
    std::uint8_t rot = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t slot = i % body;
        TraceInstruction ins;
        ins.pc = cbase + 4 * slot;
        if (slot % 2 == 0) {
            ins.kind = InstrKind::Load;
            ins.mem_addr = dbase + (rng() % slots) * 8;
            ins.mem_size = 8;
            if (pattern == MemPattern::PointerChase) {
                const std::uint8_t next = static_cast<std::uint8_t>(chase_reg == 10 ? 11 : 10);
                ins.dest = next;
                if (have_prev_load)
                    ins.src1 = chase_reg;
                chase_reg = next;
                have_prev_load = true;
            } else {
                ins.dest = static_cast<std::uint8_t>(16 + (rot++ % 8));
            }
        } else if (slot == body - 1) {
            ins.kind = InstrKind::CondBranch;
            ins.taken = true;
            ins.target = cbase;
        } else if (slot % 4 == 3) {
            ins.kind = InstrKind::Store;
            ins.mem_addr = dbase + (rng() % slots) * 8;
            ins.mem_size = 8;
            ins.src1 = 2;
        } else {
            ins.kind = InstrKind::IntAlu;
            ins.dest = static_cast<std::uint8_t>(24 + (rot++ % 4));
            ins.src1 = 1;
        }
        t.instructions.push_back(ins);
    }

    t.metadata["generator"] = "memory-bound";
    t.metadata["n"] = std::to_string(n);
    t.metadata["footprint"] = std::to_string(footprint_bytes);
    t.metadata["pattern"] = pattern == MemPattern::PointerChase ? "pointer-chase" : "uniform-random";
    t.metadata["seed"] = std::to_string(seed);
    t.metadata["prng"] = "mt19937_64";
    return t;
}

Trace gen_branchy(std::uint64_t n, double predictability, std::uint64_t seed) {
    if (predictability < 0.0 || predictability > 1.0)
        throw InvalidParamError("gen_branchy: predictability must be in [0, 1]");

    std::mt19937_64 rng(seed);
    Trace t;
    t.instructions.reserve(n);

    const std::uint64_t body = 64;
    const std::uint64_t cbase = code_base(seed);

    // Per-pc repeating patterns, all of period <= 4.
    static constexpr std::array<std::array<bool, 4>, 4> kPatterns = {{
        {true, true, true, true},
        {true, false, true, false},
        {true, true, false, false},
        {true, true, true, false},
    }};
    std::array<std::uint64_t, 16> occurrence{}; // per branch slot within the body
    const double follow_prob = predictability <= 0.5 ? 0.0 : 2.0 * predictability - 1.0;

    std::uint8_t rot = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t slot = i % body;
        TraceInstruction ins;
        ins.pc = cbase + 4 * slot;
        if (slot % 4 == 3) {
            ins.kind = InstrKind::CondBranch;
            const std::uint64_t branch_slot = slot / 4;
            const auto &pattern = kPatterns[(branch_slot + seed) % kPatterns.size()];
            const bool pattern_out = pattern[occurrence[branch_slot] % 4];
            ++occurrence[branch_slot];
            bool out;
            if (follow_prob >= 1.0) {
                out = pattern_out;
            } else {
                const bool follow = (rng() % 1'000'000) < follow_prob * 1'000'000;
                out = follow ? pattern_out : (rng() & 1);
            }
            ins.taken = out;
            ins.target = slot == body - 1 ? cbase : ins.pc + 8;
        } else {
            ins.kind = InstrKind::IntAlu;
            ins.dest = static_cast<std::uint8_t>(8 + (rot++ % 16));
            ins.src1 = 1;
        }
        t.instructions.push_back(ins);
    }

    t.metadata["generator"] = "branchy";
    t.metadata["n"] = std::to_string(n);
    t.metadata["predictability"] = format_double(predictability);
    t.metadata["seed"] = std::to_string(seed);
    t.metadata["prng"] = "mt19937_64";
    return t;
}

void write_trace(const Trace &trace, const std::filesystem::path &path) {
    std::string meta;
    for (const auto &[k, v] : trace.metadata)
        meta += k + "=" + v + "\n";

    std::string out;
    out.reserve(16 + meta.size() + kRecordBytes * trace.instructions.size());
    out.append(kMagic, 4);
    put_u16(out, kVersion);
    put_u16(out, 0);
    put_u64(out, trace.instructions.size());
    put_u32(out, static_cast<std::uint32_t>(meta.size()));
    out += meta;
    for (const auto &ins : trace.instructions) {
        out.push_back(static_cast<char>(ins.kind));
        out.push_back(static_cast<char>(ins.taken ? 1 : 0));
        out.push_back(static_cast<char>(ins.dest));
        out.push_back(static_cast<char>(ins.src1));
        out.push_back(static_cast<char>(ins.src2));
        out.push_back(static_cast<char>(ins.mem_size));
        put_u16(out, 0);
        put_u64(out, ins.pc);
        put_u64(out, ins.mem_addr);
        put_u64(out, ins.target);
    }

    std::FILE *f = std::fopen(path.string().c_str(), "wb");
    if (!f)
        throw IoError("cannot open '" + path.string() + "' for writing");
    const std::size_t written = std::fwrite(out.data(), 1, out.size(), f);
    const int rc = std::fclose(f);
    if (written != out.size() || rc != 0)
        throw IoError("short write to '" + path.string() + "'");
}

Trace read_trace(const std::filesystem::path &path) {
    std::FILE *f = std::fopen(path.string().c_str(), "rb");
    if (!f)
        throw IoError("cannot open '" + path.string() + "' for reading");
    std::string data;
    char buf[1 << 16];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0)
        data.append(buf, got);
    std::fclose(f);

    const auto *p = reinterpret_cast<const unsigned char *>(data.data());
    if (data.size() < 20 || std::memcmp(p, kMagic, 4) != 0)
        throw FormatError("'" + path.string() + "': bad magic");
    const std::uint16_t version = get_u16(p + 4);
    if (version != kVersion)
        throw FormatError("'" + path.string() + "': unsupported version " +
                          std::to_string(version));
    const std::uint64_t count = get_u64(p + 8);
    const std::uint32_t meta_len = get_u32(p + 16);
    const std::size_t header = 20;
    if (data.size() < header + meta_len)
        throw FormatError("'" + path.string() + "': truncated metadata");

    Trace t;
    std::istringstream meta(data.substr(header, meta_len));
    std::string line;
    while (std::getline(meta, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos)
            t.metadata[line.substr(0, eq)] = line.substr(eq + 1);
    }

    const std::size_t body = header + meta_len;
    t.instructions.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::size_t off = body + i * kRecordBytes;
        if (off + kRecordBytes > data.size())
            throw FormatError("'" + path.string() + "': truncated record " + std::to_string(i));
        const unsigned char *r = p + off;
        if (r[0] >= kKindCount)
            throw FormatError("'" + path.string() + "': invalid kind byte in record " +
                              std::to_string(i));
        TraceInstruction ins;
        ins.kind = static_cast<InstrKind>(r[0]);
        ins.taken = (r[1] & 1) != 0;
        ins.dest = r[2];
        ins.src1 = r[3];
        ins.src2 = r[4];
        ins.mem_size = r[5];
        ins.pc = get_u64(r + 8);
        ins.mem_addr = get_u64(r + 16);
        ins.target = get_u64(r + 24);
        t.instructions.push_back(ins);
    }
    return t;
}

} // namespace cryosim

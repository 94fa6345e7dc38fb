#include "cryosim/system.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>

namespace cryosim {

const std::vector<std::string> &preset_names() {
    static const std::vector<std::string> names = {
        "CryoAll",        "SuperCryo",        "SuperAll",
        "InOrderCryoAll", "InOrderSuperCryo", "InOrderSuperAll",
    };
    return names;
}

SystemConfig make_preset(const std::string &name) {
    SystemConfig c;
    c.preset_name = name;
    const bool in_order = name.rfind("InOrder", 0) == 0;
    const std::string base = in_order ? name.substr(7) : name;
    c.core = in_order ? CoreConfig::in_order() : CoreConfig::out_of_order();

    constexpr std::uint64_t kCryo = 4'000'000'000;   // cryogenic domain
    constexpr std::uint64_t kSuper = 100'000'000'000; // superconducting domain
    if (base == "CryoAll") {
        c.freq_core = kCryo;
        c.freq_l1 = c.freq_l2 = c.freq_l3 = kCryo;
    } else if (base == "SuperCryo") {
        c.freq_core = kSuper;
        c.freq_l1 = c.freq_l2 = c.freq_l3 = kCryo;
    } else if (base == "SuperAll") {
        c.freq_core = kSuper;
        c.freq_l1 = c.freq_l2 = c.freq_l3 = kSuper;
    } else {
        std::string valid;
        for (const std::string &n : preset_names())
            valid += (valid.empty() ? "" : ", ") + n;
        throw ConfigError("unknown preset '" + name + "'; valid presets: " + valid);
    }
    return c;
}

namespace {

std::string trim(const std::string &s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::uint64_t parse_scaled(const std::string &text, const char *what,
                           const std::vector<std::pair<std::string, std::uint64_t>> &suffixes) {
    const std::string t = trim(text);
    for (const auto &[suffix, scale] : suffixes) {
        if (t.size() > suffix.size()) {
            std::string tail = t.substr(t.size() - suffix.size());
            std::transform(tail.begin(), tail.end(), tail.begin(),
                           [](unsigned char ch) { return std::tolower(ch); });
            std::string lower = suffix;
            std::transform(lower.begin(), lower.end(), lower.begin(),
                           [](unsigned char ch) { return std::tolower(ch); });
            if (tail == lower) {
                const std::string num = trim(t.substr(0, t.size() - suffix.size()));
                return static_cast<std::uint64_t>(std::stod(num) * static_cast<double>(scale));
            }
        }
    }
    try {
        return std::stoull(t);
    } catch (const std::exception &) {
        throw ConfigError(std::string("cannot parse ") + what + " '" + text + "'");
    }
}

bool parse_bool(const std::string &text, const std::string &key) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes")
        return true;
    if (t == "false" || t == "0" || t == "no")
        return false;
    throw ConfigError("cannot parse boolean '" + text + "' for " + key);
}

void apply_cache_key(CacheConfig &c, const std::string &field, const std::string &value,
                     const std::string &key) {
    if (field == "size")
        c.size = parse_size(value);
    else if (field == "assoc")
        c.associativity = static_cast<std::uint32_t>(std::stoul(value));
    else if (field == "latency")
        c.data_latency = static_cast<std::uint32_t>(std::stoul(value));
    else if (field == "line_size")
        c.line_size = static_cast<std::uint32_t>(std::stoul(value));
    else if (field == "mshrs")
        c.mshrs = static_cast<std::uint32_t>(std::stoul(value));
    else if (field == "serial_miss_lookup")
        c.serial_miss_lookup = parse_bool(value, key);
    else
        throw ConfigError("unknown config key '" + key + "'");
}

} // namespace

std::uint64_t parse_size(const std::string &text) {
    return parse_scaled(text, "size",
                        {{"KB", 1024ULL}, {"MB", 1024ULL * 1024}, {"GB", 1024ULL * 1024 * 1024}});
}

std::uint64_t parse_freq(const std::string &text) {
    return parse_scaled(text, "frequency",
                        {{"GHz", 1'000'000'000ULL}, {"MHz", 1'000'000ULL}, {"kHz", 1'000ULL}});
}

void apply_config_line(SystemConfig &c, const std::string &key, const std::string &value) {
    const auto dot = key.find('.');
    const std::string head = dot == std::string::npos ? key : key.substr(0, dot);
    const std::string rest = dot == std::string::npos ? "" : key.substr(dot + 1);

    if (key == "preset") {
        const std::string name = c.preset_name;
        c = make_preset(trim(value));
        return;
    }
    if (key == "cores") {
        c.cores = static_cast<int>(std::stol(value));
        return;
    }
    if (key == "warmup") {
        c.warmup = parse_bool(value, key);
        return;
    }
    if (head == "core") {
        if (rest == "kind") {
            const std::string v = trim(value);
            if (v == "inorder" || v == "in-order")
                c.core.kind = CoreKind::InOrder;
            else if (v == "ooo" || v == "out-of-order")
                c.core.kind = CoreKind::OutOfOrder;
            else
                throw ConfigError("core.kind must be 'inorder' or 'ooo'");
        } else if (rest == "width")
            c.core.width = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest == "fetch_queue")
            c.core.fetch_queue = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest == "rob")
            c.core.rob = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest == "iq")
            c.core.iq = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest == "lsq")
            c.core.lsq = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest == "int_regs")
            c.core.int_regs = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest == "fp_regs")
            c.core.fp_regs = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest == "cache_ports")
            c.core.cache_ports = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest == "fetch_group_bytes")
            c.core.fetch_group_bytes = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest == "mispredict_penalty")
            c.core.mispredict_penalty = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest.rfind("fu.", 0) == 0) {
            const std::string fu = rest.substr(3);
            static const std::vector<std::pair<std::string, InstrKind>> kFus = {
                {"int_alu", InstrKind::IntAlu}, {"int_mul", InstrKind::IntMul},
                {"int_div", InstrKind::IntDiv}, {"float", InstrKind::FloatOp},
                {"load", InstrKind::Load},      {"store", InstrKind::Store},
                {"branch", InstrKind::CondBranch}, {"nop", InstrKind::Nop}};
            for (const auto &[n, k] : kFus)
                if (n == fu) {
                    c.core.fu_latency[static_cast<std::uint8_t>(k)] =
                        static_cast<std::uint32_t>(std::stoul(value));
                    return;
                }
            throw ConfigError("unknown config key '" + key + "'");
        } else
            throw ConfigError("unknown config key '" + key + "'");
        return;
    }
    if (head == "bp") {
        if (rest == "btb_entries")
            c.core.bp.btb_entries = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest == "ras_entries")
            c.core.bp.ras_entries = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest == "predictor_bytes")
            c.core.bp.predictor_bytes = static_cast<std::uint32_t>(parse_size(value));
        else if (rest == "history_table_bytes")
            c.core.bp.history_table_bytes = static_cast<std::uint32_t>(parse_size(value));
        else if (rest == "indirect_entries")
            c.core.bp.indirect_entries = static_cast<std::uint32_t>(std::stoul(value));
        else if (rest == "counter_bits")
            c.core.bp.counter_bits = static_cast<std::uint32_t>(std::stoul(value));
        else
            throw ConfigError("unknown config key '" + key + "'");
        return;
    }
    if (head == "l1i" || head == "l1d" || head == "l2" || head == "l3") {
        CacheConfig &cc = head == "l1i" ? c.l1i : head == "l1d" ? c.l1d : head == "l2" ? c.l2 : c.l3;
        apply_cache_key(cc, rest, value, key);
        return;
    }
    if (head == "mem") {
        if (rest == "access_latency_ticks")
            c.mem.access_latency = std::stoull(value);
        else if (rest == "peak_bandwidth")
            c.mem.peak_bandwidth = std::stod(value);
        else
            throw ConfigError("unknown config key '" + key + "'");
        return;
    }
    if (head == "freq") {
        std::uint64_t hz = parse_freq(value);
        if (rest == "core")
            c.freq_core = hz;
        else if (rest == "l1")
            c.freq_l1 = hz;
        else if (rest == "l2")
            c.freq_l2 = hz;
        else if (rest == "l3")
            c.freq_l3 = hz;
        else if (rest == "board")
            c.freq_board = hz;
        else if (rest == "memory")
            c.freq_mem = hz;
        else
            throw ConfigError("unknown config key '" + key + "'");
        return;
    }
    throw ConfigError("unknown config key '" + key + "'");
}

void apply_config_file(SystemConfig &config, const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path.string() + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        try {
            apply_config_line(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::invalid_argument &) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": bad value");
        }
    }
}

std::vector<RunStats> run_simulation(const SystemConfig &config,
                                     const std::vector<const Trace *> &traces,
                                     const std::vector<std::string> &trace_names) {
    config.core.validate();
    if (config.cores < 1 || config.cores > 2)
        throw ConfigError("cores must be 1 or 2");
    if (traces.size() != static_cast<std::size_t>(config.cores) ||
        trace_names.size() != traces.size())
        throw ConfigError("one trace per core required");

    EventQueue queue;
    const ClockDomain core_dom = make_domain("core", config.freq_core);
    MemsysDomains md{
        make_domain("l1", config.freq_l1),       make_domain("l2", config.freq_l2),
        make_domain("l3", config.freq_l3),       make_domain("board", config.freq_board),
        make_domain("memory", config.freq_mem),
    };
    MemSystem ms(config.l1i, config.l1d, config.l2, config.l3, config.mem, md, config.cores,
                 queue);

    if (config.warmup) {
        for (int c = 0; c < config.cores; ++c) {
            for (const TraceInstruction &ins : traces[c]->instructions) {
                ms.warm_touch_code(c, ins.pc);
                if (ins.is_mem())
                    ms.warm_touch_data(c, ins.mem_addr, ins.kind == InstrKind::Store);
            }
        }
    }

    std::vector<std::unique_ptr<InOrderCore>> in_order;
    std::vector<std::unique_ptr<OoOCore>> out_of_order;
    for (int c = 0; c < config.cores; ++c) {
        if (config.core.kind == CoreKind::InOrder) {
            in_order.push_back(std::make_unique<InOrderCore>(config.core, *traces[c],
                                                             ms.icache_port(c), ms.dcache_port(c),
                                                             core_dom, queue));
            in_order.back()->start();
        } else {
            out_of_order.push_back(std::make_unique<OoOCore>(config.core, *traces[c],
                                                             ms.icache_port(c), ms.dcache_port(c),
                                                             core_dom, queue));
            out_of_order.back()->start();
        }
    }

    auto all_done = [&] {
        for (const auto &c : in_order)
            if (!c->done())
                return false;
        for (const auto &c : out_of_order)
            if (!c->done())
                return false;
        return true;
    };
    while (!all_done()) {
        if (!queue.advance())
            throw DeadlockError("event queue exhausted before all cores finished");
    }

    std::vector<RunStats> out;
    for (int c = 0; c < config.cores; ++c) {
        const CoreCounters &cc = config.core.kind == CoreKind::InOrder
                                     ? in_order[c]->counters()
                                     : out_of_order[c]->counters();
        const Tick finish = config.core.kind == CoreKind::InOrder
                                ? in_order[c]->finish_tick()
                                : out_of_order[c]->finish_tick();
        RunStats s;
        s.config_id = config.preset_name;
        s.trace_name = trace_names[c];
        s.sim_ticks = finish;
        s.core_period = core_dom.period;
        s.core_cycles = cc.cycles;
        s.committed_instructions = cc.committed;
        s.branches = cc.branches;
        s.mispredictions = cc.mispredictions;
        s.squashed_mem_accesses = cc.squashed_mem_accesses;
        s.max_rob = cc.max_rob;
        s.max_iq = cc.max_iq;
        s.max_lsq = cc.max_lsq;
        s.l1i = ms.l1i(c).counters();
        s.l1d = ms.l1d(c).counters();
        s.l2 = ms.l2(c).counters();
        s.l3 = ms.l3().counters();
        s.mem = ms.memory().counters();
        out.push_back(std::move(s));
    }
    return out;
}

RunStats run_simulation(const SystemConfig &config, const Trace &trace,
                        const std::string &trace_name) {
    return run_simulation(config, std::vector<const Trace *>{&trace},
                          std::vector<std::string>{trace_name})[0];
}

} // namespace cryosim

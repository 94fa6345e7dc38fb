#include "cryosim/core.hpp"

#include <bit>

namespace cryosim {

CoreConfig CoreConfig::in_order() {
    CoreConfig c;
    c.kind = CoreKind::InOrder;
    c.width = 1;
    return c;
}

CoreConfig CoreConfig::out_of_order() {
    CoreConfig c;
    c.kind = CoreKind::OutOfOrder;
    c.width = 4;
    return c;
}

void CoreConfig::validate() const {
    if (width < 1 || width > 8)
        throw ConfigError("core: width must be in 1..8");
    if (fetch_queue < 1 || rob < 1 || iq < 1 || lsq < 1)
        throw ConfigError("core: structure sizes must be >= 1");
    if (cache_ports < 1)
        throw ConfigError("core: cache_ports must be >= 1");
    if (instr_bytes != 4)
        throw ConfigError("core: instr_bytes must be 4");
    if (!std::has_single_bit(fetch_group_bytes) || fetch_group_bytes < instr_bytes)
        throw ConfigError("core: fetch_group_bytes must be a power of two >= instr_bytes");
    if (int_regs <= 32 || fp_regs <= 32)
        throw ConfigError("core: register files must exceed the 32 architectural registers");
    for (std::uint32_t l : fu_latency)
        if (l < 1)
            throw ConfigError("core: functional unit latencies must be >= 1");
}

FetchEngine::FetchEngine(const CoreConfig &cfg, const Trace &trace, MemPort &icache,
                         CoreCounters &counters)
    : cfg_(&cfg), trace_(&trace), icache_(&icache), counters_(&counters), bp_(cfg.bp) {}

void FetchEngine::issue_next_group(Tick now) {
    const auto &ins = trace_->instructions;
    const std::uint32_t start = next_fetch_;
    const std::uint64_t group_mask = ~static_cast<std::uint64_t>(cfg_->fetch_group_bytes - 1);
    const std::uint64_t group_addr = ins[start].pc & group_mask;
    std::uint32_t end = start;
    std::uint64_t expected_pc = ins[start].pc;
    while (end < ins.size()) {
        const TraceInstruction &i = ins[end];
        if ((i.pc & group_mask) != group_addr || i.pc != expected_pc)
            break;
        ++end;
        expected_pc = i.pc + cfg_->instr_bytes;
        if (i.is_branch() && i.taken)
            break; // fetch redirects past a taken branch
    }
    deposit_cursor_ = start;
    deposit_end_ = end;
    next_fetch_ = end;
    outstanding_ = icache_->request(group_addr, cfg_->fetch_group_bytes, false, now);
    ++counters_->fetch_groups;
}

bool FetchEngine::step(Tick now) {
    bool progress = false;
    if (outstanding_ && outstanding_->completion && *outstanding_->completion <= now) {
        while (deposit_cursor_ < deposit_end_ && buffer_.size() < cfg_->fetch_queue) {
            const std::uint32_t idx = deposit_cursor_;
            const TraceInstruction &ins = trace_->instructions[idx];
            buffer_.push_back(idx);
            ++deposit_cursor_;
            progress = true;
            if (ins.is_branch()) {
                const Prediction p = bp_.predict(ins.pc);
                bp_.update(ins.pc, ins.taken, ins.target);
                ++counters_->branches;
                const bool mispredicted = p.taken != ins.taken ||
                                          (ins.taken && (!p.target || *p.target != ins.target));
                if (mispredicted) {
                    ++counters_->mispredictions;
                    // Stop delivering until the core resolves this branch;
                    // anything younger in the group is squashed and refetched.
                    blocking_branch_ = idx;
                    next_fetch_ = idx + 1;
                    deposit_end_ = deposit_cursor_;
                    outstanding_.reset();
                    break;
                }
            }
        }
        if (outstanding_ && deposit_cursor_ == deposit_end_)
            outstanding_.reset();
    }
    if (!outstanding_ && deposit_cursor_ == deposit_end_ && !blocking_branch_ &&
        next_fetch_ < trace_->size()) {
        issue_next_group(now);
        progress = true;
    }
    if (counters_->max_fetch_queue < buffer_.size())
        counters_->max_fetch_queue = buffer_.size();
    return progress;
}

void FetchEngine::branch_resolved(std::uint32_t idx) {
    if (blocking_branch_ && *blocking_branch_ == idx)
        blocking_branch_.reset();
}

std::optional<Tick> FetchEngine::outstanding_completion() const {
    if (outstanding_ && outstanding_->completion)
        return outstanding_->completion;
    return std::nullopt;
}

CoreResult run_core(const CoreConfig &cfg, const Trace &trace, MemPort &icache, MemPort &dcache,
                    const ClockDomain &domain, EventQueue &queue) {
    cfg.validate();
    if (cfg.kind == CoreKind::InOrder) {
        InOrderCore core(cfg, trace, icache, dcache, domain, queue);
        core.start();
        while (!core.done() && queue.advance()) {
        }
        if (!core.done())
            throw DeadlockError("event queue exhausted before the core finished");
        return {core.counters(), core.finish_tick()};
    }
    OoOCore core(cfg, trace, icache, dcache, domain, queue);
    core.start();
    while (!core.done() && queue.advance()) {
    }
    if (!core.done())
        throw DeadlockError("event queue exhausted before the core finished");
    return {core.counters(), core.finish_tick()};
}

} // namespace cryosim

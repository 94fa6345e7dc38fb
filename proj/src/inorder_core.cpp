#include "cryosim/core.hpp"

namespace cryosim {

namespace {
constexpr std::uint64_t kDeadlockCycles = 1'000'000;
}

InOrderCore::InOrderCore(const CoreConfig &cfg, const Trace &trace, MemPort &icache,
                         MemPort &dcache, const ClockDomain &domain, EventQueue &queue)
    : cfg_(cfg), trace_(&trace), dcache_(&dcache), domain_(domain), queue_(queue),
      fetch_(cfg_, trace, icache, counters_) {
    last_writer_.fill(kNone);
    result_done_.assign(trace.size(), false);
}

void InOrderCore::start() {
    if (trace_->instructions.empty()) {
        done_ = true;
        finish_tick_ = queue_.now();
        return;
    }
    queue_.schedule(queue_.now(), [this] { step(); });
}

bool InOrderCore::producers_ready(const Slot &s) const {
    for (std::uint32_t p : s.prod)
        if (p != kNone && !result_done_[p])
            return false;
    return true;
}

void InOrderCore::step() {
    const Tick now = queue_.now();
    cycle_ = now / domain_.period;
    bool progress = false;

    progress |= fetch_.step(now);

    // Commit everything sitting in WB.
    if (!stages_[WB].empty()) {
        counters_.committed += stages_[WB].size();
        last_commit_cycle_ = cycle_;
        stages_[WB].clear();
        progress = true;
        if (counters_.committed == trace_->size()) {
            done_ = true;
            counters_.cycles = cycle_;
            finish_tick_ = now;
            return;
        }
    }

    // M2 -> WB: memory operations hold M2 until the L1D response is in by the
    // start of their WB cycle.
    while (!stages_[M2].empty() && stages_[WB].size() < cfg_.width) {
        Slot &s = stages_[M2].front();
        if (s.ins->is_mem()) {
            if (!s.txn->completion || *s.txn->completion > now + domain_.period)
                break;
            if (s.ins->kind == InstrKind::Load && s.ins->dest != kNoReg)
                result_done_[s.idx] = true;
        }
        stages_[WB].push_back(std::move(s));
        stages_[M2].erase(stages_[M2].begin());
        progress = true;
    }

    while (!stages_[M1].empty() && stages_[M2].size() < cfg_.width) {
        stages_[M2].push_back(std::move(stages_[M1].front()));
        stages_[M1].erase(stages_[M1].begin());
        progress = true;
    }

    // AG occupancy: unpipelined, so multi-cycle ops block younger entry.
    for (Slot &s : stages_[AG]) {
        if (s.remaining > 0) {
            --s.remaining;
            progress = true;
            if (s.remaining == 0) {
                if (!s.ins->is_mem() && s.ins->dest != kNoReg)
                    result_done_[s.idx] = true;
                if (s.ins->is_branch())
                    fetch_.branch_resolved(s.idx);
            }
        }
    }
    while (!stages_[AG].empty() && stages_[AG].front().remaining == 0 &&
           stages_[M1].size() < cfg_.width) {
        Slot s = std::move(stages_[AG].front());
        stages_[AG].erase(stages_[AG].begin());
        if (s.ins->is_mem()) {
            // The request goes out on the edge of the M1 cycle.
            s.txn = dcache_->request(s.ins->mem_addr, s.ins->mem_size,
                                     s.ins->kind == InstrKind::Store, now + domain_.period);
            ++(s.ins->kind == InstrKind::Load ? counters_.loads : counters_.stores);
        }
        stages_[M1].push_back(std::move(s));
        progress = true;
    }

    // D2 -> AG: consumers wait here until every producer's result stage has
    // completed.
    while (!stages_[D2].empty() && stages_[AG].size() < cfg_.width) {
        Slot &s = stages_[D2].front();
        if (!producers_ready(s))
            break;
        s.remaining = s.ins->is_mem() ? 1 : cfg_.fu_latency[static_cast<std::uint8_t>(s.ins->kind)];
        stages_[AG].push_back(std::move(s));
        stages_[D2].erase(stages_[D2].begin());
        progress = true;
    }

    while (!stages_[D1].empty() && stages_[D2].size() < cfg_.width) {
        stages_[D2].push_back(std::move(stages_[D1].front()));
        stages_[D1].erase(stages_[D1].begin());
        progress = true;
    }

    // F2 -> D1: capture source producers, then register the destination.
    while (!stages_[F2].empty() && stages_[D1].size() < cfg_.width) {
        Slot &s = stages_[F2].front();
        const TraceInstruction &i = *s.ins;
        const std::uint8_t srcs[2] = {i.src1, i.src2};
        for (int k = 0; k < 2; ++k)
            s.prod[k] = srcs[k] != kNoReg ? last_writer_[srcs[k]] : kNone;
        if (i.dest != kNoReg)
            last_writer_[i.dest] = s.idx;
        stages_[D1].push_back(std::move(s));
        stages_[F2].erase(stages_[F2].begin());
        progress = true;
    }

    while (!stages_[F1].empty() && stages_[F2].size() < cfg_.width) {
        stages_[F2].push_back(std::move(stages_[F1].front()));
        stages_[F1].erase(stages_[F1].begin());
        progress = true;
    }

    while (!fetch_.buffer_empty() && stages_[F1].size() < cfg_.width) {
        Slot s;
        s.idx = fetch_.front();
        s.ins = &trace_->instructions[s.idx];
        fetch_.pop();
        stages_[F1].push_back(std::move(s));
        progress = true;
    }

    schedule_next(progress, now);
}

void InOrderCore::schedule_next(bool progress, Tick now) {
    if (cycle_ - last_commit_cycle_ > kDeadlockCycles)
        throw DeadlockError("in-order core: no commit for 10^6 cycles");
    if (progress) {
        queue_.schedule(now + domain_.period, [this] { step(); });
        return;
    }
    // Fully stalled: wake at the earliest tick anything can change.
    std::optional<Tick> target;
    auto consider = [&](std::optional<Tick> t) {
        if (t && (!target || *t < *target))
            target = t;
    };
    consider(fetch_.outstanding_completion());
    for (Stage st : {M1, M2})
        for (const Slot &s : stages_[st])
            if (s.txn && s.txn->completion)
                consider(s.txn->completion);
    if (!queue_.empty())
        consider(queue_.next_tick());
    if (!target)
        throw DeadlockError("in-order core stalled with no pending events");
    queue_.schedule(next_edge(domain_, std::max(*target, now + 1)), [this] { step(); });
}

} // namespace cryosim

#include "cryosim/core.hpp"

#include <algorithm>

namespace cryosim {

namespace {
constexpr std::uint64_t kDeadlockCycles = 1'000'000;

bool ranges_overlap(std::uint64_t a, std::uint32_t alen, std::uint64_t b, std::uint32_t blen) {
    return a < b + blen && b < a + alen;
}
} // namespace

OoOCore::OoOCore(const CoreConfig &cfg, const Trace &trace, MemPort &icache, MemPort &dcache,
                 const ClockDomain &domain, EventQueue &queue)
    : cfg_(cfg), trace_(&trace), dcache_(&dcache), domain_(domain), queue_(queue),
      fetch_(cfg_, trace, icache, counters_) {
    rename_.fill(kNone);
    result_done_.assign(trace.size(), false);
    free_int_ = cfg_.int_regs - 32;
    free_fp_ = cfg_.fp_regs - 32;
}

void OoOCore::start() {
    if (trace_->instructions.empty()) {
        done_ = true;
        finish_tick_ = queue_.now();
        return;
    }
    queue_.schedule(queue_.now(), [this] { step(); });
}

bool OoOCore::entry_ready(const RobEntry &e) const {
    for (std::uint32_t p : e.prod)
        if (p != kNone && !result_done_[p])
            return false;
    return true;
}

bool OoOCore::blocked_by_older_store(const RobEntry &e) const {
    const TraceInstruction &i = *e.ins;
    for (const LsqEntry &l : lsq_) {
        if (l.idx >= e.idx)
            break;
        if (l.is_store && !l.committed && ranges_overlap(l.addr, l.size, i.mem_addr, i.mem_size))
            return true;
    }
    return false;
}

void OoOCore::step() {
    const Tick now = queue_.now();
    cycle_ = now / domain_.period;
    bool progress = false;

    progress |= fetch_.step(now);

    // Commit, in order, up to `width`. Stores move to the post-commit write
    // queue; their LSQ entry is held until the write issues.
    for (std::uint32_t k = 0; k < cfg_.width && !rob_.empty(); ++k) {
        RobEntry &head = rob_.front();
        if (!head.done)
            break;
        const TraceInstruction &i = *head.ins;
        if (i.kind == InstrKind::Store) {
            for (LsqEntry &l : lsq_)
                if (l.idx == head.idx) {
                    l.committed = true;
                    break;
                }
            store_queue_.push_back({head.idx, i.mem_addr, i.mem_size});
        } else if (i.kind == InstrKind::Load) {
            lsq_.erase(std::find_if(lsq_.begin(), lsq_.end(),
                                    [&](const LsqEntry &l) { return l.idx == head.idx; }));
        }
        if (i.dest != kNoReg)
            ++(i.dest < 32 ? free_int_ : free_fp_);
        rob_.pop_front();
        ++counters_.committed;
        last_commit_cycle_ = cycle_;
        progress = true;
    }
    if (counters_.committed == trace_->size() && store_queue_.empty()) {
        done_ = true;
        counters_.cycles = cycle_;
        finish_tick_ = now;
        return;
    }

    // Completion: fixed-latency results plus load responses. Dependents can
    // issue in the same step.
    auto mark_done = [&](std::uint32_t idx) {
        result_done_[idx] = true;
        RobEntry &e = rob_[idx - rob_.front().idx];
        e.done = true;
        if (e.ins->is_branch())
            fetch_.branch_resolved(idx);
        progress = true;
    };
    for (auto it = completions_.begin(); it != completions_.end();) {
        if (it->first <= cycle_) {
            mark_done(it->second);
            it = completions_.erase(it);
        } else {
            ++it;
        }
    }
    for (auto it = pending_loads_.begin(); it != pending_loads_.end();) {
        if (it->txn->completion && std::max(*it->txn->completion, it->min_done) <= now) {
            mark_done(it->idx);
            it = pending_loads_.erase(it);
        } else {
            ++it;
        }
    }

    // Issue. Committed stores are older than everything in the window, so
    // they take the L1D port first; then oldest-ready-first from the IQ.
    std::uint32_t budget = cfg_.width;
    std::uint32_t mem_budget = cfg_.cache_ports;
    if (mem_budget > 0 && !store_queue_.empty()) {
        const PendingStore st = store_queue_.front();
        store_queue_.pop_front();
        dcache_->request(st.addr, st.size, true, now);
        ++counters_.stores;
        --mem_budget;
        lsq_.erase(std::find_if(lsq_.begin(), lsq_.end(),
                                [&](const LsqEntry &l) { return l.idx == st.idx; }));
        progress = true;
    }
    for (auto it = iq_.begin(); it != iq_.end() && budget > 0;) {
        RobEntry &e = rob_[*it - rob_.front().idx];
        if (!entry_ready(e)) {
            ++it;
            continue;
        }
        const TraceInstruction &i = *e.ins;
        if (i.kind == InstrKind::Load) {
            if (mem_budget == 0 || blocked_by_older_store(e)) {
                ++it;
                continue;
            }
            PendingLoad pl;
            pl.idx = e.idx;
            pl.txn = dcache_->request(i.mem_addr, i.mem_size, false, now);
            pl.min_done =
                now + cycles_to_ticks(domain_, cfg_.fu_latency[static_cast<std::uint8_t>(InstrKind::Load)]);
            pending_loads_.push_back(std::move(pl));
            ++counters_.loads;
            --mem_budget;
        } else {
            completions_.push_back(
                {cycle_ + cfg_.fu_latency[static_cast<std::uint8_t>(i.kind)], e.idx});
        }
        --budget;
        it = iq_.erase(it);
        progress = true;
    }

    // Dispatch from the fetch queue: needs ROB, IQ, LSQ room and a free
    // physical register for the destination class.
    for (std::uint32_t k = 0; k < cfg_.width && !fetch_.buffer_empty(); ++k) {
        const std::uint32_t idx = fetch_.front();
        const TraceInstruction &i = trace_->instructions[idx];
        if (rob_.size() >= cfg_.rob || iq_.size() >= cfg_.iq)
            break;
        if (i.is_mem() && lsq_.size() >= cfg_.lsq)
            break;
        if (i.dest != kNoReg) {
            std::uint32_t &pool = i.dest < 32 ? free_int_ : free_fp_;
            if (pool == 0)
                break;
            --pool;
        }
        fetch_.pop();
        RobEntry e;
        e.idx = idx;
        e.ins = &i;
        const std::uint8_t srcs[2] = {i.src1, i.src2};
        for (int s = 0; s < 2; ++s)
            e.prod[s] = srcs[s] != kNoReg ? rename_[srcs[s]] : kNone;
        if (i.dest != kNoReg)
            rename_[i.dest] = idx;
        rob_.push_back(e);
        iq_.push_back(idx);
        if (i.is_mem())
            lsq_.push_back({idx, i.kind == InstrKind::Store, false, i.mem_addr, i.mem_size});
        progress = true;
    }

    if (rob_.size() > cfg_.rob || iq_.size() > cfg_.iq || lsq_.size() > cfg_.lsq)
        throw InvariantError("out-of-order core: structural occupancy exceeded");
    counters_.max_rob = std::max<std::uint64_t>(counters_.max_rob, rob_.size());
    counters_.max_iq = std::max<std::uint64_t>(counters_.max_iq, iq_.size());
    counters_.max_lsq = std::max<std::uint64_t>(counters_.max_lsq, lsq_.size());

    schedule_next(progress, now);
}

void OoOCore::schedule_next(bool progress, Tick now) {
    if (cycle_ - last_commit_cycle_ > kDeadlockCycles)
        throw DeadlockError("out-of-order core: no commit for 10^6 cycles");
    if (progress) {
        queue_.schedule(now + domain_.period, [this] { step(); });
        return;
    }
    std::optional<Tick> target;
    auto consider = [&](std::optional<Tick> t) {
        if (t && (!target || *t < *target))
            target = t;
    };
    consider(fetch_.outstanding_completion());
    for (const PendingLoad &pl : pending_loads_)
        if (pl.txn->completion)
            consider(std::max(*pl.txn->completion, pl.min_done));
    for (const auto &[done_cycle, idx] : completions_)
        consider(done_cycle * domain_.period);
    if (!queue_.empty())
        consider(queue_.next_tick());
    if (!target)
        throw DeadlockError("out-of-order core stalled with no pending events");
    queue_.schedule(next_edge(domain_, std::max(*target, now + 1)), [this] { step(); });
}

} // namespace cryosim

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "cryosim/kernel.hpp"
#include "cryosim/memsys.hpp"
#include "cryosim/predictor.hpp"
#include "cryosim/trace.hpp"

namespace cryosim {

enum class CoreKind { InOrder, OutOfOrder };

struct CoreConfig {
    CoreKind kind = CoreKind::OutOfOrder;
    std::uint32_t width = 4; // per-stage instructions per cycle
    std::uint32_t fetch_queue = 24;
    std::uint32_t rob = 96;
    std::uint32_t iq = 72;
    std::uint32_t lsq = 24;
    std::uint32_t int_regs = 180;
    std::uint32_t fp_regs = 168;
    std::uint32_t cache_ports = 1; // L1D issues per cycle
    std::uint32_t instr_bytes = 4;
    std::uint32_t fetch_group_bytes = 64; // one L1I request per group
    std::uint32_t mispredict_penalty = 4; // in-order redirect depth (F1..D2)
    // Indexed by InstrKind: IntAlu, IntMul, IntDiv, FloatOp, Load, Store,
    // CondBranch, Nop. Load/Store covers the two data-memory stages.
    std::array<std::uint32_t, kKindCount> fu_latency = {1, 3, 6, 1, 2, 2, 1, 1};
    PredictorConfig bp;

    static CoreConfig in_order();
    static CoreConfig out_of_order();
    void validate() const;
};

struct CoreCounters {
    std::uint64_t cycles = 0;
    std::uint64_t committed = 0;
    std::uint64_t branches = 0;
    std::uint64_t mispredictions = 0;
    std::uint64_t loads = 0;
    std::uint64_t stores = 0;
    std::uint64_t fetch_groups = 0;
    std::uint64_t max_rob = 0;
    std::uint64_t max_iq = 0;
    std::uint64_t max_lsq = 0;
    std::uint64_t max_fetch_queue = 0;
    std::uint64_t squashed_mem_accesses = 0; // wrong-path fetch is not modeled

    bool operator==(const CoreCounters &) const = default;
};

// Group-granular instruction fetch shared by both core models. One L1I
// request is in flight at a time; the next group is requested as soon as the
// previous one has been fully deposited. The predictor is consulted and
// trained at deposit; a mispredicted branch blocks further deposits until
// the core reports it resolved, which yields the redirect penalty.
class FetchEngine {
  public:
    FetchEngine(const CoreConfig &cfg, const Trace &trace, MemPort &icache,
                CoreCounters &counters);

    // Poll the outstanding group and issue the next request. Returns true if
    // anything happened (deposit or new request).
    bool step(Tick now);

    bool buffer_empty() const { return buffer_.empty(); }
    std::size_t buffer_size() const { return buffer_.size(); }
    std::uint32_t front() const { return buffer_.front(); }
    void pop() { buffer_.pop_front(); }

    bool fully_fetched() const { return next_fetch_ >= trace_->size() && deposit_cursor_ == deposit_end_; }
    void branch_resolved(std::uint32_t idx);
    std::optional<Tick> outstanding_completion() const;
    const BranchPredictor &predictor() const { return bp_; }

  private:
    void issue_next_group(Tick now);

    const CoreConfig *cfg_;
    const Trace *trace_;
    MemPort *icache_;
    CoreCounters *counters_;
    BranchPredictor bp_;

    std::deque<std::uint32_t> buffer_; // fetched, not yet consumed (trace indices)
    TxnPtr outstanding_;
    std::uint32_t deposit_cursor_ = 0; // next index of the fetched group to deposit
    std::uint32_t deposit_end_ = 0;
    std::uint32_t next_fetch_ = 0; // next trace index to request
    std::optional<std::uint32_t> blocking_branch_;
};

// Statistics and end state of one simulated core run.
struct CoreResult {
    CoreCounters counters;
    Tick finish_tick = 0;
};

class InOrderCore {
  public:
    InOrderCore(const CoreConfig &cfg, const Trace &trace, MemPort &icache, MemPort &dcache,
                const ClockDomain &domain, EventQueue &queue);
    void start();
    bool done() const { return done_; }
    const CoreCounters &counters() const { return counters_; }
    Tick finish_tick() const { return finish_tick_; }

  private:
    struct Slot {
        std::uint32_t idx = 0;
        const TraceInstruction *ins = nullptr;
        std::uint32_t remaining = 0; // AG occupancy
        std::uint32_t prod[2] = {kNone, kNone};
        TxnPtr txn;
    };
    static constexpr std::uint32_t kNone = 0xFFFFFFFF;
    enum Stage { F1 = 0, F2, D1, D2, AG, M1, M2, WB, kNumStages };

    void step();
    void schedule_next(bool progress, Tick now);
    bool producers_ready(const Slot &s) const;

    CoreConfig cfg_;
    const Trace *trace_;
    MemPort *dcache_;
    const ClockDomain &domain_;
    EventQueue &queue_;
    FetchEngine fetch_;

    std::array<std::vector<Slot>, kNumStages> stages_;
    std::array<std::uint32_t, kNumArchRegs> last_writer_;
    std::vector<bool> result_done_;
    std::uint64_t cycle_ = 0;
    std::uint64_t last_commit_cycle_ = 0;
    bool done_ = false;
    Tick finish_tick_ = 0;
    CoreCounters counters_;
};

class OoOCore {
  public:
    OoOCore(const CoreConfig &cfg, const Trace &trace, MemPort &icache, MemPort &dcache,
            const ClockDomain &domain, EventQueue &queue);
    void start();
    bool done() const { return done_; }
    const CoreCounters &counters() const { return counters_; }
    Tick finish_tick() const { return finish_tick_; }

  private:
    static constexpr std::uint32_t kNone = 0xFFFFFFFF;
    struct RobEntry {
        std::uint32_t idx = 0;
        const TraceInstruction *ins = nullptr;
        bool done = false;
        std::uint32_t prod[2] = {kNone, kNone};
    };
    struct LsqEntry {
        std::uint32_t idx = 0;
        bool is_store = false;
        bool committed = false;
        std::uint64_t addr = 0;
        std::uint32_t size = 0;
    };
    struct PendingLoad {
        std::uint32_t idx = 0;
        TxnPtr txn;
        Tick min_done = 0; // floors load-to-use at the memory FU latency
    };
    struct PendingStore {
        std::uint32_t idx = 0;
        std::uint64_t addr = 0;
        std::uint32_t size = 0;
    };

    void step();
    void schedule_next(bool progress, Tick now);
    bool entry_ready(const RobEntry &e) const;
    bool blocked_by_older_store(const RobEntry &e) const;

    CoreConfig cfg_;
    const Trace *trace_;
    MemPort *dcache_;
    const ClockDomain &domain_;
    EventQueue &queue_;
    FetchEngine fetch_;

    std::deque<RobEntry> rob_;
    std::vector<std::uint32_t> iq_; // trace indices, kept sorted (oldest first)
    std::vector<LsqEntry> lsq_;
    std::deque<PendingStore> store_queue_; // committed stores awaiting their L1D write
    std::vector<PendingLoad> pending_loads_;
    // done_cycle -> entry idx, drained in cycle order
    std::vector<std::pair<std::uint64_t, std::uint32_t>> completions_;
    std::array<std::uint32_t, kNumArchRegs> rename_;
    std::vector<bool> result_done_;
    std::uint32_t free_int_ = 0;
    std::uint32_t free_fp_ = 0;

    std::uint64_t cycle_ = 0;
    std::uint64_t last_commit_cycle_ = 0;
    bool done_ = false;
    Tick finish_tick_ = 0;
    CoreCounters counters_;
};

// Drives a core over the trace to completion on the given event queue and
// returns its counters. The caller owns queue advancement when other
// components share the queue; this helper advances until the core is done.
CoreResult run_core(const CoreConfig &cfg, const Trace &trace, MemPort &icache, MemPort &dcache,
                    const ClockDomain &domain, EventQueue &queue);

} // namespace cryosim

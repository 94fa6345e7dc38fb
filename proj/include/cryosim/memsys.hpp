#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cryosim/kernel.hpp"

namespace cryosim {

struct CacheConfig {
    std::uint64_t size = 0;        // bytes
    std::uint32_t associativity = 1;
    std::uint32_t data_latency = 1; // cycles in this cache's own domain
    std::uint32_t line_size = 64;
    std::uint32_t mshrs = 16;
    bool serial_miss_lookup = true; // a miss pays data_latency before forwarding

    void validate(const std::string &name) const;
    std::uint64_t num_sets() const { return size / (static_cast<std::uint64_t>(associativity) * line_size); }
};

struct MemConfig {
    Tick access_latency = 30000;        // 30 ns closed-page estimate
    double peak_bandwidth = 12.8e9;     // bytes/s, DDR3-1600 x8 nameplate
};

struct LevelCounters {
    std::uint64_t demand_accesses = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t mshr_merges = 0;
    std::uint64_t demand_bytes = 0;
    std::uint64_t fill_bytes = 0;

    bool operator==(const LevelCounters &) const = default;
};

struct MemCounters {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t bytes = 0;

    bool operator==(const MemCounters &) const = default;
};

// Core-visible handle for an in-flight access. `completion` is set once the
// response tick is known; the core observes it on its own clock edges.
struct Transaction {
    Tick issue_tick = 0;
    std::optional<Tick> completion;
};
using TxnPtr = std::shared_ptr<Transaction>;

class MemPort {
  public:
    virtual ~MemPort() = default;
    virtual TxnPtr request(std::uint64_t addr, std::uint32_t size, bool is_store, Tick now) = 0;
};

// Zero-latency always-ready port for core microbenchmarks.
class PerfectMemPort final : public MemPort {
  public:
    TxnPtr request(std::uint64_t, std::uint32_t, bool, Tick now) override {
        auto txn = std::make_shared<Transaction>();
        txn->issue_tick = now;
        txn->completion = now;
        return txn;
    }
};

class CacheLevel;

enum class ReqKind : std::uint8_t { CoreData, CoreFetch, LineFill };

struct Request {
    ReqKind kind = ReqKind::CoreData;
    std::uint64_t addr = 0;
    std::uint32_t size = 0;
    bool is_store = false;
    int core_id = 0;
    std::uint64_t order = 0; // global scheduling sequence, arbitration tie-break
    Tick arrival = 0;
    TxnPtr txn;                      // CoreData / CoreFetch
    CacheLevel *requester = nullptr; // LineFill
};

class RequestSink {
  public:
    virtual ~RequestSink() = default;
    virtual void receive_demand(const Request &req) = 0;
    virtual void receive_writeback(std::uint64_t line_addr, std::uint32_t size, Tick now) = 0;
    virtual void warm_writeback(std::uint64_t line_addr) = 0;
    virtual const ClockDomain &domain() const = 0;
};

// One set-associative write-back write-allocate level. Accepts at most one
// demand request per cycle of its own domain; misses allocate MSHRs and
// forward line fills to the next sink, paying data_latency first when
// serial_miss_lookup is set.
class CacheLevel final : public RequestSink {
  public:
    CacheLevel(std::string name, const CacheConfig &cfg, const ClockDomain &dom, EventQueue &queue);

    // `down_hops` are intermediate clock domains a forwarded request crosses
    // before the next sink's own edge (the board domain between L3 and memory).
    void connect(RequestSink *next, std::vector<const ClockDomain *> down_hops = {});

    void receive_demand(const Request &req) override;
    void receive_writeback(std::uint64_t line_addr, std::uint32_t size, Tick now) override;
    void receive_fill(std::uint64_t line_addr);
    const ClockDomain &domain() const override { return dom_; }

    // Functional pre-touch: installs the line and updates recency without
    // timing or counters.
    void warm_touch(std::uint64_t addr, bool store);
    void warm_writeback(std::uint64_t line_addr) override;

    bool contains(std::uint64_t addr) const;
    const LevelCounters &counters() const { return counters_; }
    const CacheConfig &config() const { return cfg_; }
    const std::string &name() const { return name_; }
    std::uint64_t line_addr(std::uint64_t addr) const { return addr & ~static_cast<std::uint64_t>(cfg_.line_size - 1); }

  private:
    struct Line {
        bool valid = false;
        bool dirty = false;
        std::uint64_t tag = 0;
        std::uint64_t lru = 0;
    };
    struct Mshr {
        std::vector<Request> waiters;
    };
    struct InputOrder {
        bool operator()(const Request &a, const Request &b) const {
            if (a.arrival != b.arrival)
                return a.arrival < b.arrival;
            if (a.core_id != b.core_id)
                return a.core_id < b.core_id;
            return a.order < b.order;
        }
    };

    std::uint64_t set_index(std::uint64_t line) const { return (line / cfg_.line_size) & (num_sets_ - 1); }
    Line *find_line(std::uint64_t line);
    const Line *find_line(std::uint64_t line) const;
    Line &victim_line(std::uint64_t line, std::uint64_t *evicted_addr, bool *evicted_dirty);
    void ensure_process_scheduled();
    void process_one();
    void resolve(const Request &req, Tick ready);
    Tick forward_arrival(Tick t) const;

    std::string name_;
    CacheConfig cfg_;
    const ClockDomain &dom_;
    EventQueue &queue_;
    RequestSink *next_ = nullptr;
    std::vector<const ClockDomain *> down_hops_;

    std::uint64_t num_sets_ = 0;
    Tick latency_ticks_ = 0;
    std::vector<std::vector<Line>> sets_;
    std::vector<std::pair<std::uint64_t, Mshr>> mshrs_; // line addr -> waiters
    std::set<Request, InputOrder> input_;
    bool process_scheduled_ = false;
    Tick next_accept_ = 0;
    std::uint64_t lru_clock_ = 0;

    LevelCounters counters_;
};

// Fixed-latency memory behind a bandwidth regulator. Demands are serviced
// before writebacks; both consume regulator slots spaced by
// line_size / peak_bandwidth.
class MemoryModel final : public RequestSink {
  public:
    MemoryModel(const MemConfig &cfg, const ClockDomain &dom, EventQueue &queue);

    void set_up_hops(std::vector<const ClockDomain *> hops) { up_hops_ = std::move(hops); }

    void receive_demand(const Request &req) override;
    void receive_writeback(std::uint64_t line_addr, std::uint32_t size, Tick now) override;
    void warm_writeback(std::uint64_t) override {}
    const ClockDomain &domain() const override { return dom_; }

    const MemCounters &counters() const { return counters_; }
    const MemConfig &config() const { return cfg_; }

  private:
    void pump(Tick now);
    void service();
    Tick spacing(std::uint32_t size) const;

    MemConfig cfg_;
    const ClockDomain &dom_;
    EventQueue &queue_;
    std::vector<const ClockDomain *> up_hops_;

    std::deque<Request> demand_q_;
    std::deque<std::uint32_t> wb_q_; // sizes only; writebacks carry no response
    bool service_scheduled_ = false;
    Tick busy_until_ = 0;

    MemCounters counters_;
};

// The tick at which a consumer in `to` observes a request sent at `now`.
inline Tick cross_domain(const ClockDomain &to, Tick now) { return next_edge(to, now); }

struct MemsysDomains {
    ClockDomain l1;
    ClockDomain l2;
    ClockDomain l3;
    ClockDomain board;
    ClockDomain memory;
};

// Per-core private L1I/L1D/L2 stacks under one shared L3 and one memory
// channel. Same-edge requests from different cores are ordered
// lower-core-id-first at the shared L3.
class MemSystem {
  public:
    MemSystem(const CacheConfig &l1i, const CacheConfig &l1d, const CacheConfig &l2,
              const CacheConfig &l3, const MemConfig &mem, const MemsysDomains &domains,
              int cores, EventQueue &queue);

    MemPort &icache_port(int core) { return *iports_.at(core); }
    MemPort &dcache_port(int core) { return *dports_.at(core); }

    CacheLevel &l1i(int core) { return *l1i_.at(core); }
    CacheLevel &l1d(int core) { return *l1d_.at(core); }
    CacheLevel &l2(int core) { return *l2_.at(core); }
    CacheLevel &l3() { return *l3_; }
    MemoryModel &memory() { return *mem_; }
    int cores() const { return static_cast<int>(l1d_.size()); }

    void warm_touch_code(int core, std::uint64_t addr);
    void warm_touch_data(int core, std::uint64_t addr, bool store);

  private:
    class HierarchyPort final : public MemPort {
      public:
        HierarchyPort(MemSystem &sys, CacheLevel &l1, ReqKind kind, int core_id)
            : sys_(sys), l1_(l1), kind_(kind), core_id_(core_id) {}
        TxnPtr request(std::uint64_t addr, std::uint32_t size, bool is_store, Tick now) override;

      private:
        MemSystem &sys_;
        CacheLevel &l1_;
        ReqKind kind_;
        int core_id_;
    };

    EventQueue &queue_;
    MemsysDomains domains_;
    std::vector<std::unique_ptr<CacheLevel>> l1i_, l1d_, l2_;
    std::unique_ptr<CacheLevel> l3_;
    std::unique_ptr<MemoryModel> mem_;
    std::vector<std::unique_ptr<HierarchyPort>> iports_, dports_;
    std::uint64_t next_order_ = 0;
};

} // namespace cryosim

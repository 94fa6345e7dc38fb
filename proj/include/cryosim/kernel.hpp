#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "cryosim/errors.hpp"

namespace cryosim {

// Global time base: one tick is one picosecond. All component frequencies
// used by the shipped presets (2 GHz, 800 MHz, 4 GHz, 100 GHz) have exact
// integer periods on this grid.
using Tick = std::uint64_t;

inline constexpr Tick kTicksPerSecond = 1'000'000'000'000ULL;

struct ClockDomain {
    std::string name;
    std::uint64_t frequency_hz = 0;
    Tick period = 0; // ticks per cycle
};

// Builds a clock domain with an exact integer period. Frequencies that do
// not divide 10^12 are rejected rather than rounded.
ClockDomain make_domain(const std::string &name, std::uint64_t frequency_hz);

// cycles * period, with overflow treated as exceeding the simulation horizon.
Tick cycles_to_ticks(const ClockDomain &domain, std::uint64_t cycles);

// Smallest multiple of the domain period that is >= t. A producer in another
// domain is observed at this edge; a tick already on an edge is kept as-is.
Tick next_edge(const ClockDomain &domain, Tick t);

// Deterministic discrete-event queue. Events at equal ticks fire in
// insertion order.
class EventQueue {
  public:
    using Callback = std::function<void()>;

    void schedule(Tick at, Callback cb) {
        if (at < now_)
            throw SchedulePastError("schedule at tick " + std::to_string(at) +
                                    " before current tick " + std::to_string(now_));
        heap_.push(Entry{at, next_seq_++, std::move(cb)});
    }

    // Pops and dispatches the earliest (tick, seq) event. Returns false when
    // the queue is exhausted.
    bool advance() {
        if (heap_.empty())
            return false;
        Entry e = heap_.top();
        heap_.pop();
        now_ = e.at;
        e.cb();
        return true;
    }

    Tick now() const { return now_; }
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    // Tick of the earliest pending event; only valid when !empty().
    Tick next_tick() const { return heap_.top().at; }

  private:
    struct Entry {
        Tick at;
        std::uint64_t seq;
        Callback cb;
    };
    struct Later {
        bool operator()(const Entry &a, const Entry &b) const {
            if (a.at != b.at)
                return a.at > b.at;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
    Tick now_ = 0;
    std::uint64_t next_seq_ = 0;
};

} // namespace cryosim

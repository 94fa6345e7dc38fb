#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cryosim/errors.hpp"

namespace cryosim {

struct PredictorConfig {
    std::uint32_t btb_entries = 32;
    std::uint32_t ras_entries = 12;
    std::uint32_t predictor_bytes = 16 * 1024;
    std::uint32_t history_table_bytes = 4 * 1024;
    std::uint32_t indirect_entries = 16;
    std::uint32_t counter_bits = 4;
};

struct Prediction {
    bool taken = false;
    std::optional<std::uint64_t> target;
};

// Two-level predictor: a per-pc local history table indexes a shared table
// of saturating counters. Direction state starts weak-not-taken; BTB, RAS
// and the indirect table are direct-mapped by pc bits and start empty.
class BranchPredictor {
  public:
    explicit BranchPredictor(const PredictorConfig &cfg = PredictorConfig{});

    // Side-effect free.
    Prediction predict(std::uint64_t pc, bool is_return = false, bool is_indirect = false) const;

    // Trains the counter selected by the current history, then shifts the
    // history and installs the target in the BTB/indirect table if taken.
    void update(std::uint64_t pc, bool taken, std::uint64_t target);

    // Call/return bookkeeping for the return-address stack. The synthetic
    // trace kinds never exercise these; they exist for direct use.
    void notify_call(std::uint64_t pc, std::uint64_t return_addr);
    void notify_return();

    std::uint32_t counter_max() const { return counter_max_; }
    std::uint32_t table_entries() const { return static_cast<std::uint32_t>(counters_.size()); }

  private:
    struct BtbEntry {
        bool valid = false;
        std::uint64_t pc = 0;
        std::uint64_t target = 0;
    };

    std::size_t counter_index(std::uint64_t pc) const;
    std::size_t history_index(std::uint64_t pc) const;

    PredictorConfig cfg_;
    std::uint32_t counter_max_;
    std::uint32_t taken_threshold_;
    std::vector<std::uint8_t> counters_;
    std::vector<std::uint16_t> local_history_;
    std::vector<BtbEntry> btb_;
    std::vector<BtbEntry> indirect_;
    std::vector<std::uint64_t> ras_;
    std::size_t ras_top_ = 0;
    std::size_t ras_depth_ = 0;
};

} // namespace cryosim

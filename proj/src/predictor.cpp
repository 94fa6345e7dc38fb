#include "cryosim/predictor.hpp"

#include <bit>

namespace cryosim {

BranchPredictor::BranchPredictor(const PredictorConfig &cfg) : cfg_(cfg) {
    if (cfg.counter_bits < 1 || cfg.counter_bits > 8)
        throw ConfigError("predictor: counter_bits must be in 1..8");
    const std::uint64_t entries =
        static_cast<std::uint64_t>(cfg.predictor_bytes) * 8 / cfg.counter_bits;
    if (entries == 0 || !std::has_single_bit(entries))
        throw ConfigError("predictor: table entry count must be a power of two");
    const std::uint64_t hist_entries = static_cast<std::uint64_t>(cfg.history_table_bytes) * 8 / 16;
    if (hist_entries == 0 || !std::has_single_bit(hist_entries))
        throw ConfigError("predictor: history table entry count must be a power of two");
    if (cfg.btb_entries == 0 || cfg.ras_entries == 0 || cfg.indirect_entries == 0)
        throw ConfigError("predictor: structure sizes must be >= 1");

    counter_max_ = (1u << cfg.counter_bits) - 1;
    taken_threshold_ = 1u << (cfg.counter_bits - 1);
    counters_.assign(entries, static_cast<std::uint8_t>(taken_threshold_ - 1)); // weak not-taken
    local_history_.assign(hist_entries, 0);
    btb_.assign(cfg.btb_entries, BtbEntry{});
    indirect_.assign(cfg.indirect_entries, BtbEntry{});
    ras_.assign(cfg.ras_entries, 0);
}

std::size_t BranchPredictor::history_index(std::uint64_t pc) const {
    return (pc >> 2) & (local_history_.size() - 1);
}

std::size_t BranchPredictor::counter_index(std::uint64_t pc) const {
    const std::uint16_t hist = local_history_[history_index(pc)];
    return ((pc >> 2) ^ (static_cast<std::uint64_t>(hist) << 4)) & (counters_.size() - 1);
}

Prediction BranchPredictor::predict(std::uint64_t pc, bool is_return, bool is_indirect) const {
    Prediction p;
    p.taken = counters_[counter_index(pc)] >= taken_threshold_;
    if (is_return) {
        if (ras_depth_ > 0)
            p.target = ras_[(ras_top_ + ras_.size() - 1) % ras_.size()];
        p.taken = true;
        return p;
    }
    if (is_indirect) {
        const BtbEntry &e = indirect_[(pc >> 2) % indirect_.size()];
        if (e.valid && e.pc == pc)
            p.target = e.target;
        p.taken = true;
        return p;
    }
    const BtbEntry &e = btb_[(pc >> 2) % btb_.size()];
    if (e.valid && e.pc == pc)
        p.target = e.target;
    return p;
}

void BranchPredictor::update(std::uint64_t pc, bool taken, std::uint64_t target) {
    std::uint8_t &ctr = counters_[counter_index(pc)];
    if (taken && ctr < counter_max_)
        ++ctr;
    else if (!taken && ctr > 0)
        --ctr;

    std::uint16_t &hist = local_history_[history_index(pc)];
    hist = static_cast<std::uint16_t>((hist << 1) | (taken ? 1 : 0));

    if (taken) {
        BtbEntry &b = btb_[(pc >> 2) % btb_.size()];
        b = BtbEntry{true, pc, target};
        BtbEntry &ind = indirect_[(pc >> 2) % indirect_.size()];
        ind = BtbEntry{true, pc, target};
    }
}

void BranchPredictor::notify_call(std::uint64_t, std::uint64_t return_addr) {
    ras_[ras_top_] = return_addr;
    ras_top_ = (ras_top_ + 1) % ras_.size();
    if (ras_depth_ < ras_.size())
        ++ras_depth_;
}

void BranchPredictor::notify_return() {
    if (ras_depth_ == 0)
        return;
    ras_top_ = (ras_top_ + ras_.size() - 1) % ras_.size();
    --ras_depth_;
}

} // namespace cryosim

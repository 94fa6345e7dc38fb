#include "cryosim/memsys.hpp"

#include <bit>
#include <cmath>

namespace cryosim {

void CacheConfig::validate(const std::string &name) const {
    if (line_size < 8 || !std::has_single_bit(line_size))
        throw ConfigError(name + ": line_size must be a power of two >= 8");
    if (associativity < 1)
        throw ConfigError(name + ": associativity must be >= 1");
    if (size == 0 || size % (static_cast<std::uint64_t>(associativity) * line_size) != 0)
        throw ConfigError(name + ": size must be a multiple of associativity * line_size");
    if (!std::has_single_bit(num_sets()))
        throw ConfigError(name + ": set count must be a power of two");
    if (data_latency < 1)
        throw ConfigError(name + ": data_latency must be >= 1");
    if (mshrs < 1)
        throw ConfigError(name + ": mshrs must be >= 1");
}

CacheLevel::CacheLevel(std::string name, const CacheConfig &cfg, const ClockDomain &dom,
                       EventQueue &queue)
    : name_(std::move(name)), cfg_(cfg), dom_(dom), queue_(queue) {
    cfg_.validate(name_);
    num_sets_ = cfg_.num_sets();
    latency_ticks_ = cycles_to_ticks(dom_, cfg_.data_latency);
    sets_.assign(num_sets_, std::vector<Line>(cfg_.associativity));
}

void CacheLevel::connect(RequestSink *next, std::vector<const ClockDomain *> down_hops) {
    next_ = next;
    down_hops_ = std::move(down_hops);
}

CacheLevel::Line *CacheLevel::find_line(std::uint64_t line) {
    const std::uint64_t tag = line / cfg_.line_size;
    for (Line &l : sets_[set_index(line)])
        if (l.valid && l.tag == tag)
            return &l;
    return nullptr;
}

const CacheLevel::Line *CacheLevel::find_line(std::uint64_t line) const {
    return const_cast<CacheLevel *>(this)->find_line(line);
}

bool CacheLevel::contains(std::uint64_t addr) const { return find_line(line_addr(addr)) != nullptr; }

CacheLevel::Line &CacheLevel::victim_line(std::uint64_t line, std::uint64_t *evicted_addr,
                                          bool *evicted_dirty) {
    auto &set = sets_[set_index(line)];
    Line *victim = nullptr;
    for (Line &l : set) {
        if (!l.valid) {
            victim = &l;
            break;
        }
        if (!victim || l.lru < victim->lru)
            victim = &l;
    }
    if (victim->valid) {
        *evicted_addr = victim->tag * cfg_.line_size;
        *evicted_dirty = victim->dirty;
    } else {
        *evicted_dirty = false;
    }
    return *victim;
}

Tick CacheLevel::forward_arrival(Tick t) const {
    for (const ClockDomain *hop : down_hops_)
        t = next_edge(*hop, t);
    return next_edge(next_->domain(), t);
}

void CacheLevel::ensure_process_scheduled() {
    if (process_scheduled_ || input_.empty())
        return;
    const Tick at = std::max(next_edge(dom_, queue_.now()), next_accept_);
    process_scheduled_ = true;
    queue_.schedule(at, [this] { process_one(); });
}

void CacheLevel::receive_demand(const Request &req) {
    input_.insert(req);
    ensure_process_scheduled();
}

void CacheLevel::process_one() {
    process_scheduled_ = false;
    if (input_.empty())
        return;
    const Tick now = queue_.now();
    const Request req = *input_.begin();
    const std::uint64_t line = line_addr(req.addr);

    if (Line *l = find_line(line)) {
        input_.erase(input_.begin());
        ++counters_.demand_accesses;
        ++counters_.hits;
        counters_.demand_bytes += req.size;
        l->lru = ++lru_clock_;
        if (req.is_store)
            l->dirty = true;
        resolve(req, now + latency_ticks_);
    } else {
        auto mshr = mshrs_.end();
        for (auto it = mshrs_.begin(); it != mshrs_.end(); ++it)
            if (it->first == line) {
                mshr = it;
                break;
            }
        if (mshr != mshrs_.end()) {
            input_.erase(input_.begin());
            ++counters_.demand_accesses;
            ++counters_.mshr_merges;
            counters_.demand_bytes += req.size;
            mshr->second.waiters.push_back(req);
        } else if (mshrs_.size() >= cfg_.mshrs) {
            // All MSHRs busy: stall the head request, retry next edge.
            process_scheduled_ = true;
            queue_.schedule(now + dom_.period, [this] { process_one(); });
            return;
        } else {
            input_.erase(input_.begin());
            ++counters_.demand_accesses;
            ++counters_.misses;
            counters_.demand_bytes += req.size;
            mshrs_.push_back({line, Mshr{{req}}});
            Request fill;
            fill.kind = ReqKind::LineFill;
            fill.addr = line;
            fill.size = cfg_.line_size;
            fill.core_id = req.core_id;
            fill.order = req.order;
            fill.requester = this;
            const Tick forward_at = now + (cfg_.serial_miss_lookup ? latency_ticks_ : 0);
            fill.arrival = forward_arrival(forward_at);
            queue_.schedule(fill.arrival, [sink = next_, fill] { sink->receive_demand(fill); });
        }
    }

    next_accept_ = now + dom_.period;
    if (!input_.empty()) {
        process_scheduled_ = true;
        queue_.schedule(next_accept_, [this] { process_one(); });
    }
}

void CacheLevel::resolve(const Request &req, Tick ready) {
    if (req.kind == ReqKind::LineFill) {
        const Tick at = next_edge(req.requester->domain(), ready);
        queue_.schedule(at, [lvl = req.requester, line = req.addr] { lvl->receive_fill(line); });
    } else {
        req.txn->completion = ready;
    }
}

void CacheLevel::receive_fill(std::uint64_t line) {
    const Tick now = queue_.now();
    counters_.fill_bytes += cfg_.line_size;

    std::uint64_t evicted_addr = 0;
    bool evicted_dirty = false;
    Line &slot = victim_line(line, &evicted_addr, &evicted_dirty);
    if (evicted_dirty)
        next_->receive_writeback(evicted_addr, cfg_.line_size, now);
    slot.valid = true;
    slot.dirty = false;
    slot.tag = line / cfg_.line_size;
    slot.lru = ++lru_clock_;

    for (auto it = mshrs_.begin(); it != mshrs_.end(); ++it) {
        if (it->first != line)
            continue;
        for (const Request &w : it->second.waiters) {
            if (w.is_store)
                slot.dirty = true;
            resolve(w, now);
        }
        mshrs_.erase(it);
        break;
    }
    ensure_process_scheduled();
}

void CacheLevel::receive_writeback(std::uint64_t line, std::uint32_t size, Tick now) {
    if (Line *l = find_line(line)) {
        l->dirty = true;
        return;
    }
    next_->receive_writeback(line, size, now);
}

void CacheLevel::warm_touch(std::uint64_t addr, bool store) {
    const std::uint64_t line = line_addr(addr);
    if (Line *l = find_line(line)) {
        l->lru = ++lru_clock_;
        if (store)
            l->dirty = true;
        return;
    }
    std::uint64_t evicted_addr = 0;
    bool evicted_dirty = false;
    Line &slot = victim_line(line, &evicted_addr, &evicted_dirty);
    if (evicted_dirty)
        next_->warm_writeback(evicted_addr);
    slot.valid = true;
    slot.dirty = store;
    slot.tag = line / cfg_.line_size;
    slot.lru = ++lru_clock_;
}

void CacheLevel::warm_writeback(std::uint64_t line) {
    if (Line *l = find_line(line)) {
        l->dirty = true;
        return;
    }
    next_->warm_writeback(line);
}

MemoryModel::MemoryModel(const MemConfig &cfg, const ClockDomain &dom, EventQueue &queue)
    : cfg_(cfg), dom_(dom), queue_(queue) {
    if (cfg_.access_latency == 0)
        throw ConfigError("memory: access_latency must be > 0");
    if (cfg_.peak_bandwidth <= 0.0)
        throw ConfigError("memory: peak_bandwidth must be > 0");
}

Tick MemoryModel::spacing(std::uint32_t size) const {
    return static_cast<Tick>(
        std::ceil(static_cast<double>(size) * 1e12 / cfg_.peak_bandwidth));
}

void MemoryModel::receive_demand(const Request &req) {
    demand_q_.push_back(req);
    pump(queue_.now());
}

void MemoryModel::receive_writeback(std::uint64_t, std::uint32_t size, Tick now) {
    wb_q_.push_back(size);
    pump(now);
}

void MemoryModel::pump(Tick now) {
    if (service_scheduled_ || (demand_q_.empty() && wb_q_.empty()))
        return;
    service_scheduled_ = true;
    queue_.schedule(std::max(now, busy_until_), [this] { service(); });
}

void MemoryModel::service() {
    service_scheduled_ = false;
    const Tick now = queue_.now();
    if (now < busy_until_) {
        pump(busy_until_);
        return;
    }
    if (!demand_q_.empty()) {
        const Request req = demand_q_.front();
        demand_q_.pop_front();
        ++counters_.reads;
        counters_.bytes += req.size;
        busy_until_ = now + spacing(req.size);
        const Tick completion = now + cfg_.access_latency;
        if (req.kind == ReqKind::LineFill) {
            Tick at = completion;
            for (const ClockDomain *hop : up_hops_)
                at = next_edge(*hop, at);
            at = next_edge(req.requester->domain(), at);
            queue_.schedule(at, [lvl = req.requester, line = req.addr] { lvl->receive_fill(line); });
        } else {
            req.txn->completion = completion;
        }
    } else if (!wb_q_.empty()) {
        const std::uint32_t size = wb_q_.front();
        wb_q_.pop_front();
        ++counters_.writes;
        counters_.bytes += size;
        busy_until_ = now + spacing(size);
    }
    if (!demand_q_.empty() || !wb_q_.empty())
        pump(busy_until_);
}

MemSystem::MemSystem(const CacheConfig &l1i, const CacheConfig &l1d, const CacheConfig &l2,
                     const CacheConfig &l3, const MemConfig &mem, const MemsysDomains &domains,
                     int cores, EventQueue &queue)
    : queue_(queue), domains_(domains) {
    if (cores < 1 || cores > 2)
        throw ConfigError("memsys: cores must be 1 or 2");

    l3_ = std::make_unique<CacheLevel>("l3", l3, domains_.l3, queue_);
    mem_ = std::make_unique<MemoryModel>(mem, domains_.memory, queue_);
    // Requests between L3 and memory hop across the board domain both ways.
    l3_->connect(mem_.get(), {&domains_.board});
    mem_->set_up_hops({&domains_.board});

    for (int c = 0; c < cores; ++c) {
        l1i_.push_back(std::make_unique<CacheLevel>("l1i" + std::to_string(c), l1i, domains_.l1, queue_));
        l1d_.push_back(std::make_unique<CacheLevel>("l1d" + std::to_string(c), l1d, domains_.l1, queue_));
        l2_.push_back(std::make_unique<CacheLevel>("l2" + std::to_string(c), l2, domains_.l2, queue_));
        l1i_[c]->connect(l2_[c].get());
        l1d_[c]->connect(l2_[c].get());
        l2_[c]->connect(l3_.get());
        iports_.push_back(std::make_unique<HierarchyPort>(*this, *l1i_[c], ReqKind::CoreFetch, c));
        dports_.push_back(std::make_unique<HierarchyPort>(*this, *l1d_[c], ReqKind::CoreData, c));
    }
}

TxnPtr MemSystem::HierarchyPort::request(std::uint64_t addr, std::uint32_t size, bool is_store,
                                         Tick now) {
    auto txn = std::make_shared<Transaction>();
    txn->issue_tick = now;
    Request req;
    req.kind = kind_;
    req.addr = addr;
    req.size = size;
    req.is_store = is_store;
    req.core_id = core_id_;
    req.order = sys_.next_order_++;
    req.arrival = next_edge(l1_.domain(), now);
    req.txn = txn;
    sys_.queue_.schedule(req.arrival, [l1 = &l1_, req] { l1->receive_demand(req); });
    return txn;
}

void MemSystem::warm_touch_code(int core, std::uint64_t addr) {
    l1i_[core]->warm_touch(addr, false);
    l2_[core]->warm_touch(addr, false);
    l3_->warm_touch(addr, false);
}

void MemSystem::warm_touch_data(int core, std::uint64_t addr, bool store) {
    l1d_[core]->warm_touch(addr, store);
    l2_[core]->warm_touch(addr, false);
    l3_->warm_touch(addr, false);
}

} // namespace cryosim

#include "cryosim/kernel.hpp"

namespace cryosim {

ClockDomain make_domain(const std::string &name, std::uint64_t frequency_hz) {
    if (frequency_hz == 0)
        throw InvalidParamError("clock domain '" + name + "': frequency must be > 0");
    if (kTicksPerSecond % frequency_hz != 0)
        throw NonIntegralPeriodError("clock domain '" + name + "': " +
                                     std::to_string(frequency_hz) +
                                     " Hz has no integral tick period");
    return ClockDomain{name, frequency_hz, kTicksPerSecond / frequency_hz};
}

Tick cycles_to_ticks(const ClockDomain &domain, std::uint64_t cycles) {
    Tick out = 0;
    if (__builtin_mul_overflow(cycles, domain.period, &out))
        throw OverflowError("simulation horizon exceeded: " + std::to_string(cycles) +
                            " cycles in domain '" + domain.name + "'");
    return out;
}

Tick next_edge(const ClockDomain &domain, Tick t) {
    const Tick p = domain.period;
    const Tick rem = t % p;
    if (rem == 0)
        return t;
    Tick out = 0;
    if (__builtin_add_overflow(t, p - rem, &out))
        throw OverflowError("simulation horizon exceeded in next_edge");
    return out;
}

} // namespace cryosim

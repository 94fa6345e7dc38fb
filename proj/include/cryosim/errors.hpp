#pragma once

#include <stdexcept>
#include <string>

namespace cryosim {

// Base class for all simulator faults. Subclasses map onto CLI exit codes:
// usage/config errors exit 2, I/O and format errors exit 3, simulation
// faults exit 4.
struct SimError : std::runtime_error {
    explicit SimError(const std::string &msg) : std::runtime_error(msg) {}
};

struct NonIntegralPeriodError : SimError {
    using SimError::SimError;
};

struct SchedulePastError : SimError {
    using SimError::SimError;
};

struct OverflowError : SimError {
    using SimError::SimError;
};

struct InvalidParamError : SimError {
    using SimError::SimError;
};

struct IoError : SimError {
    using SimError::SimError;
};

struct FormatError : SimError {
    using SimError::SimError;
};

struct ConfigError : SimError {
    using SimError::SimError;
};

struct DeadlockError : SimError {
    using SimError::SimError;
};

struct MismatchedRunsError : SimError {
    using SimError::SimError;
};

struct BadWeightsError : SimError {
    using SimError::SimError;
};

struct MixedConfigsError : SimError {
    using SimError::SimError;
};

// Internal consistency violation (structural occupancy, counter identities).
struct InvariantError : SimError {
    using SimError::SimError;
};

} // namespace cryosim

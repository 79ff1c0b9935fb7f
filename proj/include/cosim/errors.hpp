#pragma once

#include <stdexcept>
#include <string>

namespace cosim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    using Error::Error;
};

struct DegreeTooHigh : Error {
    using Error::Error;
};

struct ChannelCountMismatch : Error {
    using Error::Error;
};

struct ChannelOutOfRange : Error {
    using Error::Error;
};

struct NonPositiveStep : Error {
    using Error::Error;
};

struct CoincidentTimes : Error {
    using Error::Error;
};

struct CapabilityMissing : Error {
    using Error::Error;
};

struct SolverDiverged : Error {
    using Error::Error;
};

struct OddTermCount : Error {
    using Error::Error;
};

struct UnconnectedInput : Error {
    using Error::Error;
};

struct MultiplyDrivenInput : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

// Wraps a solver/coupling failure with the macro-step time at which it occurred.
struct StepFailed : Error {
    double time;
    StepFailed(const std::string& what, double t)
        : Error(what + " (at t=" + std::to_string(t) + ")"), time(t) {}
};

struct ConfigInvalid : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace cosim

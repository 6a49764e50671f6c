#pragma once

#include <stdexcept>
#include <string>

namespace qosheft {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Event-queue invariants broken (overlapping slots, negative durations).
struct StructuralError : Error {
    using Error::Error;
};

/// Requested interval is not fully inside one idle slot.
struct AllocationError : Error {
    using Error::Error;
};

/// Released interval overlaps time that is already idle.
struct DoubleFreeError : Error {
    using Error::Error;
};

struct LookupError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

/// A task was placed before one of its predecessors (caller bug).
struct PrecedenceError : Error {
    using Error::Error;
};

struct IntegrityError : Error {
    using Error::Error;
};

/// Exhaustive search refused: instance exceeds the oracle's size guard.
struct SearchLimitError : Error {
    using Error::Error;
};

struct GenerationError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

} // namespace qosheft

#pragma once

#include <stdexcept>
#include <string>

namespace decsynth {

enum class ErrorCode {
    InvalidModel,            // violates a well-formedness invariant
    UnknownReference,        // state, event or plant name not found
    ControllabilityConflict, // shared event with inconsistent flags
    AlphabetMismatch,
    AmbiguousOwner,          // restricted event owned by several plants
    OutOfRange,
    EmptySupervisor,
    NotApplicable,
    SizeBoundExceeded,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace decsynth

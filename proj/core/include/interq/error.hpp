#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace interq {

enum class ErrorCode {
    // core-model
    EmptyPlatform,
    DanglingLinkEndpoint,
    InvalidFidelity,
    ClassicalLinkWithQuantumFields,
    InvalidPlatform,
    UnknownModule,
    InvalidJob,
    InvalidFragmentId,
    // partitioner
    OverheadOverflow,
    NoClassicalLink,
    NoQuantumLink,
    // cost-model
    CapacityExceeded,
    NotQuantumLink,
    InfeasibleGroup,
    // scheduler
    UnplaceableUnit,
    UnresolvedPredecessor,
    UnschedulableJob,
    // sim-engine
    DeadlockDetected,
    // metrics
    IncompleteJob,
    ZeroFidelity,
    ZeroMakespan,
    // workload-io
    ParseError,
    DuplicateJobId,
    UnknownPreset,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace interq

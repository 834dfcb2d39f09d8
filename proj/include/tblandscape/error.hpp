#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tbl {

enum class ErrorCode {
    IndexOutOfRange,
    NotApplicable,
    DimensionMismatch,
    OddPeriodicDual,
    AlreadyDual,
    InvalidPotential,
    InvalidGeometry,
    SolverDiverged,
    EigenSolverFailed,
    EmptyWells,
    TooLargeForOracle,
    HypothesisNotMet,
    InvalidAlpha,
    InvalidConfig,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Library error; the code names the failure class, the message adds context.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require_size(std::size_t got, std::size_t expected, std::string_view what) {
    if (got != expected) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": expected " +
                                                      std::to_string(expected) + " entries, got " +
                                                      std::to_string(got));
    }
}

}  // namespace tbl

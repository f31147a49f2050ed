#pragma once

#include <stdexcept>
#include <string>

namespace cakediv {

enum class ErrorKind {
    malformed_interval,   // interval endpoints outside [0,1] or lo > hi
    malformed_valuation,  // negative density, bad breakpoints, mass != 1
    malformed_query,      // negative cut value
    insufficient_measure, // cut value exceeds the measure of the slice
    empty_support,        // restriction onto an empty piece
    bounds,               // player index out of range
    malformed_instance,   // entitlement sum off, non-positive entitlement, ...
    infeasible_instance,  // e.g. empty cake with players present
    no_slack,             // round_up_to_rationals called without strict slack
    resource_limit,       // clone count cap exceeded
    invariant_breach,     // internal protocol invariant failed
    non_termination,      // round guard hit
    infeasible_state,     // unsatisfied player with zero remaining measure
    all_identical,        // strong fairness requested but all measures identical
    separation_too_weak,  // eps/delta system has no usable interior point
    io_error,             // file/schema problems
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

    // true for errors caused by bad input rather than solver state
    bool is_input_error() const {
        switch (kind_) {
        case ErrorKind::malformed_interval:
        case ErrorKind::malformed_valuation:
        case ErrorKind::malformed_query:
        case ErrorKind::malformed_instance:
        case ErrorKind::infeasible_instance:
        case ErrorKind::all_identical:
        case ErrorKind::resource_limit:
        case ErrorKind::io_error:
            return true;
        default:
            return false;
        }
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace cakediv

#pragma once

#include <stdexcept>
#include <string>

namespace codecstream {

// Error taxonomy shared across the toolkit. The CLI maps kinds onto exit
// codes: bad input -> 2, bad configuration -> 3, internal invariant -> 4.
enum class ErrorKind {
    malformed_record,
    non_monotonic_pts,
    dimension_mismatch,
    empty_trace,
    invalid_spec,
    out_of_range,
    mask_too_large,
    empty_ground_truth,
    no_timestamps_found,
    invalid_config,
    io_failure,
    internal,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// Exit codes used by the CLI and documented in the README.
int exit_code_for(ErrorKind kind);

}  // namespace codecstream

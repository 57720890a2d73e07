#pragma once

#include <stdexcept>
#include <string>

namespace cfmm {

enum class ErrorKind {
    invalid_bounds,
    length_mismatch,
    no_bracket,
    zero_mass,
    grid_mismatch,
    nonpositive_time,
    invalid_params,
    insufficient_reserves,
    degenerate_belief,
    truncation_dominated,
    infeasible_linear_term,
    insufficient_samples,
    malformed_input,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a machine-readable failure class alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace cfmm

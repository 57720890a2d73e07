#include "cfmm/error.hpp"

namespace cfmm {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_bounds: return "invalid-bounds";
        case ErrorKind::length_mismatch: return "length-mismatch";
        case ErrorKind::no_bracket: return "no-bracket";
        case ErrorKind::zero_mass: return "zero-mass";
        case ErrorKind::grid_mismatch: return "grid-mismatch";
        case ErrorKind::nonpositive_time: return "nonpositive-time";
        case ErrorKind::invalid_params: return "invalid-params";
        case ErrorKind::insufficient_reserves: return "insufficient-reserves";
        case ErrorKind::degenerate_belief: return "degenerate-belief";
        case ErrorKind::truncation_dominated: return "truncation-dominated";
        case ErrorKind::infeasible_linear_term: return "infeasible-linear-term";
        case ErrorKind::insufficient_samples: return "insufficient-samples";
        case ErrorKind::malformed_input: return "malformed-input";
    }
    return "unknown";
}

}  // namespace cfmm

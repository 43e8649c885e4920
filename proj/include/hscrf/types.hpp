#ifndef HSCRF_TYPES_HPP
#define HSCRF_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hscrf {

// Levels d run 1 (top) .. D (bottom); times 1 .. T; states 1 .. |S^d|.
using Level = int;
using State = int;
using Time  = int;

struct HscrfError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Topology construction/validation failures.
struct TopologyError : HscrfError {
    using HscrfError::HscrfError;
};

// Inputs whose dimensions do not match the model.
struct DimensionMismatch : HscrfError {
    using HscrfError::HscrfError;
};

// Label sets that directly violate the hierarchical constraints.
struct InconsistentLabels : HscrfError {
    using HscrfError::HscrfError;
};

// Constrained decoding found no configuration consistent with the labels.
struct NoConsistentConfiguration : HscrfError {
    using HscrfError::HscrfError;
};

// Scaled inference found a column with no surviving mass (constraints only).
struct ZeroColumnError : HscrfError {
    using HscrfError::HscrfError;
};

struct DataError : HscrfError {
    using HscrfError::HscrfError;
};

struct NumericError : HscrfError {
    using HscrfError::HscrfError;
};

}  // namespace hscrf

#endif

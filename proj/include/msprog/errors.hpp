#pragma once

#include <stdexcept>
#include <string>

namespace msprog {

// Error taxonomy mirrored by the C API status codes and CLI exit codes:
// argument/config -> 2, data degeneracy -> 3, solver failure -> 4,
// composition mismatch -> 5.

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed input files (CSV schema violations, bad JSON).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failures: missing files, unwritable paths.
struct IOError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Degenerate data: empty datasets, single-class labels, features that
// cannot be imputed.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure inside the optimizer.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// f selects a variable that g does not predict.
struct CompositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace msprog

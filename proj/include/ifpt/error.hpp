#pragma once

#include <stdexcept>
#include <string>

namespace ifpt {

/// Invalid user input: bad parameters, malformed files, inconsistent grids.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Failure while evaluating a model: state-space violations, quadrature
/// non-convergence, invalid targets discovered during a run.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ifpt

#pragma once

#include <stdexcept>
#include <string>

namespace qmspec {

/// Invalid parameters or configuration (maps to CLI exit code 2).
struct validation_error : std::invalid_argument {
    explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A scan window contained no root of the closure condition.
struct no_root_error : std::runtime_error {
    explicit no_root_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative solver failed to reach its tolerance.
struct not_converged_error : std::runtime_error {
    explicit not_converged_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Energy-dependent spectrum left its admissible domain (1 + gamma*E <= 0).
struct breakdown_error : std::runtime_error {
    explicit breakdown_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A residual grid ended up with no usable points (all node-excluded).
struct grid_error : std::runtime_error {
    explicit grid_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qmspec

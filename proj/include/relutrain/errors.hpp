#pragma once

#include <stdexcept>
#include <string>

namespace relutrain {

/// A (scheme, architecture) combination the analytic formulas do not cover.
struct unsupported_case_error : std::runtime_error {
    explicit unsupported_case_error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad experiment/CLI configuration.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Input data violating a non-degeneracy precondition (duplicate points etc.).
struct degenerate_data_error : std::runtime_error {
    explicit degenerate_data_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace relutrain

#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace banditreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Thrown when training produces a non-finite value; the CLI maps this to
// exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Config-file problem. line < 0 means the error is not tied to a single line.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what, int line = -1)
        : std::runtime_error(what), line(line) {}
    int line;
};

} // namespace banditreg

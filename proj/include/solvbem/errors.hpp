#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace solvbem {

/// Bad user input: files, configs, meshes, parameter ranges, preconditions.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Evaluation at (or too close to) a kernel singularity.
class SingularEvaluation : public std::runtime_error {
public:
    explicit SingularEvaluation(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterative solver failed to reach tolerance; carries the residual history.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, std::vector<double> history)
        : std::runtime_error(msg), residual_history(std::move(history)) {}

    std::vector<double> residual_history;
};

}  // namespace solvbem

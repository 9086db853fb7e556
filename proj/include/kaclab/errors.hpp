#pragma once

#include <stdexcept>
#include <string>

namespace kaclab {

// Thrown when a forward orbit provably never meets the target set.
struct no_return_error : std::runtime_error {
    explicit no_return_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an evaluation budget runs out before an answer is certain.
// An abstention is never a wrong answer; callers map it to a distinct exit code.
struct abstention_error : std::runtime_error {
    explicit abstention_error(const std::string& what) : std::runtime_error(what) {}
};

// Violated operation precondition (non-sweep-out target, class-breaking tau, ...).
struct precondition_error : std::invalid_argument {
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed or inconsistent experiment configuration; message names the field.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace kaclab

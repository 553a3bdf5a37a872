#pragma once

#include <stdexcept>
#include <string>

namespace sympflow {

/// Malformed textual input: polynomial expressions, config files, CLI values.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A parameter or argument outside the operation's stated domain.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Runtime numeric failure: blow-up, singular denominator, failed search.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sympflow

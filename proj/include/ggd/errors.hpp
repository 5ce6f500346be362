#pragma once

#include <stdexcept>
#include <string>

namespace ggd {

/// A file or serialized payload could not be decoded.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed (non-convergence, non-SPD input, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// The request is well-formed but unsatisfiable for this input
/// (disconnected graph, impossible target size, ...).
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ggd

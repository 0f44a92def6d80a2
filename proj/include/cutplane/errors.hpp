#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cutplane {

/// Base error for all solver-side failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Expression text could not be parsed; offset is the byte position in the input.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation hit an undefined operation (log of nonpositive, division by zero).
/// node() describes the offending subexpression.
class EvalDomainError : public Error {
public:
    EvalDomainError(const std::string& msg, std::string node)
        : Error(msg + " in '" + node + "'"), node_(std::move(node)) {}
    const std::string& node() const { return node_; }

private:
    std::string node_;
};

/// Raised by enumeration-backed operations when the dimension exceeds the limit.
class DimensionTooLarge : public Error {
public:
    DimensionTooLarge(int n, int limit)
        : Error("dimension " + std::to_string(n) + " exceeds enumeration limit " +
                std::to_string(limit)) {}
};

} // namespace cutplane

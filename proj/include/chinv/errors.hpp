#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chinv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live in ambient spaces of different dimension, or an index is out of range.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Malformed vector expression or matrix literal.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// One or more mathematical preconditions of an operation do not hold.
/// Each violated hypothesis is reported by name.
class HypothesisError : public Error {
public:
    explicit HypothesisError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

/// An exhaustive computation would exceed its configured resource cap.
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace chinv

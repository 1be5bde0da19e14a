#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netmh {

/// Malformed input file content. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input data that parses but violates a contract (unknown node, out-of-range week, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace netmh

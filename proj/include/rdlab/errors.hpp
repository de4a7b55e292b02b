#pragma once

#include <stdexcept>
#include <string>

namespace rdlab {

/// Malformed configuration or description files (CLI exit code 2).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failures (CLI exit code 3).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rdlab

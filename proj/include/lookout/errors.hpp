#pragma once

#include <stdexcept>
#include <string>

namespace lookout {

/// Malformed input data (bad rows, unknown tokens, inconsistent files).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Parse failure tied to a specific line of an input stream.
class ParseError : public DataError {
public:
    ParseError(long line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    long line() const { return line_; }

private:
    long line_;
};

/// Invalid arguments or configuration supplied by the caller.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lookout

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cqa {

// Input text rejected by the grammar. Positions are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& what)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// An operation was invoked outside its contract.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A configurable search limit (for example the minimization atom cap) was exceeded.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The repair space of a database is larger than the enumeration cap.
class RepairSpaceTooLarge : public std::runtime_error {
public:
    explicit RepairSpaceTooLarge(std::uint64_t cap)
        : std::runtime_error("repair space exceeds the cap of " + std::to_string(cap) + " repairs"),
          cap_(cap) {}

    std::uint64_t cap() const { return cap_; }

private:
    std::uint64_t cap_;
};

}  // namespace cqa

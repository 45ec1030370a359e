#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fitcert {

// Malformed mask grid, JSON document, or matrix file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Column or row index outside the pattern.
class BoundsError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// An observation set with at most r entries where r+1 are required.
class UndersizedError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Enumeration would exceed the configured budget.
class CapacityError : public std::runtime_error {
public:
    CapacityError(const std::string& what, std::uint64_t cap)
        : std::runtime_error(what + " (enumeration cap " + std::to_string(cap) + ")"), cap_(cap) {}

    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t cap_;
};

// A basis block that must be invertible is numerically singular.
class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rejection sampling ran out of attempts.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The brute-force and matching engines returned different answers.
class EngineDisagreement : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace fitcert

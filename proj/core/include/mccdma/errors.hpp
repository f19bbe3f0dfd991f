#pragma once

#include <stdexcept>
#include <string>

namespace mccdma {

// Sizes that do not fit together: code orders, lane counts, frame lengths.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a function (negative modulus, NaN, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Input that makes the operation meaningless: all-zero LFSR state, zero-power frame.
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedModeError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class StatisticsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mccdma

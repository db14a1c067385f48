#pragma once

#include <stdexcept>
#include <string>

namespace retailsim {

// Scenario or experiment file failed structural / range validation.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A service request arrived for a queue no rostered staff member can serve.
class NoStaffConfiguredError : public std::runtime_error {
public:
    explicit NoStaffConfiguredError(const std::string& what) : std::runtime_error(what) {}
};

// An internal consistency check failed while invariant checking was enabled.
class InvariantViolation : public std::logic_error {
public:
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

// Statistical routine was handed input it cannot produce a finite answer for.
class DegenerateInputError : public std::invalid_argument {
public:
    explicit DegenerateInputError(const std::string& what) : std::invalid_argument(what) {}
};

// Filesystem-level failure while reading or writing run artifacts.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace retailsim

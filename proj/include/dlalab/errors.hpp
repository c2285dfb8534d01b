#pragma once

#include <stdexcept>
#include <string>

namespace dlalab {

// Maps to CLI exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Maps to CLI exit code 3.
struct ResourceCapError : std::runtime_error {
    explicit ResourceCapError(const std::string& what) : std::runtime_error(what) {}
};

// Maps to CLI exit code 4.
struct InvariantError : std::logic_error {
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace dlalab

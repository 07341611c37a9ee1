#pragma once

#include <stdexcept>
#include <string>

namespace mcn {

// Bad input parameters (invalid layer spec, removal fraction, malformed files).
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation undefined for the given arguments (e.g. chains of the r = 0 layer).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Node label not present in a graph.
class lookup_error : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Congruence system without a guaranteed solution (moduli share a factor).
class infeasible_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mcn

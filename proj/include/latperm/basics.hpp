// latperm: exact and stochastic tools for dimer covers, lattice permutations
// and coloured random paths on d-dimensional tori.
//
// SPDX-License-Identifier: MIT
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lp {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Raised when arguments are syntactically valid but outside the supported
// domain of an operation (e.g. an odd side length for model semantics, or a
// lattice too large for exact enumeration).
struct Unsupported : std::invalid_argument {
  explicit Unsupported(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when an internal cross-check fails; indicates a bug, not bad input.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

// Natural-log of a positive rational, computed from the bit lengths of
// numerator and denominator so that huge values never overflow a double.
double log_rat(const Rat& r);

// Exact power with non-negative integer exponent.
Rat pow_rat(const Rat& base, unsigned exp);

}  // namespace lp

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace l5 {

using Rational = boost::multiprecision::cpp_rational;

/// Exact rational for the shortest decimal spelling of `value`, so that a
/// config value of 0.1 becomes 1/10 rather than the nearest binary fraction.
Rational rational_from_decimal(double value);

double to_double(const Rational& value);

/// Smallest integer >= value. `value` must be non-negative.
std::uint64_t ceil_to_u64(const Rational& value);

}  // namespace l5

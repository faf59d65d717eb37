#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

namespace mtn {

/// Exact time in quarter notes. Always in lowest terms with a positive
/// denominator (boost::rational normalizes on every operation).
using RationalTime = boost::rational<std::int64_t>;

/// Arbitrary-precision rational for corpus-level accumulation.
using Exact = boost::multiprecision::cpp_rational;

/// "num/den" in lowest terms; integers are written as "n/1" only when
/// `always_fraction` is set, otherwise as "n".
std::string to_string(const RationalTime& value, bool always_fraction = false);
std::string to_string(const Exact& value);

/// Parses "n", "n/d" or "-n/d". Rejects zero denominators, whitespace,
/// and decimal forms. Returns false on failure.
bool parse_rational(std::string_view text, RationalTime& out);
bool parse_exact(std::string_view text, Exact& out);

Exact to_exact(const RationalTime& value);

/// Decimal rendering with `digits` fractional digits, rounded half away
/// from zero. Exact: no floating point is involved.
std::string to_decimal(const Exact& value, int digits);

double to_double(const Exact& value);

}  // namespace mtn

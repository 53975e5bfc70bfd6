#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace treecut {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "7", "-3", "0.125", "2/3" or "1.5e-2" into an exact rational.
/// Throws Error(ErrorCode::ParseError) on malformed text.
Rational parse_rational(std::string_view text);

/// Always "p/q" (q >= 1), e.g. "0/1", "3/2".
std::string format_rational(const Rational& value);

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

BigInt floor_of(const Rational& r);

/// The fraction with the smallest denominator in the interval between lo and hi.
/// Endpoints are included or excluded per the flags. Requires 0 <= lo < hi
/// (or lo == hi with both endpoints closed).
Rational simplest_between(const Rational& lo, const Rational& hi, bool lo_closed, bool hi_closed);

/// Largest fraction a/b < x with 1 <= b <= max_den, or nullopt when x <= 0.
/// Requires x >= 0 and denominator(x) <= max_den.
std::optional<Rational> farey_predecessor(const Rational& x, const BigInt& max_den);

BigInt lcm_of(const BigInt& a, const BigInt& b);

}  // namespace treecut

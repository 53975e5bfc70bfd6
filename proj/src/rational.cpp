#include "treecut/rational.hpp"

#include <cctype>

#include "treecut/error.hpp"

namespace treecut {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// cpp_int's string constructor reads a leading 0 as octal.
BigInt decimal_int(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return BigInt(std::string{digits});
}

[[noreturn]] void bad_number(std::string_view text) {
  throw Error(ErrorCode::kParseError, "not a rational number: '" + std::string(text) + "'");
}

Rational parse_decimal(std::string_view body, std::string_view original) {
  int exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = body.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) bad_number(original);
    exponent = std::stoi(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    body = body.substr(0, e);
  }
  std::string digits;
  auto dot = body.find('.');
  std::string_view int_part = body.substr(0, dot);
  std::string_view frac_part;
  if (dot != std::string_view::npos) frac_part = body.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) bad_number(original);
  if (!int_part.empty() && !all_digits(int_part)) bad_number(original);
  if (!frac_part.empty() && !all_digits(frac_part)) bad_number(original);
  digits.append(int_part);
  digits.append(frac_part);
  exponent -= static_cast<int>(frac_part.size());

  BigInt mantissa = decimal_int(digits);
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) return Rational(mantissa * ten_pow);
  return Rational(mantissa, ten_pow);
}

Rational simplest_impl(const Rational& lo, const Rational* hi, bool lo_closed, bool hi_closed) {
  BigInt f = floor_of(lo);
  BigInt z = (lo_closed && Rational(f) == lo) ? f : f + 1;
  if (hi == nullptr) return Rational(z);
  if (Rational(z) < *hi || (hi_closed && Rational(z) == *hi)) return Rational(z);

  // No integer inside: the interval sits in [f, f+1]; recurse on reciprocals.
  Rational lo_frac = lo - Rational(f);
  Rational hi_frac = *hi - Rational(f);
  Rational new_lo = 1 / hi_frac;
  if (lo_frac == 0) {
    return Rational(f) + 1 / simplest_impl(new_lo, nullptr, hi_closed, false);
  }
  Rational new_hi = 1 / lo_frac;
  return Rational(f) + 1 / simplest_impl(new_lo, &new_hi, hi_closed, lo_closed);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad_number(text);

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_number(text);
    BigInt d = decimal_int(den);
    if (d == 0) bad_number(text);
    value = Rational(decimal_int(num), d);
  } else {
    value = parse_decimal(s, text);
  }
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& value) {
  return numerator_of(value).str() + "/" + denominator_of(value).str();
}

BigInt floor_of(const Rational& r) {
  BigInt n = numerator_of(r);
  BigInt d = denominator_of(r);
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

Rational simplest_between(const Rational& lo, const Rational& hi, bool lo_closed, bool hi_closed) {
  if (lo < 0 || hi < lo || (lo == hi && !(lo_closed && hi_closed))) {
    throw Error(ErrorCode::kInvalidProblem, "simplest_between: empty or negative interval");
  }
  return simplest_impl(lo, &hi, lo_closed, hi_closed);
}

std::optional<Rational> farey_predecessor(const Rational& x, const BigInt& max_den) {
  if (x <= 0) return std::nullopt;
  BigInt p = numerator_of(x);
  BigInt q = denominator_of(x);
  if (q > max_den) {
    throw Error(ErrorCode::kInvalidProblem, "farey_predecessor: denominator exceeds bound");
  }
  // Neighbours a/b < p/q in the Farey sequence satisfy p*b - q*a = 1.
  BigInt b0 = 0;
  {
    BigInt old_r = p % q, r = q, old_s = 1, s = 0;
    while (r != 0) {
      BigInt quot = old_r / r;
      BigInt t = old_r - quot * r;
      old_r = r;
      r = t;
      t = old_s - quot * s;
      old_s = s;
      s = t;
    }
    // old_r == gcd == 1 when q > 1; old_s is p^{-1} mod q.
    b0 = old_s % q;
    if (b0 < 0) b0 += q;
  }
  if (b0 == 0) b0 = q;
  BigInt b = b0 + q * ((max_den - b0) / q);
  BigInt a = (p * b - 1) / q;
  return Rational(a, b);
}

BigInt lcm_of(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotATree: return "NotATree";
    case ErrorCode::kNonPositiveVertexWeight: return "NonPositiveVertexWeight";
    case ErrorCode::kNegativeValue: return "NegativeValue";
    case ErrorCode::kUnknownVertexId: return "UnknownVertexId";
    case ErrorCode::kDuplicateVertexId: return "DuplicateVertexId";
    case ErrorCode::kRootHasNoParentEdge: return "RootHasNoParentEdge";
    case ErrorCode::kInvalidProblem: return "InvalidProblem";
    case ErrorCode::kTableMismatch: return "TableMismatch";
    case ErrorCode::kEmptyPart: return "EmptyPart";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kPrecollision: return "PrecollisionError";
    case ErrorCode::kNotForestAfterDeletion: return "NotForestAfterDeletion";
    case ErrorCode::kLambdaTooSmall: return "LambdaTooSmall";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
  }
  return "Unknown";
}

}  // namespace treecut

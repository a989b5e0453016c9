#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace warplab {

namespace mp = boost::multiprecision;

/// 64-bit integer that throws std::overflow_error instead of wrapping.
using CheckedInt = mp::number<
    mp::cpp_int_backend<64, 64, mp::signed_magnitude, mp::checked, void>>;

/// Exact rational scalar used by all metric computations.
/// Magnitudes in this artifact are tiny; the checked backend turns any
/// unexpected overflow into an exception rather than a wrong answer.
using Rat = boost::rational<CheckedInt>;

/// Arbitrary-precision integers/rationals, used only where values can
/// genuinely grow (L^d sandwich comparisons).
using BigInt = mp::cpp_int;
using BigRat = mp::cpp_rational;

inline Rat rat(long long num, long long den = 1) {
  return Rat(CheckedInt(num), CheckedInt(den));
}

inline long long to_ll(const CheckedInt& v) {
  return v.convert_to<long long>();
}

inline double to_double(const Rat& r) {
  return r.numerator().convert_to<double>() /
         r.denominator().convert_to<double>();
}

inline BigRat to_big(const Rat& r) {
  return BigRat(BigInt(to_ll(r.numerator())), BigInt(to_ll(r.denominator())));
}

inline Rat rat_abs(const Rat& r) { return r < Rat(0) ? -r : r; }

inline const Rat& rat_min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// Largest integer <= r.
inline long long rat_floor(const Rat& r) {
  CheckedInt q = r.numerator() / r.denominator();
  if (r.numerator() < 0 && q * r.denominator() != r.numerator()) q -= 1;
  return to_ll(q);
}

inline long long rat_ceil(const Rat& r) { return -rat_floor(-r); }

/// Renders as "p" or "p/q"; the exact-mode CSV/JSON wire format.
inline std::string rat_string(const Rat& r) {
  std::string s = r.numerator().str();
  if (r.denominator() != 1) s += "/" + r.denominator().str();
  return s;
}

/// Parses "p", "p/q" or a plain decimal like "2.5".
inline Rat parse_rat(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("cannot parse rational: '" +
                                std::string(text) + "'");
  };
  if (text.empty()) fail();
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    CheckedInt num(std::string(text.substr(0, slash)));
    CheckedInt den(std::string(text.substr(slash + 1)));
    if (den == 0) fail();
    return Rat(num, den);
  }
  auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    std::string digits = std::string(text.substr(0, dot)) +
                         std::string(text.substr(dot + 1));
    CheckedInt den = 1;
    for (size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return Rat(CheckedInt(digits), den);
  }
  return Rat(CheckedInt(std::string(text)), CheckedInt(1));
}

inline CheckedInt checked_lcm(const CheckedInt& a, const CheckedInt& b) {
  CheckedInt g = boost::integer::gcd(a, b);
  return (a / g) * b;
}

}  // namespace warplab

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "lauricella/error.hpp"

namespace lauricella {

// mpq_class keeps numerator and denominator coprime with a positive
// denominator after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "p" or "p/q" (optional sign, base 10).
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.erase(t.begin());
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
  };
  trim(s);
  if (s.empty()) throw Error(Errc::ParseError, "empty rational literal");
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    std::size_t i = 0;
    if (i < t.size() && (t[i] == '-' || t[i] == '+')) ++i;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  trim(num);
  trim(den);
  if (!num.empty() && num[0] == '+') num.erase(num.begin());
  if (!valid_int(num) || !valid_int(den)) throw Error(Errc::ParseError, "bad rational literal '" + s + "'");
  Integer d(den);
  if (d == 0) throw Error(Errc::ParseError, "zero denominator in '" + s + "'");
  Rational q{Integer(num), d};
  q.canonicalize();
  return q;
}

inline std::optional<Integer> exact_isqrt(const Integer& n) {
  if (n < 0) return std::nullopt;
  Integer r = sqrt(n);
  if (r * r != n) return std::nullopt;
  return r;
}

/// Square root in Q when it exists.
inline std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  auto n = exact_isqrt(q.get_num());
  auto d = exact_isqrt(q.get_den());
  if (!n || !d) return std::nullopt;
  Rational r{*n, *d};
  r.canonicalize();
  return r;
}

inline long double to_long_double(const Rational& q) {
  mpf_class f(q, 192);
  double hi = f.get_d();
  mpf_class rest = f - mpf_class(hi, 192);
  return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

// Arithmetic modulo the Mersenne prime 2^61 - 1, used for probabilistic
// zero tests before exact work.
namespace modp {

inline constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t reduce128(unsigned __int128 x) {
  std::uint64_t lo = static_cast<std::uint64_t>(x & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
  std::uint64_t r = lo + hi;
  if (r >= kPrime) r -= kPrime;
  return r;
}
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  return reduce128(static_cast<unsigned __int128>(a) * b);
}
inline std::uint64_t add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  if (r >= kPrime) r -= kPrime;
  return r;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }
inline std::uint64_t pow(std::uint64_t base, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}
inline std::uint64_t inv(std::uint64_t a) { return pow(a, kPrime - 2); }

/// Image of q in Z/p; nullopt when the denominator vanishes mod p.
inline std::optional<std::uint64_t> from_rational(const Rational& q) {
  std::uint64_t n = mpz_fdiv_ui(q.get_num_mpz_t(), kPrime);
  std::uint64_t d = mpz_fdiv_ui(q.get_den_mpz_t(), kPrime);
  if (d == 0) return std::nullopt;
  return d == 1 ? n : mul(n, inv(d));
}

/// splitmix64; deterministic stream for sample points.
struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t element() { return next() % kPrime; }
};

}  // namespace modp

}  // namespace lauricella

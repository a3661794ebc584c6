#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace heisen {

/// Exact rational scalar over 64-bit integers, always kept normalized
/// (gcd 1, positive denominator). Intermediate products go through
/// 128-bit arithmetic; results that do not fit back into 64 bits throw.
///
/// The exact path backs the floating path as an oracle: IET data given
/// as "p/q" strings is iterated without rounding, with all denominators
/// divisors of a fixed lcm, so magnitudes stay small.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  static Rational parse(std::string_view s);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double toDouble() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  bool isZero() const { return num_ == 0; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
    __int128 d = i128(a.den_) * b.den_;
    return fromWide(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    __int128 n = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
    __int128 d = i128(a.den_) * b.den_;
    return fromWide(n, d);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return fromWide(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return fromWide(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_, Raw{}); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return !(b < a);
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return !(a < b);
  }

  friend Rational abs(const Rational& a) {
    return a.num_ < 0 ? -a : a;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  struct Raw {};
  Rational(std::int64_t n, std::int64_t d, Raw) : num_(n), den_(d) {}

  static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

  static Rational fromWide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
    if (n > lim || n < -lim || d > lim)
      throw std::overflow_error("Rational: 64-bit overflow");
    return Rational(static_cast<std::int64_t>(n),
                    static_cast<std::int64_t>(d), Raw{});
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }

  void normalize() {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
  }

  std::int64_t num_;
  std::int64_t den_;
};

namespace rational_detail {
/// Signed decimal digit run covering the whole token; rejects any other
/// character (in particular exponents, which belong to the floating path).
inline std::int64_t strictInt(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("Rational: empty integer");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("Rational: sign only");
  __int128 v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw std::invalid_argument("Rational: non-digit in integer");
    v = v * 10 + (s[i] - '0');
    if (v > static_cast<__int128>(INT64_MAX))
      throw std::overflow_error("Rational: integer literal too large");
  }
  return (s[0] == '-') ? -static_cast<std::int64_t>(v)
                       : static_cast<std::int64_t>(v);
}
}  // namespace rational_detail

/// Accepts "p/q", plain integers, and finite decimals ("0.4" -> 2/5).
/// The whole token must match; anything else (exponents, stray text) throws.
inline Rational Rational::parse(std::string_view s) {
  using rational_detail::strictInt;
  if (s.empty()) throw std::invalid_argument("Rational: empty literal");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    return Rational(strictInt(s.substr(0, slash)), strictInt(s.substr(slash + 1)));
  }
  auto dot = s.find('.');
  if (dot == std::string_view::npos) return Rational(strictInt(s));

  std::string_view digits = s.substr(0, dot);
  std::string_view frac = s.substr(dot + 1);
  if (digits.empty() && frac.empty())
    throw std::invalid_argument("Rational: lone dot");
  const bool neg = !digits.empty() && digits[0] == '-';
  std::int64_t den = 1;
  for (char c : frac) {
    if (c < '0' || c > '9')
      throw std::invalid_argument("Rational: non-digit in fraction part");
    if (den > INT64_MAX / 10)
      throw std::overflow_error("Rational: decimal too long");
    den *= 10;
  }
  const std::int64_t whole =
      (digits.empty() || digits == "-" || digits == "+") ? 0 : strictInt(digits);
  const std::int64_t part = frac.empty() ? 0 : strictInt(frac);
  __int128 n = static_cast<__int128>(whole) * den +
               (neg ? -static_cast<__int128>(part) : static_cast<__int128>(part));
  if (n > INT64_MAX || n < -static_cast<__int128>(INT64_MAX))
    throw std::overflow_error("Rational: decimal too long");
  return Rational(static_cast<std::int64_t>(n), den);
}

}  // namespace heisen

namespace Eigen {

// Minimal scalar traits so Rational vectors/matrices work as containers
// with generic products and sums. No decompositions are run on them.
template <>
struct NumTraits<heisen::Rational> {
  using Real = heisen::Rational;
  using NonInteger = heisen::Rational;
  using Literal = heisen::Rational;
  using Nested = heisen::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 6,
    MulCost = 8,
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 18; }
};

}  // namespace Eigen

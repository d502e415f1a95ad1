#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace lcc {

/// Exact non-negative-or-signed fraction with 64-bit parts, always reduced.
/// Arithmetic goes through 128-bit intermediates and throws std::overflow_error
/// if the reduced result does not fit.
class Rational {
public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value), den_(1) {} // NOLINT implicit
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  Rational operator+(const Rational &o) const;
  Rational operator-(const Rational &o) const;
  Rational operator*(const Rational &o) const;
  Rational operator/(const Rational &o) const;
  Rational &operator+=(const Rational &o) { return *this = *this + o; }
  Rational &operator-=(const Rational &o) { return *this = *this - o; }
  Rational &operator*=(const Rational &o) { return *this = *this * o; }

  bool operator==(const Rational &o) const { return num_ == o.num_ && den_ == o.den_; }
  std::strong_ordering operator<=>(const Rational &o) const;

  /// Parses "p/q" or an integer.
  static Rational parse(const std::string &text);

private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

} // namespace lcc

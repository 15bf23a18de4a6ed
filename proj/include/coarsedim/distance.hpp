#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "coarsedim/rational.hpp"

namespace coarsedim {

// Raised when an operation would leave exact arithmetic, e.g. the sum of two
// irrational Euclidean distances.
class InexactDistance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A nonnegative exact distance or scale parameter.
//
// Three forms are representable:
//   * a rational value,
//   * the square root of a rational (Euclidean distances between lattice
//     points), normalized to a rational whenever the root is exact,
//   * infinity, used as a scale parameter meaning "no constraint".
//
// Ordering is total and exact. Arithmetic that cannot stay exact throws
// InexactDistance.
class Distance {
 public:
  constexpr Distance() noexcept = default;
  Distance(std::int64_t value);  // NOLINT(implicit)
  Distance(const Rational& value);  // NOLINT(implicit)

  static Distance infinity() noexcept;
  static Distance sqrt_of(const Rational& square);

  // Accepts integers, "p/q", "sqrt(p/q)" and "inf".
  static Distance parse(std::string_view text);

  [[nodiscard]] bool is_infinite() const noexcept { return kind_ == Kind::kInfinite; }
  [[nodiscard]] bool is_finite() const noexcept { return kind_ != Kind::kInfinite; }
  [[nodiscard]] bool is_rational() const noexcept { return kind_ == Kind::kRational; }
  [[nodiscard]] bool is_zero() const noexcept { return kind_ == Kind::kRational && value_.is_zero(); }

  // Rational value; throws InexactDistance for irrational or infinite values.
  [[nodiscard]] const Rational& rational() const;
  // Exact square of the distance; throws for infinity.
  [[nodiscard]] Rational square() const;

  // Largest integer k with k <= *this. Throws for infinity.
  [[nodiscard]] std::int64_t floor() const;
  // Smallest integer k with k >= *this. Throws for infinity.
  [[nodiscard]] std::int64_t ceil() const;

  [[nodiscard]] double to_double() const noexcept;
  [[nodiscard]] std::string str() const;

  Distance& operator+=(const Distance& rhs);
  friend Distance operator+(Distance lhs, const Distance& rhs) { return lhs += rhs; }
  // Requires lhs >= rhs; the result must stay nonnegative.
  friend Distance operator-(const Distance& lhs, const Distance& rhs);
  friend Distance operator*(const Rational& factor, const Distance& d);
  friend Distance operator*(const Distance& d, const Rational& factor) { return factor * d; }

  friend bool operator==(const Distance& a, const Distance& b) noexcept {
    return a.kind_ == b.kind_ && (a.kind_ == Kind::kInfinite || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const Distance& a, const Distance& b) noexcept;

 private:
  enum class Kind : std::uint8_t { kRational, kSqrt, kInfinite };

  Kind kind_ = Kind::kRational;
  // For kSqrt this holds the square, which is never a perfect square.
  Rational value_;
};

std::ostream& operator<<(std::ostream& os, const Distance& d);

inline const Distance& max(const Distance& a, const Distance& b) { return a < b ? b : a; }
inline const Distance& min(const Distance& a, const Distance& b) { return b < a ? b : a; }

}  // namespace coarsedim

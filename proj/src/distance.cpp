#include "coarsedim/distance.hpp"

#include <cmath>
#include <ostream>

namespace coarsedim {

Distance::Distance(std::int64_t value) : Distance(Rational(value)) {}

Distance::Distance(const Rational& value) : value_(value) {
  if (value.is_negative()) throw std::domain_error("negative distance " + value.str());
}

Distance Distance::infinity() noexcept {
  Distance d;
  d.kind_ = Kind::kInfinite;
  return d;
}

Distance Distance::sqrt_of(const Rational& square) {
  if (square.is_negative()) throw std::domain_error("square root of negative " + square.str());
  Rational root;
  if (exact_sqrt(square, root)) return Distance(root);
  Distance d;
  d.kind_ = Kind::kSqrt;
  d.value_ = square;
  return d;
}

Distance Distance::parse(std::string_view text) {
  if (text == "inf" || text == "infinity") return infinity();
  if (text.starts_with("sqrt(") && text.ends_with(")")) {
    return sqrt_of(Rational::parse(text.substr(5, text.size() - 6)));
  }
  return Distance(Rational::parse(text));
}

const Rational& Distance::rational() const {
  if (kind_ != Kind::kRational) throw InexactDistance("distance " + str() + " is not rational");
  return value_;
}

Rational Distance::square() const {
  switch (kind_) {
    case Kind::kRational:
      return value_ * value_;
    case Kind::kSqrt:
      return value_;
    case Kind::kInfinite:
      break;
  }
  throw InexactDistance("square of infinite distance");
}

std::int64_t Distance::floor() const {
  switch (kind_) {
    case Kind::kRational:
      return value_.floor();
    case Kind::kSqrt: {
      // largest k with k^2 <= value_
      auto k = static_cast<std::int64_t>(std::floor(std::sqrt(value_.to_double())));
      while (k > 0 && Rational(k) * Rational(k) > value_) --k;
      while (Rational(k + 1) * Rational(k + 1) <= value_) ++k;
      return k;
    }
    case Kind::kInfinite:
      break;
  }
  throw InexactDistance("floor of infinite distance");
}

std::int64_t Distance::ceil() const {
  if (kind_ == Kind::kSqrt) return floor() + 1;  // never an exact square
  if (kind_ == Kind::kRational) return value_.ceil();
  throw InexactDistance("ceil of infinite distance");
}

double Distance::to_double() const noexcept {
  switch (kind_) {
    case Kind::kRational:
      return value_.to_double();
    case Kind::kSqrt:
      return std::sqrt(value_.to_double());
    case Kind::kInfinite:
      break;
  }
  return HUGE_VAL;
}

std::string Distance::str() const {
  switch (kind_) {
    case Kind::kRational:
      return value_.str();
    case Kind::kSqrt:
      return "sqrt(" + value_.str() + ")";
    case Kind::kInfinite:
      break;
  }
  return "inf";
}

Distance& Distance::operator+=(const Distance& rhs) {
  if (kind_ == Kind::kInfinite || rhs.kind_ == Kind::kInfinite) {
    *this = infinity();
  } else if (kind_ == Kind::kRational && rhs.kind_ == Kind::kRational) {
    value_ += rhs.value_;
  } else if (rhs.is_zero()) {
    // unchanged
  } else if (is_zero()) {
    *this = rhs;
  } else if (kind_ == Kind::kSqrt && rhs.kind_ == Kind::kSqrt && value_ == rhs.value_) {
    *this = sqrt_of(Rational(4) * value_);
  } else {
    throw InexactDistance("sum " + str() + " + " + rhs.str() + " is not exact");
  }
  return *this;
}

Distance operator-(const Distance& lhs, const Distance& rhs) {
  if (rhs.is_infinite()) throw std::domain_error("subtracting an infinite distance");
  if (lhs.is_infinite()) return lhs;
  if (rhs.is_zero()) return lhs;
  if (lhs.is_rational() && rhs.is_rational()) return Distance(lhs.value_ - rhs.value_);
  if (lhs == rhs) return Distance(0);
  throw InexactDistance("difference " + lhs.str() + " - " + rhs.str() + " is not exact");
}

Distance operator*(const Rational& factor, const Distance& d) {
  if (factor.is_negative()) throw std::domain_error("negative scale factor " + factor.str());
  if (d.is_infinite()) return factor.is_zero() ? Distance(0) : d;
  if (d.is_rational()) return Distance(factor * d.value_);
  return Distance::sqrt_of(factor * factor * d.value_);
}

std::strong_ordering operator<=>(const Distance& a, const Distance& b) noexcept {
  using K = Distance::Kind;
  if (a.kind_ == K::kInfinite || b.kind_ == K::kInfinite) {
    if (a.kind_ == b.kind_) return std::strong_ordering::equal;
    return a.kind_ == K::kInfinite ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (a.kind_ == K::kRational && b.kind_ == K::kRational) return a.value_ <=> b.value_;
  // both nonnegative: compare squares
  const Rational sa = a.kind_ == K::kSqrt ? a.value_ : a.value_ * a.value_;
  const Rational sb = b.kind_ == K::kSqrt ? b.value_ : b.value_ * b.value_;
  return sa <=> sb;
}

std::ostream& operator<<(std::ostream& os, const Distance& d) { return os << d.str(); }

}  // namespace coarsedim

#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vpoem {

/// Exact non-negative fraction. Scores are accumulated with these so that
/// boundary values such as 9/10 compare exactly against thresholds.
class Ratio {
 public:
  constexpr Ratio() = default;
  constexpr Ratio(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {  // NOLINT
    if (den_ == 0) throw std::domain_error("Ratio with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const auto g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }

  /// Correctly rounded while numerator and denominator stay below 2^53.
  constexpr double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend constexpr Ratio operator+(const Ratio& a, const Ratio& b) {
    const auto g = std::gcd(a.den_, b.den_);
    return Ratio(a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_);
  }
  friend constexpr Ratio operator*(const Ratio& a, const Ratio& b) {
    return Ratio(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend constexpr Ratio operator/(const Ratio& a, const Ratio& b) {
    return Ratio(a.num_ * b.den_, a.den_ * b.num_);
  }
  Ratio& operator+=(const Ratio& other) { return *this = *this + other; }

  friend constexpr bool operator==(const Ratio&, const Ratio&) = default;
  friend constexpr std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace vpoem

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bdlab {

/// Bad arguments or configuration supplied by a caller (CLI exit code 2).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Arguments outside the mathematical domain of a bound or inequality.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Integer extended by a minus-infinity sentinel. Heights and LPP values are
/// exact counts; no floating-point infinity is ever mixed in.
class ExtInt {
 public:
  using value_type = std::int64_t;

  constexpr ExtInt() = default;
  constexpr ExtInt(value_type v) : v_(v) {}  // NOLINT(implicit)

  static constexpr ExtInt neg_inf() { return ExtInt(kNegInf, Tag{}); }

  [[nodiscard]] constexpr bool is_neg_inf() const { return v_ == kNegInf; }
  [[nodiscard]] constexpr bool is_finite() const { return v_ != kNegInf; }

  /// Finite value; throws on the sentinel.
  [[nodiscard]] value_type value() const {
    if (is_neg_inf()) throw std::logic_error("ExtInt: value() on -inf");
    return v_;
  }
  [[nodiscard]] constexpr value_type raw() const { return v_; }

  friend constexpr ExtInt operator+(ExtInt a, ExtInt b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return neg_inf();
    return ExtInt(a.v_ + b.v_);
  }
  friend constexpr ExtInt operator+(ExtInt a, value_type b) { return a + ExtInt(b); }

  friend constexpr bool operator==(ExtInt a, ExtInt b) = default;
  friend constexpr auto operator<=>(ExtInt a, ExtInt b) { return a.v_ <=> b.v_; }

  friend constexpr ExtInt max(ExtInt a, ExtInt b) { return a < b ? b : a; }
  friend constexpr ExtInt min(ExtInt a, ExtInt b) { return a < b ? a : b; }

  [[nodiscard]] std::string str() const {
    return is_neg_inf() ? std::string("-inf") : std::to_string(v_);
  }
  friend std::ostream& operator<<(std::ostream& os, ExtInt x) { return os << x.str(); }

 private:
  struct Tag {};
  static constexpr value_type kNegInf = std::numeric_limits<value_type>::min();
  constexpr ExtInt(value_type v, Tag) : v_(v) {}

  value_type v_ = 0;
};

}  // namespace bdlab

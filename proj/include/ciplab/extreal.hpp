#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ciplab/errors.hpp"

namespace cip {

/// A value in R u {+inf, -inf}. No NaN state is representable: finite() rejects
/// non-finite doubles and overflowing sums saturate to the corresponding infinity.
/// Total order: -inf < any finite < +inf.
class ExtReal {
 public:
  ExtReal() : kind_(Kind::Fin), v_(0.0) {}

  static ExtReal finite(double v) {
    if (!std::isfinite(v)) throw Error("ExtReal::finite requires a finite double");
    return ExtReal(Kind::Fin, v);
  }
  static ExtReal plus_inf() { return ExtReal(Kind::Pos, 0.0); }
  static ExtReal minus_inf() { return ExtReal(Kind::Neg, 0.0); }

  bool is_finite() const { return kind_ == Kind::Fin; }
  bool is_plus_inf() const { return kind_ == Kind::Pos; }
  bool is_minus_inf() const { return kind_ == Kind::Neg; }

  /// Finite payload; only meaningful when is_finite().
  double value() const {
    if (!is_finite()) throw Error("ExtReal::value on non-finite value");
    return v_;
  }

  /// Lossy view for numeric work: +-inf map to +-HUGE_VAL.
  double as_double() const {
    switch (kind_) {
      case Kind::Neg: return -HUGE_VAL;
      case Kind::Pos: return HUGE_VAL;
      default: return v_;
    }
  }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::Fin || a.v_ == b.v_;
  }
  friend std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    auto rank = [](Kind k) { return k == Kind::Neg ? 0 : (k == Kind::Fin ? 1 : 2); };
    if (rank(a.kind_) != rank(b.kind_)) return rank(a.kind_) <=> rank(b.kind_);
    if (a.kind_ != Kind::Fin) return std::strong_ordering::equal;
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const {
    if (is_plus_inf()) return "+inf";
    if (is_minus_inf()) return "-inf";
    return std::to_string(v_);
  }

 private:
  enum class Kind : std::uint8_t { Neg, Fin, Pos };
  ExtReal(Kind k, double v) : kind_(k), v_(v) {}
  Kind kind_;
  double v_;
};

/// a + b under the proper-function conventions. (+inf) + (-inf) is a hard error.
inline ExtReal ext_add(const ExtReal& a, const ExtReal& b) {
  if ((a.is_plus_inf() && b.is_minus_inf()) || (a.is_minus_inf() && b.is_plus_inf()))
    throw IndeterminateSum();
  if (a.is_plus_inf() || b.is_plus_inf()) return ExtReal::plus_inf();
  if (a.is_minus_inf() || b.is_minus_inf()) return ExtReal::minus_inf();
  double s = a.value() + b.value();
  if (!std::isfinite(s)) return s > 0 ? ExtReal::plus_inf() : ExtReal::minus_inf();
  return ExtReal::finite(s);
}

/// c * a for strictly positive c. Zero is rejected: the support convention drops
/// zero-weight terms one level up, it never multiplies them.
inline ExtReal ext_scale_pos(double c, const ExtReal& a) {
  if (!(c > 0.0)) throw NonPositiveScale(c);
  if (!a.is_finite()) return a;
  double s = c * a.value();
  if (!std::isfinite(s)) return s > 0 ? ExtReal::plus_inf() : ExtReal::minus_inf();
  return ExtReal::finite(s);
}

/// Maximum of a non-empty sequence under the total order.
inline ExtReal ext_sup(std::span<const ExtReal> values) {
  if (values.empty()) throw EmptySequence();
  ExtReal best = values[0];
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > best) best = values[i];
  return best;
}

inline ExtReal ext_sup(const std::vector<ExtReal>& values) {
  return ext_sup(std::span<const ExtReal>(values));
}

}  // namespace cip

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ciplab/expr.hpp"

namespace cip {

/// Scalar coefficient as a function of the integer family parameter t:
/// value(t) = c0 + lin * t + recip / t.
struct ScalarOfT {
  double c0 = 0.0;
  double lin = 0.0;
  double recip = 0.0;
  double at(long t) const { return c0 + lin * static_cast<double>(t) + recip / static_cast<double>(t); }
  bool is_constant() const { return lin == 0.0 && recip == 0.0; }
  friend bool operator==(const ScalarOfT&, const ScalarOfT&) = default;
};

/// f_t(x) = sum_i coeffs[i](t) * x_i + offset(t), affine in x for every t.
struct AffineTemplate {
  std::vector<ScalarOfT> coeffs;
  ScalarOfT offset;

  Expr instantiate(long t) const {
    std::vector<double> a(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) a[i] = coeffs[i].at(t);
    return affine(std::move(a), offset.at(t));
  }

  /// Fast path: evaluate f_t(x) for a whole range of t without building Exprs.
  /// Returns (A, B, C) with f_t(x) = A + B*t + C/t.
  void collapse(std::span<const double> x, double& A, double& B, double& C) const {
    A = offset.c0;
    B = offset.lin;
    C = offset.recip;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      A += coeffs[i].c0 * x[i];
      B += coeffs[i].lin * x[i];
      C += coeffs[i].recip * x[i];
    }
  }

  friend bool operator==(const AffineTemplate&, const AffineTemplate&) = default;
};

struct FamilyMember {
  std::string label;
  Expr expr;
  friend bool operator==(const FamilyMember&, const FamilyMember&) = default;
};

/// Constraint family {f_t : t in T}. Indices are 1-based integers: explicit
/// members occupy 1..m; a parametric family continues with an affine tail
/// template for t = m+1, m+2, ... (optionally bounded by tail_end).
/// sup_expr, when present, is a certified closed form of sup_t f_t.
class IndexFamily {
 public:
  static IndexFamily finite(std::vector<FamilyMember> members) {
    if (members.empty()) throw SchemaError("constraints", "finite family must be non-empty");
    IndexFamily f;
    f.head_ = std::move(members);
    f.parametric_ = false;
    return f;
  }

  static IndexFamily parametric(std::vector<FamilyMember> head, AffineTemplate tail,
                                std::optional<long> tail_end = std::nullopt,
                                std::optional<Expr> sup_expr = std::nullopt) {
    IndexFamily f;
    f.head_ = std::move(head);
    f.tail_ = std::move(tail);
    f.tail_end_ = tail_end;
    f.sup_expr_ = std::move(sup_expr);
    f.parametric_ = true;
    long start = f.tail_start();
    if (tail_end && *tail_end < start)
      throw SchemaError("constraints", "tail_end precedes tail start");
    return f;
  }

  bool is_parametric() const { return parametric_; }
  /// True when every index can be enumerated (finite, or bounded tail).
  bool is_enumerable() const { return !parametric_ || tail_end_.has_value(); }
  const std::vector<FamilyMember>& head() const { return head_; }
  long tail_start() const { return static_cast<long>(head_.size()) + 1; }
  const std::optional<long>& tail_end() const { return tail_end_; }
  const AffineTemplate& tail() const { return tail_; }
  const std::optional<Expr>& sup_expr() const { return sup_expr_; }

  bool contains(long t) const {
    if (t < 1) return false;
    if (t <= static_cast<long>(head_.size())) return true;
    if (!parametric_) return false;
    return !tail_end_ || t <= *tail_end_;
  }

  Expr member(long t) const {
    if (!contains(t)) throw SchemaError("family", "index " + std::to_string(t) + " not in T");
    if (t <= static_cast<long>(head_.size())) return head_[static_cast<std::size_t>(t) - 1].expr;
    return tail_.instantiate(t);
  }

  std::string label(long t) const {
    if (t <= static_cast<long>(head_.size()) && !head_[static_cast<std::size_t>(t) - 1].label.empty())
      return head_[static_cast<std::size_t>(t) - 1].label;
    return "t" + std::to_string(t);
  }

  /// Indices {1..N} intersected with T, in increasing order.
  std::vector<long> indices_up_to(long n_cap) const {
    std::vector<long> out;
    long hi = n_cap;
    if (!parametric_) hi = std::min<long>(hi, static_cast<long>(head_.size()));
    else if (tail_end_) hi = std::min<long>(hi, *tail_end_);
    for (long t = 1; t <= hi; ++t) out.push_back(t);
    return out;
  }

  ExtReal eval_member(long t, std::span<const double> x) const {
    if (parametric_ && t >= tail_start() && (!tail_end_ || t <= *tail_end_)) {
      double A, B, C;
      tail_.collapse(x, A, B, C);
      double v = A + B * static_cast<double>(t) + C / static_cast<double>(t);
      if (!std::isfinite(v)) return v > 0 ? ExtReal::plus_inf() : ExtReal::minus_inf();
      return ExtReal::finite(v);
    }
    return eval(member(t), x);
  }

  /// Recession of f_t along d (offsets drop out; tails are affine in x).
  ExtReal member_recession(long t, std::span<const double> d) const {
    if (parametric_ && t >= tail_start() && (!tail_end_ || t <= *tail_end_)) {
      double A = 0.0, B = 0.0, C = 0.0;
      for (std::size_t i = 0; i < tail_.coeffs.size(); ++i) {
        A += tail_.coeffs[i].c0 * d[i];
        B += tail_.coeffs[i].lin * d[i];
        C += tail_.coeffs[i].recip * d[i];
      }
      double v = A + B * static_cast<double>(t) + C / static_cast<double>(t);
      if (!std::isfinite(v)) return v > 0 ? ExtReal::plus_inf() : ExtReal::minus_inf();
      return ExtReal::finite(v);
    }
    return recession(member(t), d);
  }

  /// max over indices {1..N} of the member recessions along d.
  ExtReal truncated_sup_recession(std::span<const double> d, long trunc) const {
    ExtReal best = ExtReal::minus_inf();
    long hi = trunc;
    if (!parametric_) hi = std::min<long>(hi, static_cast<long>(head_.size()));
    else if (tail_end_) hi = std::min<long>(hi, *tail_end_);
    for (long t = 1; t <= hi; ++t) {
      ExtReal v = member_recession(t, d);
      if (v > best) best = v;
    }
    return best;
  }

  /// max over indices {1..N} of f_t(x); exact when that truncation covers T.
  ExtReal truncated_sup(std::span<const double> x, long trunc) const {
    ExtReal best = ExtReal::minus_inf();
    long head_hi = std::min<long>(trunc, static_cast<long>(head_.size()));
    for (long t = 1; t <= head_hi; ++t) {
      ExtReal v = eval(head_[static_cast<std::size_t>(t) - 1].expr, x);
      if (v > best) best = v;
    }
    if (parametric_) {
      long lo = tail_start();
      long hi = tail_end_ ? std::min(*tail_end_, trunc) : trunc;
      if (hi >= lo) {
        double A, B, C;
        tail_.collapse(x, A, B, C);
        for (long t = lo; t <= hi; ++t) {
          double v = A + B * static_cast<double>(t) + C / static_cast<double>(t);
          ExtReal ev = std::isfinite(v)
                           ? ExtReal::finite(v)
                           : (v > 0 ? ExtReal::plus_inf() : ExtReal::minus_inf());
          if (ev > best) best = ev;
        }
      }
    }
    return best;
  }

  friend bool operator==(const IndexFamily& a, const IndexFamily& b) {
    return a.parametric_ == b.parametric_ && a.head_ == b.head_ && a.tail_ == b.tail_ &&
           a.tail_end_ == b.tail_end_ && a.sup_expr_ == b.sup_expr_;
  }

 private:
  IndexFamily() = default;
  bool parametric_ = false;
  std::vector<FamilyMember> head_;
  AffineTemplate tail_;
  std::optional<long> tail_end_;
  std::optional<Expr> sup_expr_;
};

}  // namespace cip

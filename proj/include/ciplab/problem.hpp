#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ciplab/family.hpp"

namespace cip {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};
using Box = std::vector<Interval>;

/// The inner-minimization scopes the different duals run over.
///   AllX:   all of R^n
///   M:      every constraint domain (f_t(x) < +inf for all t)
///   Delta:  M intersected with dom f
///   Delta1: dom f intersected with dom h
///   E:      the feasible set, h(x) <= tol
enum class SetTag { AllX, M, Delta, Delta1, E };

constexpr std::size_t kMaxDim = 8;

struct SupVal {
  ExtReal value;
  bool exact = true;
};

class Problem {
 public:
  Problem(std::string name, std::size_t dim, Expr objective, IndexFamily family, Box box,
          long truncation_default)
      : name_(std::move(name)),
        dim_(dim),
        objective_(std::move(objective)),
        family_(std::move(family)),
        box_(std::move(box)),
        truncation_(truncation_default) {
    if (dim_ == 0 || dim_ > kMaxDim)
      throw SchemaError("dim", "dimension must be in 1.." + std::to_string(kMaxDim));
    if (box_.size() != dim_) throw SchemaError("box", "box length != dimension");
    for (const Interval& iv : box_)
      if (!(iv.lo < iv.hi)) throw SchemaError("box", "empty interval");
    if (truncation_ < 1) throw SchemaError("truncation", "must be >= 1");
    certify_or_throw(objective_, "objective");
    check_dims(objective_, dim_, "objective");
    for (std::size_t i = 0; i < family_.head().size(); ++i) {
      const std::string where = "constraints/" + std::to_string(i);
      certify_or_throw(family_.head()[i].expr, where);
      check_dims(family_.head()[i].expr, dim_, where);
    }
    if (family_.is_parametric() && family_.tail().coeffs.size() != dim_)
      throw SchemaError("constraints/tail", "coefficient count != dimension");
    if (family_.sup_expr()) {
      certify_or_throw(*family_.sup_expr(), "constraints/supExpr");
      check_dims(*family_.sup_expr(), dim_, "constraints/supExpr");
    }
    probe_properness();
  }

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  const Expr& objective() const { return objective_; }
  const IndexFamily& family() const { return family_; }
  const Box& box() const { return box_; }
  long truncation_default() const { return truncation_; }

  /// Same problem with the closed-form sup-function dropped; every sup-based
  /// computation then falls back to truncation and reports exact = false.
  Problem without_sup_expr() const {
    Problem p = *this;
    if (p.family_.is_parametric())
      p.family_ = IndexFamily::parametric(p.family_.head(), p.family_.tail(),
                                          p.family_.tail_end(), std::nullopt);
    return p;
  }

  friend bool operator==(const Problem& a, const Problem& b) {
    return a.name_ == b.name_ && a.dim_ == b.dim_ && a.objective_ == b.objective_ &&
           a.family_ == b.family_ && a.box_ == b.box_ && a.truncation_ == b.truncation_;
  }

 private:
  static void certify_or_throw(const Expr& e, const std::string& where) {
    CertResult r = is_convex(e);
    if (!r.certified) throw ConvexityRejected(where + ":" + r.path, r.reason);
  }

  // f must be proper on the box hint: some grid point with a finite value.
  void probe_properness() const {
    const int per_axis = dim_ <= 2 ? 9 : 5;
    std::vector<double> x(dim_);
    std::vector<int> idx(dim_, 0);
    while (true) {
      for (std::size_t i = 0; i < dim_; ++i)
        x[i] = box_[i].lo + (box_[i].hi - box_[i].lo) * idx[i] / double(per_axis - 1);
      if (eval(objective_, x).is_finite()) return;
      std::size_t i = 0;
      while (i < dim_ && ++idx[i] == per_axis) idx[i++] = 0;
      if (i == dim_) break;
    }
    throw SchemaError("objective", "no finite objective value found on the box hint");
  }

  std::string name_;
  std::size_t dim_;
  Expr objective_;
  IndexFamily family_;
  Box box_;
  long truncation_;
};

/// h(x) = sup_t f_t(x). Uses the closed form when available, full enumeration
/// for enumerable families, and the truncation {t <= N} otherwise (exact=false).
inline SupVal sup_eval(const Problem& p, std::span<const double> x, long trunc) {
  if (x.size() != p.dim()) throw DimensionMismatch(p.dim(), x.size());
  const IndexFamily& fam = p.family();
  if (fam.sup_expr()) return {eval(*fam.sup_expr(), x), true};
  if (fam.is_enumerable()) {
    long hi = fam.is_parametric() ? *fam.tail_end() : static_cast<long>(fam.head().size());
    return {fam.truncated_sup(x, hi), true};
  }
  if (trunc < 1) trunc = 1;
  return {fam.truncated_sup(x, trunc), false};
}

inline SupVal sup_eval(const Problem& p, std::span<const double> x) {
  return sup_eval(p, x, p.truncation_default());
}

/// Recession of the sup-function along d, mirroring the evaluation route of
/// sup_eval so that certificates match what is actually minimized.
inline ExtReal sup_recession(const Problem& p, std::span<const double> d, long trunc) {
  const IndexFamily& fam = p.family();
  if (fam.sup_expr()) return recession(*fam.sup_expr(), d);
  if (fam.is_enumerable()) {
    long hi = fam.is_parametric() ? *fam.tail_end() : static_cast<long>(fam.head().size());
    return fam.truncated_sup_recession(d, hi);
  }
  return fam.truncated_sup_recession(d, trunc < 1 ? 1 : trunc);
}

/// Membership in the named scope. M is exact (affine tails are real-valued
/// everywhere, so only explicit members can exclude a point); E and Delta1
/// inherit the truncation caveat of sup_eval.
inline bool member(const Problem& p, std::span<const double> x, SetTag tag, long trunc,
                   double tol = 0.0) {
  if (x.size() != p.dim()) throw DimensionMismatch(p.dim(), x.size());
  switch (tag) {
    case SetTag::AllX:
      return true;
    case SetTag::M: {
      for (const FamilyMember& m : p.family().head())
        if (eval(m.expr, x).is_plus_inf()) return false;
      return true;
    }
    case SetTag::Delta:
      return member(p, x, SetTag::M, trunc, tol) && !eval(p.objective(), x).is_plus_inf();
    case SetTag::Delta1:
      return !eval(p.objective(), x).is_plus_inf() && !sup_eval(p, x, trunc).value.is_plus_inf();
    case SetTag::E:
      return sup_eval(p, x, trunc).value <= ExtReal::finite(tol);
  }
  return false;
}

inline bool member(const Problem& p, std::span<const double> x, SetTag tag) {
  return member(p, x, tag, p.truncation_default());
}

}  // namespace cip

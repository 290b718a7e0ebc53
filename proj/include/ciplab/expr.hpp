#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ciplab/extreal.hpp"

namespace cip {

/// g(x) = a.x + b <= 0, the only restriction sets DomainRestrict accepts.
struct AffineIneq {
  std::vector<double> a;
  double b = 0.0;
  friend bool operator==(const AffineIneq&, const AffineIneq&) = default;
};

enum class ExprOp { Const, Coord, Affine, Sum, PosScale, MaxOf, ExpOf, AbsOf, DomainRestrict };

struct ExprNode;

/// Immutable convexity-certified expression tree over R^n with values in
/// R u {+inf}. Certification happens in the builder functions below and can be
/// re-run on a whole tree with is_convex(); a ConvexityRejected from a builder
/// means the requested tree is not in the certified grammar.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  const ExprNode& node() const { return *node_; }
  bool empty() const { return node_ == nullptr; }
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  ExprOp op;
  double scalar = 0.0;            // Const value, PosScale factor
  int coord = 0;                  // Coord index, 1-based as in x1, x2, ...
  std::vector<double> coeffs;     // Affine slope vector
  double offset = 0.0;            // Affine offset
  std::vector<Expr> kids;         // Sum/MaxOf args, PosScale/ExpOf/AbsOf/DomainRestrict arg
  std::vector<AffineIneq> guards; // DomainRestrict polyhedron
};

inline bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const ExprNode& x = *a.node_;
  const ExprNode& y = *b.node_;
  return x.op == y.op && x.scalar == y.scalar && x.coord == y.coord && x.coeffs == y.coeffs &&
         x.offset == y.offset && x.kids == y.kids && x.guards == y.guards;
}

namespace detail {
inline Expr make(ExprNode n) { return Expr(std::make_shared<const ExprNode>(std::move(n))); }
}  // namespace detail

inline Expr constant(double c) {
  ExprNode n;
  n.op = ExprOp::Const;
  n.scalar = c;
  return detail::make(std::move(n));
}

inline Expr coord(int i) {
  if (i < 1) throw ConvexityRejected("coord", "coordinate index is 1-based");
  ExprNode n;
  n.op = ExprOp::Coord;
  n.coord = i;
  return detail::make(std::move(n));
}

inline Expr affine(std::vector<double> a, double b) {
  ExprNode n;
  n.op = ExprOp::Affine;
  n.coeffs = std::move(a);
  n.offset = b;
  return detail::make(std::move(n));
}

inline Expr sum(std::vector<Expr> kids) {
  if (kids.empty()) throw ConvexityRejected("sum", "needs at least one term");
  ExprNode n;
  n.op = ExprOp::Sum;
  n.kids = std::move(kids);
  return detail::make(std::move(n));
}

inline Expr pos_scale(double c, Expr e) {
  if (!(c > 0.0)) throw ConvexityRejected("scale", "factor must be > 0");
  ExprNode n;
  n.op = ExprOp::PosScale;
  n.scalar = c;
  n.kids.push_back(std::move(e));
  return detail::make(std::move(n));
}

inline Expr max_of(std::vector<Expr> kids) {
  if (kids.empty()) throw ConvexityRejected("max", "needs at least one term");
  ExprNode n;
  n.op = ExprOp::MaxOf;
  n.kids = std::move(kids);
  return detail::make(std::move(n));
}

inline Expr exp_of(Expr e) {
  ExprNode n;
  n.op = ExprOp::ExpOf;
  n.kids.push_back(std::move(e));
  return detail::make(std::move(n));
}

/// Structural reduction to a.x + b; empty when the tree is not affine.
inline std::optional<std::pair<std::vector<double>, double>> as_affine(const Expr& e,
                                                                       std::size_t dim) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case ExprOp::Const:
      return std::make_pair(std::vector<double>(dim, 0.0), n.scalar);
    case ExprOp::Coord: {
      if (static_cast<std::size_t>(n.coord) > dim) return std::nullopt;
      std::vector<double> a(dim, 0.0);
      a[static_cast<std::size_t>(n.coord) - 1] = 1.0;
      return std::make_pair(std::move(a), 0.0);
    }
    case ExprOp::Affine: {
      if (n.coeffs.size() != dim) return std::nullopt;
      return std::make_pair(n.coeffs, n.offset);
    }
    case ExprOp::Sum: {
      std::vector<double> a(dim, 0.0);
      double b = 0.0;
      for (const Expr& k : n.kids) {
        auto part = as_affine(k, dim);
        if (!part) return std::nullopt;
        for (std::size_t i = 0; i < dim; ++i) a[i] += part->first[i];
        b += part->second;
      }
      return std::make_pair(std::move(a), b);
    }
    case ExprOp::PosScale: {
      auto part = as_affine(n.kids[0], dim);
      if (!part) return std::nullopt;
      for (double& c : part->first) c *= n.scalar;
      return std::make_pair(std::move(part->first), n.scalar * part->second);
    }
    default:
      return std::nullopt;
  }
}

/// Smallest ambient dimension the tree can be evaluated in.
inline std::size_t infer_dim(const Expr& e) {
  const ExprNode& n = e.node();
  std::size_t dim = 0;
  if (n.op == ExprOp::Coord) dim = static_cast<std::size_t>(n.coord);
  if (n.op == ExprOp::Affine) dim = n.coeffs.size();
  for (const AffineIneq& g : n.guards) dim = std::max(dim, g.a.size());
  for (const Expr& k : n.kids) dim = std::max(dim, infer_dim(k));
  return dim;
}

/// |a.x + b|. The argument must reduce to an affine function.
inline Expr abs_of(Expr e) {
  if (!as_affine(e, std::max<std::size_t>(infer_dim(e), 1)))
    throw ConvexityRejected("abs", "argument must be affine");
  ExprNode out;
  out.op = ExprOp::AbsOf;
  out.kids.push_back(std::move(e));
  return detail::make(std::move(out));
}

/// Inner expression on the polyhedron {x : a_j.x + b_j <= 0 for all j},
/// +inf outside. This is how half-space-restricted data like
/// "x1 if x2 >= 0, +inf otherwise" are encoded.
inline Expr domain_restrict(Expr e, std::vector<AffineIneq> guards) {
  if (guards.empty()) throw ConvexityRejected("restrict", "needs at least one inequality");
  ExprNode n;
  n.op = ExprOp::DomainRestrict;
  n.kids.push_back(std::move(e));
  n.guards = std::move(guards);
  return detail::make(std::move(n));
}

/// Recursive evaluation with extended-real arithmetic. x must match the
/// dimensions baked into the tree (Coord indices, Affine vector lengths).
inline ExtReal eval(const Expr& e, std::span<const double> x) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case ExprOp::Const:
      return ExtReal::finite(n.scalar);
    case ExprOp::Coord: {
      std::size_t i = static_cast<std::size_t>(n.coord);
      if (i > x.size()) throw DimensionMismatch(i, x.size());
      return ExtReal::finite(x[i - 1]);
    }
    case ExprOp::Affine: {
      if (n.coeffs.size() != x.size()) throw DimensionMismatch(n.coeffs.size(), x.size());
      double s = n.offset;
      for (std::size_t i = 0; i < x.size(); ++i) s += n.coeffs[i] * x[i];
      if (!std::isfinite(s)) return s > 0 ? ExtReal::plus_inf() : ExtReal::minus_inf();
      return ExtReal::finite(s);
    }
    case ExprOp::Sum: {
      ExtReal acc = ExtReal::finite(0.0);
      for (const Expr& k : n.kids) acc = ext_add(acc, eval(k, x));
      return acc;
    }
    case ExprOp::PosScale:
      return ext_scale_pos(n.scalar, eval(n.kids[0], x));
    case ExprOp::MaxOf: {
      ExtReal best = eval(n.kids[0], x);
      for (std::size_t i = 1; i < n.kids.size(); ++i) {
        ExtReal v = eval(n.kids[i], x);
        if (v > best) best = v;
      }
      return best;
    }
    case ExprOp::ExpOf: {
      ExtReal a = eval(n.kids[0], x);
      if (a.is_plus_inf()) return ExtReal::plus_inf();
      if (a.is_minus_inf()) return ExtReal::finite(0.0);
      double v = std::exp(a.value());
      if (!std::isfinite(v)) return ExtReal::plus_inf();  // overflow saturates
      return ExtReal::finite(v);
    }
    case ExprOp::AbsOf: {
      ExtReal a = eval(n.kids[0], x);
      return ExtReal::finite(std::fabs(a.value()));
    }
    case ExprOp::DomainRestrict: {
      for (const AffineIneq& g : n.guards) {
        if (g.a.size() != x.size()) throw DimensionMismatch(g.a.size(), x.size());
        double s = g.b;
        for (std::size_t i = 0; i < x.size(); ++i) s += g.a[i] * x[i];
        if (s > 0.0) return ExtReal::plus_inf();
      }
      return eval(n.kids[0], x);
    }
  }
  throw Error("unreachable expr op");
}

/// Recession function e_inf(d) = lim_{s->inf} e(x + s d)/s, independent of x
/// for convex e. Computable structurally: affine parts keep their linear
/// term, exp is 0 or +inf depending on the sign of its argument's recession,
/// and a domain restriction admits only directions in its recession cone.
/// Never returns -inf surprises aside, a strictly negative value certifies
/// that e is unbounded below along d whenever e is finite somewhere.
inline ExtReal recession(const Expr& e, std::span<const double> d) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case ExprOp::Const:
      return ExtReal::finite(0.0);
    case ExprOp::Coord: {
      std::size_t i = static_cast<std::size_t>(n.coord);
      if (i > d.size()) throw DimensionMismatch(i, d.size());
      return ExtReal::finite(d[i - 1]);
    }
    case ExprOp::Affine: {
      if (n.coeffs.size() != d.size()) throw DimensionMismatch(n.coeffs.size(), d.size());
      double s = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) s += n.coeffs[i] * d[i];
      return ExtReal::finite(s);
    }
    case ExprOp::Sum: {
      ExtReal acc = ExtReal::finite(0.0);
      for (const Expr& k : n.kids) acc = ext_add(acc, recession(k, d));
      return acc;
    }
    case ExprOp::PosScale:
      return ext_scale_pos(n.scalar, recession(n.kids[0], d));
    case ExprOp::MaxOf: {
      ExtReal best = recession(n.kids[0], d);
      for (std::size_t i = 1; i < n.kids.size(); ++i) {
        ExtReal v = recession(n.kids[i], d);
        if (v > best) best = v;
      }
      return best;
    }
    case ExprOp::ExpOf: {
      ExtReal a = recession(n.kids[0], d);
      if (a.is_plus_inf() || (a.is_finite() && a.value() > 0.0)) return ExtReal::plus_inf();
      return ExtReal::finite(0.0);  // convex argument stays bounded above along d
    }
    case ExprOp::AbsOf: {
      ExtReal a = recession(n.kids[0], d);
      return ExtReal::finite(std::fabs(a.value()));
    }
    case ExprOp::DomainRestrict: {
      for (const AffineIneq& g : n.guards) {
        if (g.a.size() != d.size()) throw DimensionMismatch(g.a.size(), d.size());
        double s = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) s += g.a[i] * d[i];
        if (s > 0.0) return ExtReal::plus_inf();
      }
      return recession(n.kids[0], d);
    }
  }
  throw Error("unreachable expr op");
}

/// Certification verdict. Rejected carries the path of the offending node.
struct CertResult {
  bool certified = true;
  std::string path;
  std::string reason;
};

namespace detail {
inline CertResult certify(const Expr& e, const std::string& path) {
  if (e.empty()) return {false, path, "empty expression"};
  const ExprNode& n = e.node();
  auto child = [&](std::size_t i) { return path + "/" + std::to_string(i); };
  switch (n.op) {
    case ExprOp::Const:
      return {};
    case ExprOp::Coord:
      if (n.coord < 1) return {false, path, "coordinate index must be >= 1"};
      return {};
    case ExprOp::Affine:
      if (n.coeffs.empty()) return {false, path, "affine needs a slope vector"};
      return {};
    case ExprOp::Sum:
    case ExprOp::MaxOf: {
      if (n.kids.empty()) return {false, path, "needs at least one term"};
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        CertResult r = certify(n.kids[i], child(i));
        if (!r.certified) return r;
      }
      return {};
    }
    case ExprOp::PosScale:
      if (!(n.scalar > 0.0)) return {false, path, "scale factor must be > 0"};
      return certify(n.kids[0], child(0));
    case ExprOp::ExpOf:
      return certify(n.kids[0], child(0));  // exp is convex nondecreasing
    case ExprOp::AbsOf: {
      if (n.kids.size() != 1 || n.kids[0].empty() ||
          !as_affine(n.kids[0], std::max<std::size_t>(infer_dim(n.kids[0]), 1)))
        return {false, path, "abs argument must be affine"};
      return {};
    }
    case ExprOp::DomainRestrict: {
      if (n.guards.empty()) return {false, path, "restriction needs inequalities"};
      return certify(n.kids[0], child(0));
    }
  }
  return {false, path, "unknown node"};
}
}  // namespace detail

inline CertResult is_convex(const Expr& e) { return detail::certify(e, "expr"); }

/// Largest coordinate index / affine length the tree touches, and a dimension
/// consistency check used by Problem construction.
inline void check_dims(const Expr& e, std::size_t dim, const std::string& path) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case ExprOp::Coord:
      if (static_cast<std::size_t>(n.coord) > dim)
        throw SchemaError(path, "coordinate index exceeds problem dimension");
      return;
    case ExprOp::Affine:
      if (n.coeffs.size() != dim) throw SchemaError(path, "affine vector length != dimension");
      return;
    case ExprOp::DomainRestrict:
      for (const AffineIneq& g : n.guards)
        if (g.a.size() != dim) throw SchemaError(path, "guard vector length != dimension");
      check_dims(n.kids[0], dim, path + "/0");
      return;
    default:
      for (std::size_t i = 0; i < n.kids.size(); ++i)
        check_dims(n.kids[i], dim, path + "/" + std::to_string(i));
      return;
  }
}

}  // namespace cip

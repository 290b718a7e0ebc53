#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ciplab/haar.hpp"
#include "ciplab/minimize.hpp"
#include "ciplab/multiplier.hpp"

namespace cip {

struct SolverConfig {
  MinConfig inner;
  long trunc = 100;        // truncation level for sup/membership fallbacks
  long pool_size = 50;     // multiplier candidate pool for parametric families
  int support_cap = 4;     // coordinate-ascent support size
  double feas_tol = 1e-9;  // slack accepted as "feasible" in E
  long haar_pool = 200;    // tail indices offered to the Haar solver
  double penalty = 8.0;    // exact-penalty start weight (escalates x8 on violation)
};

inline SolverConfig make_config(const Problem& p) {
  SolverConfig cfg;
  cfg.inner.box = p.box();
  cfg.trunc = p.truncation_default();
  return cfg;
}

enum class DualKind { Primal, D0, D, D1 };

inline const char* to_string(DualKind k) {
  switch (k) {
    case DualKind::Primal: return "primal";
    case DualKind::D0: return "d0";
    case DualKind::D: return "d";
    case DualKind::D1: return "d1";
  }
  return "?";
}

/// One computed value. `attained` means the optimizer (multiplier, scalar s,
/// or primal point) achieving the value was exhibited -- max rather than sup.
/// `exact` is the truncation caveat: false when an unbounded index set was
/// only sampled.
struct DualReport {
  std::string problem;
  DualKind which = DualKind::Primal;
  ExtReal value = ExtReal::plus_inf();
  Multiplier multiplier;
  std::optional<double> s_star;
  bool attained = false;
  bool exact = true;
  MinStatus inner_status = MinStatus::Infeasible;
  std::optional<std::vector<double>> witness;
  long evals = 0;
};

/// Point a with h(a) <= -alpha < 0 and f(a) finite.
struct SlaterCertificate {
  std::vector<double> a;
  double alpha = 0.0;
  bool exact = true;
};

// ---------------------------------------------------------------------------
// Lagrangians and dual functions

/// L0 (scope AllX): f(x) + sum_{t in supp} lambda_t f_t(x), empty sum = 0.
/// L (scope M): the same on M, +inf outside. Zero weights cannot occur --
/// the Multiplier type stores strictly positive entries only, so a +inf
/// constraint value at an absent index is never touched. That distinction is
/// exactly what separates sup(D0) from sup(D).
inline ExtReal lagrangian(const Problem& p, const Multiplier& lam, std::span<const double> x,
                          SetTag scope, long trunc) {
  if (scope != SetTag::AllX && scope != SetTag::M)
    throw Error("lagrangian scope must be AllX or M");
  if (scope == SetTag::M && !member(p, x, SetTag::M, trunc)) return ExtReal::plus_inf();
  ExtReal acc = eval(p.objective(), x);
  for (const auto& [t, w] : lam.support()) {
    if (!p.family().contains(t))
      throw SchemaError("multiplier", "index t" + std::to_string(t) + " not in the family");
    acc = ext_add(acc, ext_scale_pos(w, p.family().eval_member(t, x)));
  }
  return acc;
}

inline ExtReal lagrangian(const Problem& p, const Multiplier& lam, std::span<const double> x,
                          SetTag scope) {
  return lagrangian(p, lam, x, scope, p.truncation_default());
}

namespace detail {

// Recession of L(., lam) along d. Scope M conservatively requires every
// explicit member's recession to stay finite (a subset of M's true recession
// cone, so unboundedness certificates remain sound).
inline ExtReal lagrangian_recession(const Problem& p, const Multiplier& lam,
                                    std::span<const double> d, SetTag scope) {
  if (scope == SetTag::M)
    for (const FamilyMember& m : p.family().head())
      if (recession(m.expr, d).is_plus_inf()) return ExtReal::plus_inf();
  ExtReal acc = recession(p.objective(), d);
  for (const auto& [t, w] : lam.support()) {
    if (acc.is_plus_inf()) return acc;
    acc = ext_add(acc, ext_scale_pos(w, p.family().member_recession(t, d)));
  }
  return acc;
}

}  // namespace detail

/// inf_x L0(x, lam) or inf_{x in M} L(x, lam).
inline MinResult dual_function(const Problem& p, const Multiplier& lam, SetTag scope,
                               const SolverConfig& cfg) {
  return minimize(
      [&](std::span<const double> x) { return lagrangian(p, lam, x, scope, cfg.trunc); },
      cfg.inner,
      [&](std::span<const double> d) { return detail::lagrangian_recession(p, lam, d, scope); });
}

/// inf_{x in Delta1} (f(x) + s h(x)); s = 0 keeps the Delta1 restriction but
/// drops the h term.
inline MinResult sup_dual_function(const Problem& p, double s, const SolverConfig& cfg) {
  if (s < 0.0) throw Error("sup_dual_function needs s >= 0");
  return minimize(
      [&](std::span<const double> x) -> ExtReal {
        ExtReal fx = eval(p.objective(), x);
        if (fx.is_plus_inf()) return fx;
        ExtReal h = sup_eval(p, x, cfg.trunc).value;
        if (h.is_plus_inf()) return ExtReal::plus_inf();
        if (s == 0.0) return fx;
        return ext_add(fx, ext_scale_pos(s, h));
      },
      cfg.inner,
      [&](std::span<const double> d) -> ExtReal {
        ExtReal rf = recession(p.objective(), d);
        if (rf.is_plus_inf()) return rf;
        ExtReal rh = sup_recession(p, d, cfg.trunc);
        if (rh.is_plus_inf()) return ExtReal::plus_inf();
        if (s == 0.0) return rf;
        return ext_add(rf, ext_scale_pos(s, rh));
      });
}

// ---------------------------------------------------------------------------
// The four values

namespace detail {

// Generic exact-penalty minimization: base objective plus K * violation with
// K escalated until the returned witness is (numerically) feasible. Hard
// walls live in `base` / `viol` as +inf. Small K keeps the penalty valley
// navigable; the escalation covers instances whose multipliers exceed it.
struct PenaltyParts {
  Oracle base;
  Oracle viol;      // finite violation >= 0, or +inf for a hard wall
  Oracle base_rec;
  Oracle viol_rec;  // recession of the violation, clamped at >= 0 by caller
};

inline MinResult penalized_min(const PenaltyParts& pp, const SolverConfig& cfg) {
  MinResult r;
  double K = cfg.penalty;
  for (int attempt = 0; attempt < 4; ++attempt, K *= 8.0) {
    r = minimize(
        [&](std::span<const double> x) -> ExtReal {
          ExtReal b = pp.base(x);
          if (b.is_plus_inf()) return b;
          ExtReal v = pp.viol(x);
          if (v.is_plus_inf()) return v;
          double viol = v.is_finite() ? std::max(0.0, v.value()) : 0.0;
          if (viol == 0.0) return b;
          return ext_add(b, ExtReal::finite(K * viol));
        },
        cfg.inner,
        [&](std::span<const double> d) -> ExtReal {
          ExtReal b = pp.base_rec(d);
          if (b.is_plus_inf()) return b;
          ExtReal v = pp.viol_rec(d);
          if (v.is_plus_inf()) return v;
          double viol = v.is_finite() ? std::max(0.0, v.value()) : 0.0;
          if (viol == 0.0) return b;
          return ext_add(b, ExtReal::finite(K * viol));
        });
    if (r.status == MinStatus::Infeasible) return r;  // hard walls, no K helps
    if (r.value.is_finite() && r.witness) {
      ExtReal v = pp.viol(*r.witness);
      if (v.is_finite() && v.value() <= 1e-6 * (1.0 + std::fabs(r.value.value()))) return r;
    }
    // -inf or a violated witness: the penalty may simply be below the
    // instance's multiplier scale, so escalate and retry
  }
  if (r.value.is_minus_inf()) return r;  // descends at the largest K too
  r.value = ExtReal::plus_inf();
  r.status = MinStatus::Infeasible;
  r.witness.reset();
  return r;
}

// inf of f over the level set {h <= r}. Domain walls (h or f equal to +inf)
// stay hard; the level constraint itself is an exact penalty.
inline MinResult level_set_min(const Problem& p, double level, const SolverConfig& cfg) {
  PenaltyParts pp;
  pp.base = [&p](std::span<const double> x) { return eval(p.objective(), x); };
  pp.viol = [&p, level, &cfg](std::span<const double> x) -> ExtReal {
    ExtReal h = sup_eval(p, x, cfg.trunc).value;
    if (h.is_plus_inf()) return h;
    return ExtReal::finite(h.is_minus_inf() ? 0.0 : std::max(0.0, h.value() - level));
  };
  pp.base_rec = [&p](std::span<const double> d) { return recession(p.objective(), d); };
  pp.viol_rec = [&p, &cfg](std::span<const double> d) -> ExtReal {
    ExtReal rh = sup_recession(p, d, cfg.trunc);
    if (rh.is_plus_inf()) return rh;
    return ExtReal::finite(rh.is_minus_inf() ? 0.0 : std::max(0.0, rh.value()));
  };
  return penalized_min(pp, cfg);
}

}  // namespace detail

inline DualReport solve_primal(const Problem& p, const SolverConfig& cfg) {
  const bool exact = p.family().sup_expr().has_value() || p.family().is_enumerable();
  MinResult r = detail::level_set_min(p, 0.0, cfg);
  DualReport rep;
  rep.problem = p.name();
  rep.which = DualKind::Primal;
  rep.value = r.value;
  rep.attained = r.status == MinStatus::Attained;
  rep.exact = exact;
  rep.inner_status = r.status;
  rep.witness = r.witness;
  rep.evals = r.evals;
  return rep;
}

namespace detail {

// Admissible interval for the weight of index t on top of `base`: each probe
// direction d with finite recessions contributes the affine-in-w constraint
// rec_base(d) + w * rec_t(d) >= 0, a necessary condition for the dual
// function to stay above -inf. Weights outside the interval are certainly
// -inf and are never sampled; this keeps estimates at vanishing weights
// (whose descent is too shallow for any finite box to see) out of the
// reported sup.
inline std::pair<double, double> weight_interval(const Problem& p, const Multiplier& base,
                                                 long t, SetTag scope) {
  double lo = 0.0, hi = HUGE_VAL;
  for (const auto& d : cip::detail::probe_directions(p.dim())) {
    ExtReal rbase = lagrangian_recession(p, base, d, scope);
    if (rbase.is_plus_inf()) continue;
    ExtReal rt = p.family().member_recession(t, d);
    if (rt.is_plus_inf()) continue;
    double a = rbase.value(), b = rt.value();
    if (b < -1e-12)
      hi = std::min(hi, a <= 0.0 ? 0.0 : a / (-b));
    else if (b > 1e-12)
      lo = std::max(lo, a < 0.0 ? -a / b : 0.0);
    else if (a < -1e-12)
      return {1.0, 0.0};  // empty: -inf for every weight
  }
  return {lo, hi};
}

// Heuristic outer maximization over multipliers for non-linear problems:
// lambda = 0 baseline, single-index line searches over the candidate pool
// (restricted to recession-admissible weight intervals), then a short
// coordinate ascent on the most promising support. Reports a lower bound
// on the true sup.
inline DualReport multiplier_search(const Problem& p, SetTag scope, const SolverConfig& cfg) {
  DualReport rep;
  rep.problem = p.name();
  rep.which = scope == SetTag::AllX ? DualKind::D0 : DualKind::D;
  rep.exact = !p.family().is_parametric() || p.family().is_enumerable();

  std::vector<long> pool = p.family().indices_up_to(
      p.family().is_parametric() && !p.family().is_enumerable()
          ? p.family().tail_start() + cfg.pool_size - 1
          : std::numeric_limits<long>::max() / 2);

  auto value_of = [&](const Multiplier& lam) -> MinResult {
    MinResult r = dual_function(p, lam, scope, cfg);
    rep.evals += r.evals;
    return r;
  };

  auto with_weight = [](const Multiplier& base, long t, double w) {
    Multiplier lam;
    for (const auto& [u, wu] : base.support())
      if (u != t) lam.set(u, wu);
    if (w > 0.0) lam.set(t, w);
    return lam;
  };

  Multiplier best_lam;
  MinResult best = value_of(best_lam);

  auto line_search = [&](long t, const Multiplier& base, int golden_iters) {
    auto [lo, hi] = weight_interval(p, base, t, scope);
    if (hi < lo || hi <= 0.0) return;  // only w = 0 can be finite
    lo = std::max(lo, 0.0);
    double span = std::min(hi - lo, 65536.0);
    if (!(span > 0.0)) return;
    try {
      Max1DResult r = maximize_concave_1d(
          [&](double u) { return value_of(with_weight(base, t, lo + u)).value; },
          std::min(span, 4.0), span, golden_iters);
      if (r.value > best.value && (lo + r.s_star) > 0.0) {
        best_lam = with_weight(base, t, lo + r.s_star);
        best = value_of(best_lam);
      }
    } catch (const AllMinusInf&) {
      // this index prunes itself
    }
  };

  for (long t : pool) line_search(t, Multiplier(), 40);

  if (!best_lam.empty() && pool.size() > 1) {
    std::vector<long> support;
    for (const auto& [t, w] : best_lam.support()) support.push_back(t);
    for (long t : pool) {
      if (static_cast<int>(support.size()) >= cfg.support_cap) break;
      if (std::find(support.begin(), support.end(), t) == support.end()) support.push_back(t);
    }
    std::sort(support.begin(), support.end());
    for (int pass = 0; pass < 2; ++pass)
      for (long t : support) line_search(t, best_lam, 30);
  }

  rep.value = best.value;
  rep.multiplier = best_lam;
  rep.attained = best.value.is_finite();
  rep.inner_status = best.status;
  return rep;
}

}  // namespace detail

/// sup over finite-support multipliers of the ordinary dual function
/// (scope AllX). Linear problems take the exact Haar route.
inline DualReport solve_D0(const Problem& p, const SolverConfig& cfg) {
  if (auto lp = detect_linear(p)) {
    HaarSolution h = haar_dual(*lp, cfg.haar_pool);
    DualReport rep;
    rep.problem = p.name();
    rep.which = DualKind::D0;
    rep.value = h.value;
    rep.multiplier = h.multiplier;
    rep.attained = h.status == HaarStatus::Optimal;
    rep.exact = h.exact;
    rep.inner_status = h.status == HaarStatus::Optimal ? MinStatus::Attained : MinStatus::Infeasible;
    return rep;
  }
  return detail::multiplier_search(p, SetTag::AllX, cfg);
}

/// Same outer problem with the conic Lagrangian (inner scope M). Linear data
/// make every f_t real-valued, so M = R^n and (D) coincides with (D0).
inline DualReport solve_D(const Problem& p, const SolverConfig& cfg) {
  if (auto lp = detect_linear(p)) {
    DualReport rep = solve_D0(p, cfg);
    rep.which = DualKind::D;
    return rep;
  }
  return detail::multiplier_search(p, SetTag::M, cfg);
}

/// sup_{s>=0} inf_{x in Delta1} (f + s h).
inline DualReport solve_D1(const Problem& p, const SolverConfig& cfg) {
  DualReport rep;
  rep.problem = p.name();
  rep.which = DualKind::D1;
  rep.exact = p.family().sup_expr().has_value() || p.family().is_enumerable();
  long evals = 0;
  try {
    Max1DResult r = maximize_concave_1d(
        [&](double s) {
          MinResult m = sup_dual_function(p, s, cfg);
          evals += m.evals;
          return m.value;
        },
        4.0, 65536.0, 60);
    rep.value = r.value;
    rep.s_star = r.s_star;
    rep.attained = r.attained;
  } catch (const AllMinusInf&) {
    rep.value = ExtReal::minus_inf();
    rep.attained = false;
  }
  rep.evals = evals;
  return rep;
}

// ---------------------------------------------------------------------------
// Value functions and limiting formulas

struct ValueResult {
  ExtReal value = ExtReal::plus_inf();
  bool exact = true;
  MinStatus status = MinStatus::Infeasible;
};

/// v1(r) = inf { f(x) : h(x) <= r }. Note dom h still constrains the feasible
/// region however large r is.
inline ValueResult value_v1(const Problem& p, double r, const SolverConfig& cfg) {
  const bool exact = p.family().sup_expr().has_value() || p.family().is_enumerable();
  MinResult m = detail::level_set_min(p, r, cfg);
  return {m.value, exact, m.status};
}

/// v(y) = inf { f(x) : f_t(x) <= y_t for all t }, where y is a finite-support
/// deviation map over the family completed by `uniform_default`. The uniform
/// case routes through the sup-function; otherwise membership is checked
/// per index (truncated for unbounded families).
inline ValueResult value_v(const Problem& p, const std::map<long, double>& y,
                           double uniform_default, const SolverConfig& cfg) {
  for (const auto& [t, yt] : y)
    if (!p.family().contains(t))
      throw SchemaError("deviations", "index t" + std::to_string(t) + " not in the family");
  if (y.empty()) return value_v1(p, uniform_default, cfg);

  std::vector<long> idx = p.family().indices_up_to(
      p.family().is_enumerable() ? std::numeric_limits<long>::max() / 2 : cfg.trunc);
  const bool exact = p.family().is_enumerable();
  auto level_of = [&y, uniform_default](long t) {
    auto it = y.find(t);
    return it == y.end() ? uniform_default : it->second;
  };
  detail::PenaltyParts pp;
  pp.base = [&p](std::span<const double> x) { return eval(p.objective(), x); };
  pp.viol = [&p, &idx, level_of](std::span<const double> x) -> ExtReal {
    double viol = 0.0;
    for (long t : idx) {
      ExtReal ft = p.family().eval_member(t, x);
      if (ft.is_plus_inf()) return ft;
      if (ft.is_finite()) viol = std::max(viol, ft.value() - level_of(t));
    }
    return ExtReal::finite(std::max(0.0, viol));
  };
  pp.base_rec = [&p](std::span<const double> d) { return recession(p.objective(), d); };
  pp.viol_rec = [&p, &idx](std::span<const double> d) -> ExtReal {
    double viol = 0.0;
    for (long t : idx) {
      ExtReal rt = p.family().member_recession(t, d);
      if (rt.is_plus_inf()) return rt;
      if (rt.is_finite()) viol = std::max(viol, rt.value());
    }
    return ExtReal::finite(std::max(0.0, viol));
  };
  MinResult m = detail::penalized_min(pp, cfg);
  return {m.value, exact, m.status};
}

struct SweepSchedule {
  double eps0 = 1.0;
  double ratio = 0.5;
  int count = 20;
};

/// Epsilon sweep of v1. `monotone` checks that values do not decrease as
/// epsilon decreases (v1 is non-increasing); the limit estimate is the last
/// value, justified by that monotonicity rather than extrapolation.
struct SweepResult {
  std::vector<double> epsilons;
  std::vector<ExtReal> values;
  bool exact = true;
  bool monotone = true;
  ExtReal limit_estimate = ExtReal::plus_inf();
  bool converged = false;
};

inline SweepResult limiting_value(const Problem& p, const SweepSchedule& sch,
                                  const SolverConfig& cfg) {
  if (!(sch.eps0 > 0.0) || !(sch.ratio > 0.0 && sch.ratio < 1.0) || sch.count < 1)
    throw Error("sweep schedule must have eps0 > 0, ratio in (0,1), count >= 1");
  SweepResult out;
  double eps = sch.eps0;
  for (int k = 0; k < sch.count; ++k, eps *= sch.ratio) {
    ValueResult v = value_v1(p, eps, cfg);
    out.epsilons.push_back(eps);
    out.values.push_back(v.value);
    out.exact = out.exact && v.exact;
  }
  for (std::size_t k = 1; k < out.values.size(); ++k) {
    const ExtReal& prev = out.values[k - 1];
    const ExtReal& cur = out.values[k];
    if (prev.is_finite() && cur.is_finite()) {
      if (cur.value() < prev.value() - 1e-9 * (1.0 + std::fabs(prev.value())))
        out.monotone = false;
    } else if (cur < prev) {
      out.monotone = false;
    }
  }
  out.limit_estimate = out.values.back();
  if (out.values.size() >= 2) {
    const ExtReal& a = out.values[out.values.size() - 2];
    const ExtReal& b = out.values.back();
    if (a.is_finite() && b.is_finite())
      out.converged = std::fabs(a.value() - b.value()) < 1e-4 * (1.0 + std::fabs(b.value()));
    else
      out.converged = a == b;
  }
  return out;
}

struct LscResult {
  ExtReal value = ExtReal::plus_inf();
  bool exact = true;
  double eps = 0.0;
  std::size_t h_size = 0;
  MinStatus status = MinStatus::Infeasible;
};

/// Lsc hull of the value function at the origin: a double supremum over
/// epsilon > 0 and finite index subsets H of inf_{x in M} { f : f_t <= eps,
/// t in H }. Both directions are monotone, so only the corner (smallest
/// epsilon of the schedule, largest H of the chain) is evaluated.
inline LscResult lsc_hull_v(const Problem& p, const SweepSchedule& sch, const SolverConfig& cfg,
                            std::optional<std::vector<long>> h_set = std::nullopt) {
  std::vector<long> H = h_set.value_or(p.family().indices_up_to(
      p.family().is_enumerable() ? std::numeric_limits<long>::max() / 2
                                 : p.family().tail_start() + cfg.pool_size - 1));
  double eps = sch.eps0 * std::pow(sch.ratio, sch.count - 1);
  detail::PenaltyParts pp;
  pp.base = [&p, &cfg](std::span<const double> x) -> ExtReal {
    if (!member(p, x, SetTag::M, cfg.trunc)) return ExtReal::plus_inf();
    return eval(p.objective(), x);
  };
  pp.viol = [&p, &H, eps](std::span<const double> x) -> ExtReal {
    double viol = 0.0;
    for (long t : H) {
      ExtReal ft = p.family().eval_member(t, x);
      if (ft.is_plus_inf()) return ft;
      if (ft.is_finite()) viol = std::max(viol, ft.value() - eps);
    }
    return ExtReal::finite(std::max(0.0, viol));
  };
  pp.base_rec = [&p](std::span<const double> d) -> ExtReal {
    for (const FamilyMember& m2 : p.family().head())
      if (recession(m2.expr, d).is_plus_inf()) return ExtReal::plus_inf();
    return recession(p.objective(), d);
  };
  pp.viol_rec = [&p, &H](std::span<const double> d) -> ExtReal {
    double viol = 0.0;
    for (long t : H) {
      ExtReal rt = p.family().member_recession(t, d);
      if (rt.is_plus_inf()) return rt;
      if (rt.is_finite()) viol = std::max(viol, rt.value());
    }
    return ExtReal::finite(std::max(0.0, viol));
  };
  MinResult m = detail::penalized_min(pp, cfg);
  LscResult out;
  out.value = m.value;
  out.exact = !p.family().is_parametric() || p.family().is_enumerable();
  out.eps = eps;
  out.h_size = H.size();
  out.status = m.status;
  return out;
}

// ---------------------------------------------------------------------------
// Certificates and audits

/// Searches dom f for a point with h < 0; any such point certifies the strong
/// Slater condition with alpha = -h(a)/2 (re-verified at the certificate
/// point, exactly when the sup-function is exact).
inline std::optional<SlaterCertificate> strong_slater(const Problem& p, const SolverConfig& cfg) {
  MinResult m = minimize(
      [&](std::span<const double> x) -> ExtReal {
        if (eval(p.objective(), x).is_plus_inf()) return ExtReal::plus_inf();
        return sup_eval(p, x, cfg.trunc).value;
      },
      cfg.inner,
      [&](std::span<const double> d) -> ExtReal {
        if (recession(p.objective(), d).is_plus_inf()) return ExtReal::plus_inf();
        return sup_recession(p, d, cfg.trunc);
      });
  if (!m.witness) return std::nullopt;
  SupVal h = sup_eval(p, *m.witness, cfg.trunc);
  if (!(h.value.is_finite() && h.value.value() < 0.0) && !h.value.is_minus_inf())
    return std::nullopt;
  double alpha = h.value.is_minus_inf() ? 1.0 : -h.value.value() / 2.0;
  SupVal recheck = sup_eval(p, *m.witness, cfg.trunc);
  if (!(recheck.value <= ExtReal::finite(-alpha))) return std::nullopt;
  return SlaterCertificate{*m.witness, alpha, recheck.exact};
}

struct ChainAudit {
  DualReport d0, d, d1, primal;
  bool ok = true;
  std::string violation;
};

// x <= y up to additive slack, with infinities ordered the obvious way.
inline bool le_with_slack(const ExtReal& x, const ExtReal& y, double slack) {
  if (x.is_minus_inf() || y.is_plus_inf()) return true;
  if (x.is_plus_inf()) return y.is_plus_inf();
  if (y.is_minus_inf()) return false;
  return x.value() <= y.value() + slack;
}

/// Computes all four values and checks sup(D0) <= sup(D) <= sup(D1) <= inf(P)
/// up to 1e-6 * (1 + magnitude). The dual solvers report lower bounds, so a
/// violation indicates a solver bug, not new mathematics.
inline ChainAudit weak_duality_audit(const Problem& p, const SolverConfig& cfg) {
  ChainAudit a;
  a.d0 = solve_D0(p, cfg);
  a.d = solve_D(p, cfg);
  a.d1 = solve_D1(p, cfg);
  a.primal = solve_primal(p, cfg);
  double mag = 0.0;
  for (const DualReport* r : {&a.d0, &a.d, &a.d1, &a.primal})
    if (r->value.is_finite()) mag = std::max(mag, std::fabs(r->value.value()));
  double slack = 1e-6 * (1.0 + mag);
  struct Pair {
    const char* what;
    const ExtReal* lo;
    const ExtReal* hi;
  };
  for (const Pair& pr : {Pair{"sup(D0) <= sup(D)", &a.d0.value, &a.d.value},
                         Pair{"sup(D) <= sup(D1)", &a.d.value, &a.d1.value},
                         Pair{"sup(D1) <= inf(P)", &a.d1.value, &a.primal.value}}) {
    if (!le_with_slack(*pr.lo, *pr.hi, slack)) {
      a.ok = false;
      a.violation = pr.what;
      break;
    }
  }
  return a;
}

enum class VerdictStatus { Holds, Violated, NoCertificate };

struct StrongDualityVerdict {
  VerdictStatus status = VerdictStatus::NoCertificate;
  ExtReal primal, d1, limiting;
  bool d1_attained = false;
  std::string detail;
};

/// Under a strong Slater certificate: inf(P) = max(D1) = limiting value.
/// Refuses to judge without the certificate.
inline StrongDualityVerdict strong_duality_check(const Problem& p, const SolverConfig& cfg) {
  StrongDualityVerdict v;
  auto cert = strong_slater(p, cfg);
  if (!cert) {
    v.detail = "no strong Slater certificate";
    return v;
  }
  DualReport primal = solve_primal(p, cfg);
  DualReport d1 = solve_D1(p, cfg);
  SweepResult sweep = limiting_value(p, SweepSchedule{}, cfg);
  v.primal = primal.value;
  v.d1 = d1.value;
  v.limiting = sweep.limit_estimate;
  v.d1_attained = d1.attained;
  double mag = primal.value.is_finite() ? std::fabs(primal.value.value()) : 0.0;
  double tol = 1e-3 * (1.0 + mag);
  bool ok = primal.value.is_finite() && d1.value.is_finite() && v.limiting.is_finite() &&
            std::fabs(primal.value.value() - d1.value.value()) <= tol &&
            std::fabs(primal.value.value() - v.limiting.value()) <= tol && d1.attained;
  v.status = ok ? VerdictStatus::Holds : VerdictStatus::Violated;
  if (!ok) v.detail = "strong duality equalities not met within tolerance";
  return v;
}

struct MinimaxVerdict {
  VerdictStatus status = VerdictStatus::NoCertificate;
  double s_bar = 0.0;
  std::vector<double> mu;
  ExtReal primal;
  ExtReal certified;
  std::string detail;
};

namespace detail {
inline void simplex_grid(std::size_t m, int steps, std::vector<std::vector<double>>& out) {
  std::vector<int> k(m, 0);
  std::vector<std::vector<double>> pts;
  // enumerate compositions of `steps` into m parts
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == m) {
      k[i] = left;
      std::vector<double> mu(m);
      for (std::size_t j = 0; j < m; ++j) mu[j] = double(k[j]) / double(steps);
      pts.push_back(std::move(mu));
      return;
    }
    for (int v = left; v >= 0; --v) {
      k[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, steps);
  // vertices (and near-vertices) first
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return *std::max_element(a.begin(), a.end()) > *std::max_element(b.begin(), b.end());
  });
  out = std::move(pts);
}
}  // namespace detail

/// Finite-T strong duality via the minimax route: with s from solve_D1, scan
/// the unit simplex (step 1/16) for weights mu with
/// inf_x (f + s sum mu_t f_t) >= inf(P) - tol. Requires a finite family of
/// size <= 4 and a Slater certificate.
inline MinimaxVerdict finite_minimax_check(const Problem& p, const SolverConfig& cfg) {
  MinimaxVerdict v;
  if (p.family().is_parametric()) throw Error("finite_minimax_check needs a finite family");
  const std::size_t m = p.family().head().size();
  if (m > 4) throw Error("finite_minimax_check supports |T| <= 4");
  if (!strong_slater(p, cfg)) {
    v.detail = "no strong Slater certificate";
    return v;
  }
  DualReport primal = solve_primal(p, cfg);
  DualReport d1 = solve_D1(p, cfg);
  v.primal = primal.value;
  v.s_bar = d1.s_star.value_or(0.0);
  if (!primal.value.is_finite()) {
    v.status = VerdictStatus::Violated;
    v.detail = "primal value not finite";
    return v;
  }
  const double target = primal.value.value() - 1e-3 * (1.0 + std::fabs(primal.value.value()));

  std::vector<std::vector<double>> grid;
  detail::simplex_grid(m, 16, grid);
  for (const auto& mu : grid) {
    MinResult r = minimize(
        [&](std::span<const double> x) -> ExtReal {
          if (!member(p, x, SetTag::Delta1, cfg.trunc)) return ExtReal::plus_inf();
          ExtReal acc = eval(p.objective(), x);
          for (std::size_t t = 0; t < m; ++t) {
            double w = v.s_bar * mu[t];
            if (w > 0.0)
              acc = ext_add(acc, ext_scale_pos(w, eval(p.family().head()[t].expr, x)));
          }
          return acc;
        },
        cfg.inner,
        [&](std::span<const double> d) -> ExtReal {
          ExtReal acc = recession(p.objective(), d);
          if (acc.is_plus_inf()) return acc;
          if (sup_recession(p, d, cfg.trunc).is_plus_inf()) return ExtReal::plus_inf();
          for (std::size_t t = 0; t < m; ++t) {
            double w = v.s_bar * mu[t];
            if (w > 0.0)
              acc = ext_add(acc, ext_scale_pos(w, recession(p.family().head()[t].expr, d)));
            if (acc.is_plus_inf()) return acc;
          }
          return acc;
        });
    if (r.value.is_finite() && r.value.value() >= target) {
      v.status = VerdictStatus::Holds;
      v.mu = mu;
      v.certified = r.value;
      return v;
    }
  }
  v.status = VerdictStatus::Violated;
  v.detail = "no simplex weights certified the primal value (minimax gap)";
  return v;
}

}  // namespace cip

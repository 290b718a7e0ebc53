#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "ciplab/multiplier.hpp"
#include "ciplab/problem.hpp"

namespace cip {

/// Linear specialization: inf c.x (+ obj_offset) subject to a_t.x <= b_t.
/// Rows mirror the family layout: explicit rows 1..m, then an optional affine
/// tail template (coefficients as functions of t).
struct LinearSIP {
  std::size_t dim = 0;
  std::vector<double> c;
  double obj_offset = 0.0;
  struct Row {
    std::vector<double> a;
    double b = 0.0;
  };
  std::vector<Row> rows;  // ids 1..rows.size()
  struct Tail {
    std::vector<ScalarOfT> a;
    ScalarOfT b;  // f_t = a(t).x + b(t) <= 0, i.e. RHS is -b(t)
    long start = 0;
    std::optional<long> end;
  };
  std::optional<Tail> tail;

  bool contains(long t) const {
    if (t >= 1 && t <= static_cast<long>(rows.size())) return true;
    return tail && t >= tail->start && (!tail->end || t <= *tail->end);
  }

  Row row(long t) const {
    if (t >= 1 && t <= static_cast<long>(rows.size())) return rows[static_cast<std::size_t>(t) - 1];
    Row r;
    r.a.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) r.a[i] = tail->a[i].at(t);
    r.b = -tail->b.at(t);
    return r;
  }
};

/// Row and objective extraction for problems whose data reduce to affine
/// expressions (no DomainRestrict, ExpOf, AbsOf or MaxOf anywhere).
inline std::optional<LinearSIP> detect_linear(const Problem& p) {
  auto obj = as_affine(p.objective(), p.dim());
  if (!obj) return std::nullopt;
  LinearSIP lp;
  lp.dim = p.dim();
  lp.c = obj->first;
  lp.obj_offset = obj->second;
  for (const FamilyMember& m : p.family().head()) {
    auto aff = as_affine(m.expr, p.dim());
    if (!aff) return std::nullopt;
    lp.rows.push_back({aff->first, -aff->second});
  }
  if (p.family().is_parametric()) {
    LinearSIP::Tail t;
    t.a = p.family().tail().coeffs;
    t.b = p.family().tail().offset;
    t.start = p.family().tail_start();
    t.end = p.family().tail_end();
    lp.tail = t;
  }
  return lp;
}

enum class HaarStatus { Optimal, DualInfeasible, Unbounded };

/// Optimal => the multiplier satisfies sum_t lambda_t * (-a_t) = c with
/// residual <= 1e-9 and value = obj_offset - sum_t lambda_t b_t.
struct HaarSolution {
  ExtReal value = ExtReal::minus_inf();
  Multiplier multiplier;
  std::vector<long> basis;
  HaarStatus status = HaarStatus::DualInfeasible;
  bool exact = true;  // false when the pool boundary still offers a value gain
  double residual = 0.0;
};

namespace detail {

// Dense Gaussian solve with partial pivoting; returns false when singular.
inline bool solve_dense(std::vector<std::vector<double>> A, std::vector<double> rhs,
                        std::vector<double>& out) {
  const std::size_t n = A.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(A[i][k]) > std::fabs(A[piv][k])) piv = i;
    if (std::fabs(A[piv][k]) < 1e-12) return false;
    std::swap(A[piv], A[k]);
    std::swap(rhs[piv], rhs[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      double m = A[i][k] / A[k][k];
      if (m == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) A[i][j] -= m * A[k][j];
      rhs[i] -= m * rhs[k];
    }
  }
  out.assign(n, 0.0);
  for (std::size_t ik = n; ik-- > 0;) {
    double s = rhs[ik];
    for (std::size_t j = ik + 1; j < n; ++j) s -= A[ik][j] * out[j];
    out[ik] = s / A[ik][ik];
  }
  return true;
}

struct Column {
  long id;                // family index; <= 0 marks an artificial
  std::vector<double> g;  // equality-constraint column, g = -a_t
  double d;               // phase-2 objective coefficient, d = -b_t
};

}  // namespace detail

/// Haar dual of a linear SIP over a finite candidate pool:
///   max  -sum b_t lambda_t   s.t.  sum lambda_t (-a_t) = c,  lambda >= 0.
/// Two-phase revised simplex with Bland's rule (entering: lowest improving
/// column id; leaving: lowest basic id among ratio ties), refactored every
/// pivot. The pool is all explicit rows plus tail indices up to
/// tail_pool_size; pricing scans it in id order. After termination the two
/// indices past the pool are probed; one that offers a first-order value gain
/// clears `exact` (degenerate reduced costs alone do not).
inline HaarSolution haar_dual(const LinearSIP& lp, long tail_pool_size = 200) {
  const std::size_t n = lp.dim;
  std::vector<detail::Column> cols;
  auto push_col = [&](long t) {
    auto r = lp.row(t);
    detail::Column c;
    c.id = t;
    c.g.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.g[i] = -r.a[i];
    c.d = -r.b;
    cols.push_back(std::move(c));
  };
  for (long t = 1; t <= static_cast<long>(lp.rows.size()); ++t) push_col(t);
  long tail_hi = 0;
  if (lp.tail) {
    tail_hi = lp.tail->end ? std::min(*lp.tail->end, lp.tail->start + tail_pool_size - 1)
                           : lp.tail->start + tail_pool_size - 1;
    for (long t = lp.tail->start; t <= tail_hi; ++t) push_col(t);
  }

  // Artificial identity columns, signed so the initial basic solution is >= 0.
  std::vector<detail::Column> art(n);
  for (std::size_t i = 0; i < n; ++i) {
    art[i].id = -static_cast<long>(i) - 1;
    art[i].g.assign(n, 0.0);
    art[i].g[i] = lp.c[i] >= 0.0 ? 1.0 : -1.0;
    art[i].d = 0.0;
  }

  std::vector<const detail::Column*> basis(n);
  for (std::size_t i = 0; i < n; ++i) basis[i] = &art[i];

  auto basis_matrix = [&]() {
    std::vector<std::vector<double>> B(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) B[i][j] = basis[j]->g[i];
    return B;
  };
  auto basic_solution = [&](std::vector<double>& lam) -> bool {
    return detail::solve_dense(basis_matrix(), lp.c, lam);
  };
  auto duals_for = [&](auto cost, std::vector<double>& y) -> bool {
    std::vector<std::vector<double>> Bt(n, std::vector<double>(n));
    std::vector<double> rhs(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) Bt[j][i] = basis[j]->g[i];
      rhs[j] = cost(*basis[j]);
    }
    return detail::solve_dense(Bt, rhs, y);
  };
  // Ratio test for an entering column; returns (leave_row, step) or leave = n.
  auto ratio_test = [&](const detail::Column& enter, const std::vector<double>& lam,
                        std::vector<double>& u) -> std::pair<std::size_t, double> {
    if (!detail::solve_dense(basis_matrix(), enter.g, u)) throw CyclingDetected();
    std::size_t leave = n;
    double best_ratio = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (u[j] > 1e-11) {
        double ratio = lam[j] / u[j];
        if (leave == n || ratio < best_ratio - 1e-12 ||
            (std::fabs(ratio - best_ratio) <= 1e-12 && basis[j]->id < basis[leave]->id)) {
          leave = j;
          best_ratio = ratio;
        }
      }
    }
    return {leave, leave == n ? 0.0 : best_ratio};
  };

  constexpr double kEps = 1e-9;
  HaarSolution sol;

  for (int phase = 1; phase <= 2; ++phase) {
    auto cost = [phase](const detail::Column& c) -> double {
      if (phase == 1) return c.id < 0 ? -1.0 : 0.0;  // maximize -sum(artificials)
      return c.id < 0 ? 0.0 : c.d;  // leftover artificials sit at zero level
    };
    for (long pivots = 0;; ++pivots) {
      if (pivots > 50000) throw CyclingDetected();
      std::vector<double> lam, y;
      if (!basic_solution(lam) || !duals_for(cost, y)) throw CyclingDetected();

      const detail::Column* enter = nullptr;
      for (const detail::Column& c : cols) {
        double rc = cost(c);
        for (std::size_t i = 0; i < n; ++i) rc -= y[i] * c.g[i];
        if (rc > kEps) {
          enter = &c;
          break;  // cols are in increasing id order (Bland)
        }
      }
      if (!enter) break;

      std::vector<double> u;
      auto [leave, step] = ratio_test(*enter, lam, u);
      (void)step;
      if (leave == n) {
        if (phase == 2) {
          sol.status = HaarStatus::Unbounded;
          sol.value = ExtReal::plus_inf();
          return sol;
        }
        throw CyclingDetected();  // phase 1 is bounded by construction
      }
      basis[leave] = enter;
    }

    if (phase == 1) {
      std::vector<double> lam;
      if (!basic_solution(lam)) throw CyclingDetected();
      double art_level = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (basis[j]->id < 0) art_level += std::fabs(lam[j]);
      if (art_level > 1e-8) {
        sol.status = HaarStatus::DualInfeasible;
        sol.value = ExtReal::minus_inf();
        return sol;
      }
      // Drive zero-level artificials out wherever a real column can replace
      // them; a row no real column touches is redundant and keeps its
      // artificial pinned at zero.
      for (std::size_t j = 0; j < n; ++j) {
        if (basis[j]->id >= 0) continue;
        for (const detail::Column& c : cols) {
          bool already_basic = false;
          for (std::size_t k = 0; k < n; ++k)
            if (basis[k] == &c) already_basic = true;
          if (already_basic) continue;
          std::vector<double> u;
          if (!detail::solve_dense(basis_matrix(), c.g, u)) continue;
          if (std::fabs(u[j]) > 1e-9) {
            basis[j] = &c;
            break;
          }
        }
      }
    }
  }

  std::vector<double> lam;
  if (!basic_solution(lam)) throw CyclingDetected();
  double value = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (basis[j]->id < 0) continue;
    value += basis[j]->d * lam[j];
    if (lam[j] > 1e-12) sol.multiplier.set(basis[j]->id, lam[j]);
    sol.basis.push_back(basis[j]->id);
  }
  std::sort(sol.basis.begin(), sol.basis.end());
  sol.status = HaarStatus::Optimal;
  sol.value = ExtReal::finite(value + lp.obj_offset);

  std::vector<double> resid(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = -lp.c[i];
  for (const auto& [t, w] : sol.multiplier.support()) {
    auto r = lp.row(t);
    for (std::size_t i = 0; i < n; ++i) resid[i] -= w * r.a[i];
  }
  for (double ri : resid) sol.residual = std::max(sol.residual, std::fabs(ri));

  if (lp.tail && !lp.tail->end) {
    std::vector<double> y;
    auto cost2 = [](const detail::Column& c) -> double { return c.id < 0 ? 0.0 : c.d; };
    if (duals_for(cost2, y)) {
      for (long t = tail_hi + 1; t <= tail_hi + 2; ++t) {
        auto r = lp.row(t);
        detail::Column c;
        c.id = t;
        c.g.resize(n);
        for (std::size_t i = 0; i < n; ++i) c.g[i] = -r.a[i];
        c.d = -r.b;
        double rc = c.d;
        for (std::size_t i = 0; i < n; ++i) rc -= y[i] * c.g[i];
        if (rc > 1e-7) {
          std::vector<double> u;
          auto [leave, step] = ratio_test(c, lam, u);
          if (leave == n || rc * step > 1e-9) {
            sol.exact = false;
            break;
          }
        }
      }
    }
  }
  return sol;
}

}  // namespace cip

#pragma once

// Test-only oracles, independent of the solver paths they check.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "ciplab/ciplab.hpp"

namespace testkit {

struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  long pick(long n) { return long(next() % std::uint64_t(n)); }
};

// Dense-grid brute force: min of the oracle over the box at fixed step.
inline double brute_grid_min(const cip::Oracle& f, const cip::Box& box, double step) {
  std::vector<long> counts;
  for (const cip::Interval& iv : box) counts.push_back(lround((iv.hi - iv.lo) / step));
  std::vector<double> x(box.size());
  std::vector<long> idx(box.size(), 0);
  double best = HUGE_VAL;
  while (true) {
    for (std::size_t i = 0; i < box.size(); ++i) x[i] = box[i].lo + step * double(idx[i]);
    cip::ExtReal v = f(x);
    if (v.is_finite() && v.value() < best) best = v.value();
    std::size_t i = 0;
    while (i < box.size() && ++idx[i] > counts[i]) idx[i++] = 0;
    if (i == box.size()) break;
  }
  return best;
}

// Exhaustive basic-solution enumeration for the Haar dual of a finite LSIP
// with n = 2: max sum(-b_t lambda_t) s.t. sum lambda_t (-a_t) = c, lambda >= 0.
// Every basic solution uses at most two columns.
struct EnumResult {
  bool feasible = false;
  double value = -HUGE_VAL;
};

inline EnumResult enumerate_haar_dual(const cip::LinearSIP& lp) {
  EnumResult out;
  const std::size_t m = lp.rows.size();
  auto col = [&](std::size_t t, std::size_t i) { return -lp.rows[t].a[i]; };
  auto d = [&](std::size_t t) { return -lp.rows[t].b; };
  if (std::fabs(lp.c[0]) < 1e-12 && std::fabs(lp.c[1]) < 1e-12) {
    out.feasible = true;
    out.value = std::max(out.value, 0.0);
  }
  for (std::size_t t = 0; t < m; ++t) {
    double g0 = col(t, 0), g1 = col(t, 1);
    double denom = g0 * g0 + g1 * g1;
    if (denom < 1e-14) continue;
    double lam = (g0 * lp.c[0] + g1 * lp.c[1]) / denom;
    if (lam < -1e-10) continue;
    if (std::fabs(g0 * lam - lp.c[0]) > 1e-9 || std::fabs(g1 * lam - lp.c[1]) > 1e-9) continue;
    out.feasible = true;
    out.value = std::max(out.value, d(t) * std::max(lam, 0.0));
  }
  for (std::size_t t = 0; t < m; ++t)
    for (std::size_t u = t + 1; u < m; ++u) {
      double det = col(t, 0) * col(u, 1) - col(t, 1) * col(u, 0);
      if (std::fabs(det) < 1e-10) continue;
      double lt = (lp.c[0] * col(u, 1) - lp.c[1] * col(u, 0)) / det;
      double lu = (col(t, 0) * lp.c[1] - col(t, 1) * lp.c[0]) / det;
      if (lt < -1e-10 || lu < -1e-10) continue;
      out.feasible = true;
      out.value = std::max(out.value, d(t) * std::max(lt, 0.0) + d(u) * std::max(lu, 0.0));
    }
  out.value = out.feasible ? out.value + lp.obj_offset : -HUGE_VAL;
  return out;
}

// Random finite LSIP, n = 2, primal-feasible at the origin (so the dual is
// never unbounded).
inline cip::LinearSIP random_lsip(Rng& rng, std::size_t rows = 5) {
  cip::LinearSIP lp;
  lp.dim = 2;
  double phi = rng.range(0.0, 6.2831853);
  lp.c = {std::cos(phi), std::sin(phi)};
  for (std::size_t t = 0; t < rows; ++t) {
    double th = rng.range(0.0, 6.2831853);
    lp.rows.push_back({{std::cos(th), std::sin(th)}, rng.range(0.1, 2.0)});
  }
  return lp;
}

// Random certified-convex 2-D expression with a smooth coercive bowl, so its
// minimum sits inside [-1, 1]^2 and a dense grid resolves it to ~1e-6.
inline cip::Expr random_convex_expr(Rng& rng) {
  using namespace cip;
  std::vector<Expr> terms;
  for (int i = 1; i <= 2; ++i) {
    double k = rng.range(1.0, 2.0);
    double c = rng.range(-0.3, 0.3);
    std::vector<double> a(2, 0.0);
    a[i - 1] = k;
    std::vector<double> na(2, 0.0);
    na[i - 1] = -k;
    terms.push_back(exp_of(affine(a, -k * c)));
    terms.push_back(exp_of(affine(na, k * c)));
  }
  long extras = rng.pick(3);
  for (long e = 0; e < extras; ++e) {
    double a0 = rng.range(-0.8, 0.8), a1 = rng.range(-0.8, 0.8), b = rng.range(-0.5, 0.5);
    switch (rng.pick(3)) {
      case 0:
        terms.push_back(pos_scale(0.3, abs_of(affine({a0, a1}, b))));
        break;
      case 1:
        terms.push_back(pos_scale(
            0.3, max_of({affine({a0, a1}, b),
                         affine({rng.range(-0.8, 0.8), rng.range(-0.8, 0.8)}, -b)})));
        break;
      default:
        terms.push_back(pos_scale(0.3, exp_of(affine({0.5 * a0, 0.5 * a1}, 0.0))));
        break;
    }
  }
  return sum(std::move(terms));
}

}  // namespace testkit

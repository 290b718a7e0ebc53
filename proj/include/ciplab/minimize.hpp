#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "ciplab/problem.hpp"

namespace cip {

using Oracle = std::function<ExtReal(std::span<const double>)>;

struct MinConfig {
  Box box;
  int coarse_grid = 33;          // points per axis on the scan grid
  int refine_rounds = 40;        // step-halving budget of the pattern search
  double shrink = 0.5;
  int box_growth_rounds = 6;     // extra scans on boxes scaled by growth_factor
  double growth_factor = 4.0;
  double unbounded_drop = 1e3;   // per-round value drop that suggests -inf
  double tol = 1e-8;
};

enum class MinStatus { Attained, ToleranceReached, UnboundedBelowSuspected, Infeasible };

inline const char* to_string(MinStatus s) {
  switch (s) {
    case MinStatus::Attained: return "attained";
    case MinStatus::ToleranceReached: return "tolerance-reached";
    case MinStatus::UnboundedBelowSuspected: return "unbounded-below-suspected";
    case MinStatus::Infeasible: return "infeasible";
  }
  return "?";
}

/// witness, when present, satisfies oracle(witness) == value up to tol;
/// for UnboundedBelowSuspected it is the best finite point seen.
struct MinResult {
  ExtReal value = ExtReal::plus_inf();
  std::optional<std::vector<double>> witness;
  MinStatus status = MinStatus::Infeasible;
  long evals = 0;
};

namespace detail {

struct BestPoint {
  double value;
  std::vector<double> x;
};

inline std::vector<std::vector<double>> directions(std::size_t n) {
  std::vector<std::vector<double>> dirs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d(n, 0.0);
    d[i] = 1.0;
    dirs.push_back(d);
    d[i] = -1.0;
    dirs.push_back(d);
  }
  // Diagonals help on piecewise-linear objectives where compass moves stall.
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (double si : {1.0, -1.0})
        for (double sj : {1.0, -1.0}) {
          std::vector<double> d(n, 0.0);
          d[i] = si * r;
          d[j] = sj * r;
          dirs.push_back(d);
        }
  return dirs;
}

inline void clip(std::vector<double>& x, const Box& box) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], box[i].lo, box[i].hi);
}

// Pattern search (best-improvement, shrinking steps) from x0 within box.
// The poll directions are rotated by the golden angle every round, so their
// union over rounds is dense on the circle; a fixed compass set can stall
// permanently on kinks and constraint walls of piecewise-linear objectives.
inline void pattern_refine(const Oracle& f, const Box& box, const MinConfig& cfg,
                           std::vector<double> x0, double value0, long& evals, BestPoint& best,
                           const std::vector<std::vector<double>>& dirs) {
  const std::size_t n = box.size();
  std::vector<double> x = std::move(x0);
  double fx = value0;
  double step = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    step = std::max(step, (box[i].hi - box[i].lo) / double(std::max(2, cfg.coarse_grid - 1)));
  std::vector<double> cand(n);
  std::vector<std::vector<double>> rdirs = dirs;
  std::uint64_t state = 0x452821E638D01377ull;
  auto rnd = [&state]() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  for (int round = 0; round < cfg.refine_rounds; ++round) {
    if (round > 0) {
      if (n == 2) {
        const double a = 2.3999632297286533 * round;  // golden angle
        const double ca = std::cos(a), sa = std::sin(a);
        for (std::size_t d = 0; d < dirs.size(); ++d) {
          rdirs[d][0] = ca * dirs[d][0] - sa * dirs[d][1];
          rdirs[d][1] = sa * dirs[d][0] + ca * dirs[d][1];
        }
      } else if (n > 2) {
        rdirs = dirs;
        for (int k = 0; k < 8; ++k) {
          std::vector<double> d(n);
          double norm = 0.0;
          for (double& di : d) {
            di = double(rnd() >> 11) * 0x1.0p-53 - 0.5;
            norm += di * di;
          }
          if (norm < 1e-12) continue;
          norm = std::sqrt(norm);
          for (double& di : d) di /= norm;
          rdirs.push_back(std::move(d));
        }
      }
    }
    bool moved = true;
    int moves = 0;
    while (moved && moves < 256) {
      moved = false;
      double best_v = fx;
      std::size_t best_d = rdirs.size();
      for (std::size_t d = 0; d < rdirs.size(); ++d) {
        for (std::size_t i = 0; i < n; ++i) cand[i] = x[i] + step * rdirs[d][i];
        clip(cand, box);
        ExtReal v = f(cand);
        ++evals;
        if (v.is_finite() && v.value() < best_v) {
          best_v = v.value();
          best_d = d;
        }
      }
      if (best_d < rdirs.size()) {
        for (std::size_t i = 0; i < n; ++i) x[i] += step * rdirs[best_d][i];
        clip(x, box);
        fx = best_v;
        moved = true;
        ++moves;
      }
    }
    step *= cfg.shrink;
  }
  if (fx < best.value) best = {fx, x};
}

// Exact 1-D minimization of f along x0 + t d (box-clipped): a dyadic ladder
// of |t| values locates the basin, golden section refines it. Convexity of f
// along the line makes the ladder-localized bracket valid.
inline bool line_min(const Oracle& f, const Box& box, std::vector<double>& x0, double& fx0,
                     const std::vector<double>& d, double diam, long& evals) {
  const std::size_t n = x0.size();
  auto val = [&](double t) -> double {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = x0[i] + t * d[i];
    clip(x, box);
    ExtReal v = f(x);
    ++evals;
    return v.is_finite() ? v.value() : HUGE_VAL;
  };
  double t_best = 0.0, f_best = fx0;
  for (double sign : {1.0, -1.0})
    for (int k = -20; k <= 1; ++k) {
      double t = sign * diam * std::pow(2.0, k);
      double v = val(t);
      if (v < f_best) {
        f_best = v;
        t_best = t;
      }
    }
  double gap = t_best == 0.0 ? diam * std::pow(2.0, -20) : std::fabs(t_best);
  double lo = t_best - gap, hi = t_best + gap;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - phi * (hi - lo), dd = lo + phi * (hi - lo);
  double fc = val(c), fd = val(dd);
  for (int it = 0; it < 70; ++it) {
    if (fc <= fd) {
      hi = dd;
      dd = c;
      fd = fc;
      c = hi - phi * (hi - lo);
      fc = val(c);
    } else {
      lo = c;
      c = dd;
      fc = fd;
      dd = lo + phi * (hi - lo);
      fd = val(dd);
    }
    double fbest2 = std::min(fc, fd);
    if (fbest2 < f_best) {
      f_best = fbest2;
      t_best = fc <= fd ? c : dd;
    }
  }
  if (f_best < fx0) {
    for (std::size_t i = 0; i < n; ++i) x0[i] += t_best * d[i];
    clip(x0, box);
    fx0 = f_best;
    return true;
  }
  return false;
}

// Powell-style polish: exact line searches along an adaptive direction set.
// After each sweep the net displacement replaces the direction of largest
// decrease, so narrow valleys of arbitrary orientation are followed with a
// single line search instead of a zigzag.
inline void powell_polish(const Oracle& f, const Box& box, const MinConfig& cfg, long& evals,
                          BestPoint& best) {
  const std::size_t n = box.size();
  double diam = 0.0;
  for (const Interval& iv : box) diam = std::max(diam, iv.hi - iv.lo);
  std::vector<std::vector<double>> dirs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d(n, 0.0);
    d[i] = 1.0;
    dirs.push_back(std::move(d));
  }
  std::vector<double> x = best.x;
  double fx = best.value;
  int stall = 0;
  for (int it = 0; it < 30 && stall < 2; ++it) {
    std::vector<double> x_start = x;
    double f_start = fx;
    double biggest = 0.0;
    std::size_t biggest_i = 0;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      double before = fx;
      line_min(f, box, x, fx, dirs[i], diam, evals);
      if (before - fx > biggest) {
        biggest = before - fx;
        biggest_i = i;
      }
    }
    std::vector<double> net(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      net[i] = x[i] - x_start[i];
      norm += net[i] * net[i];
    }
    norm = std::sqrt(norm);
    if (norm > 1e-14 * diam) {
      for (double& v : net) v /= norm;
      line_min(f, box, x, fx, net, diam, evals);
      dirs[biggest_i] = net;
    }
    if (f_start - fx <= cfg.tol * 1e-2 * (1.0 + std::fabs(fx)))
      ++stall;
    else
      stall = 0;
  }
  if (fx < best.value) best = {fx, x};
}

// Nelder-Mead polish from a finite start: the adaptive simplex elongates
// along narrow valleys (exact-penalty walls, kink rays) that fixed poll sets
// follow only slowly. Extreme barrier: +inf ranks worst. Deterministic.
inline void nelder_mead_polish(const Oracle& f, const Box& box, const MinConfig& cfg,
                               long& evals, BestPoint& best) {
  const std::size_t n = box.size();
  struct Vertex {
    std::vector<double> x;
    ExtReal v;
  };
  auto worse = [](const Vertex& a, const Vertex& b) { return a.v < b.v; };
  auto feval = [&](std::vector<double> x) -> Vertex {
    clip(x, box);
    ExtReal v = f(x);
    ++evals;
    return {std::move(x), v};
  };
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    scale = std::max(scale, (box[i].hi - box[i].lo) / double(std::max(2, cfg.coarse_grid - 1)));

  std::vector<Vertex> s;
  s.push_back({best.x, ExtReal::finite(best.value)});
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = best.x;
    x[i] += scale;
    s.push_back(feval(std::move(x)));
  }
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  const int iters = 400 * static_cast<int>(n);
  for (int it = 0; it < iters; ++it) {
    std::sort(s.begin(), s.end(), worse);
    if (s[0].v.is_finite() && s[n].v.is_finite()) {
      double spread = s[n].v.value() - s[0].v.value();
      double diam = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        diam = std::max(diam, std::fabs(s[n].x[i] - s[0].x[i]));
      if (spread <= cfg.tol * 1e-4 * (1.0 + std::fabs(s[0].v.value())) && diam <= 1e-12 * scale)
        break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += s[j].x[i] / double(n);
    auto along = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + t * (centroid[i] - s[n].x[i]);
      return x;
    };
    Vertex refl = feval(along(alpha));
    if (refl.v < s[0].v) {
      Vertex exp2 = feval(along(gamma));
      s[n] = exp2.v < refl.v ? std::move(exp2) : std::move(refl);
    } else if (refl.v < s[n - 1].v) {
      s[n] = std::move(refl);
    } else {
      Vertex contr = feval(along(refl.v < s[n].v ? rho : -rho));
      if (contr.v < std::min(refl.v, s[n].v)) {
        s[n] = std::move(contr);
      } else {
        for (std::size_t j = 1; j <= n; ++j) {
          std::vector<double> x(n);
          for (std::size_t i = 0; i < n; ++i) x[i] = s[0].x[i] + sigma * (s[j].x[i] - s[0].x[i]);
          s[j] = feval(std::move(x));
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), worse);
  if (s[0].v.is_finite() && s[0].v.value() < best.value) best = {s[0].v.value(), s[0].x};
}

// 2-D descent-fan polish: estimates the steepest descent direction from
// directional differences on an angular fan (coarse scan plus golden
// refinement of the angle), then line-minimizes along it. Narrow descent
// wedges at kinks of piecewise-linear objectives, which defeat any fixed
// direction set, are resolved down to ~1e-9 radians this way.
inline void fan_polish(const Oracle& f, const Box& box, const MinConfig& cfg, long& evals,
                       BestPoint& best) {
  if (box.size() != 2) return;
  double diam = std::max(box[0].hi - box[0].lo, box[1].hi - box[1].lo);
  std::vector<double> x = best.x;
  double fx = best.value;
  const double tau = 6.283185307179586;
  int failures = 0;
  for (int it = 0; it < 40; ++it) {
    double delta = std::max(1e-7 * (1.0 + std::fabs(x[0]) + std::fabs(x[1])), 1e-9);
    auto probe = [&](double th) -> double {
      double cand[2] = {x[0] + delta * std::cos(th), x[1] + delta * std::sin(th)};
      if (cand[0] < box[0].lo || cand[0] > box[0].hi || cand[1] < box[1].lo ||
          cand[1] > box[1].hi)
        return HUGE_VAL;
      ExtReal v = f(std::span<const double>(cand, 2));
      ++evals;
      return v.is_finite() ? v.value() - fx : HUGE_VAL;
    };
    const int K = 96;
    std::vector<std::pair<double, double>> fan(K);  // (g, theta)
    for (int k = 0; k < K; ++k) {
      double th = tau * k / K;
      fan[k] = {probe(th), th};
    }
    std::sort(fan.begin(), fan.end());
    double best_th = fan[0].second, best_g = fan[0].first;
    // golden-refine the few best sectors: a narrow descent wedge can hide
    // between coarse samples away from the coarse minimum
    for (int sector = 0; sector < 3; ++sector) {
      double lo = fan[sector].second - tau / K, hi = fan[sector].second + tau / K;
      const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
      double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
      double fc = probe(c), fd = probe(d);
      for (int g = 0; g < 40; ++g) {
        if (fc <= fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - phi * (hi - lo);
          fc = probe(c);
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + phi * (hi - lo);
          fd = probe(d);
        }
        double g2 = std::min(fc, fd);
        if (g2 < best_g) {
          best_g = g2;
          best_th = fc <= fd ? c : d;
        }
      }
    }
    if (!(best_g < -1e-12 * delta * (1.0 + std::fabs(fx)))) break;
    std::vector<double> dir = {std::cos(best_th), std::sin(best_th)};
    if (!line_min(f, box, x, fx, dir, diam, evals)) {
      if (++failures >= 2) break;
    } else {
      failures = 0;
    }
  }
  if (fx < best.value) best = {fx, x};
}

// One scan-and-refine pass over the given box. Returns the best finite point,
// or nullopt when the oracle is +inf on the entire grid.
inline std::optional<BestPoint> scan_box(const Oracle& f, const Box& box, const MinConfig& cfg,
                                         long& evals,
                                         const std::vector<std::vector<double>>& dirs) {
  const std::size_t n = box.size();
  int per_axis = std::max(3, cfg.coarse_grid);
  // cap total grid size for higher dimensions
  while (std::pow(double(per_axis), double(n)) > 2e5 && per_axis > 3) per_axis -= 2;

  constexpr std::size_t kStarts = 5;
  std::vector<BestPoint> starts;
  std::vector<double> x(n);
  std::vector<int> idx(n, 0);
  while (true) {
    for (std::size_t i = 0; i < n; ++i)
      x[i] = box[i].lo + (box[i].hi - box[i].lo) * idx[i] / double(per_axis - 1);
    ExtReal v = f(x);
    ++evals;
    if (v.is_finite()) {
      if (starts.size() < kStarts) {
        starts.push_back({v.value(), x});
        std::sort(starts.begin(), starts.end(),
                  [](const BestPoint& a, const BestPoint& b) { return a.value < b.value; });
      } else if (v.value() < starts.back().value) {
        starts.back() = {v.value(), x};
        std::sort(starts.begin(), starts.end(),
                  [](const BestPoint& a, const BestPoint& b) { return a.value < b.value; });
      }
    }
    std::size_t i = 0;
    while (i < n && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == n) break;
  }
  if (starts.empty()) return std::nullopt;
  BestPoint best = starts[0];
  for (const BestPoint& s : starts) pattern_refine(f, box, cfg, s.x, s.value, evals, best, dirs);
  for (int pass = 0; pass < 3; ++pass) {
    double before = best.value;
    nelder_mead_polish(f, box, cfg, evals, best);
    powell_polish(f, box, cfg, evals, best);
    fan_polish(f, box, cfg, evals, best);
    pattern_refine(f, box, cfg, best.x, best.value, evals, best, dirs);
    if (before - best.value <= cfg.tol * (1.0 + std::fabs(best.value))) break;
  }
  return best;
}

inline Box grow(const Box& box, double factor) {
  Box out = box;
  for (Interval& iv : out) {
    double c = 0.5 * (iv.lo + iv.hi);
    double hw = 0.5 * (iv.hi - iv.lo) * factor;
    iv.lo = c - hw;
    iv.hi = c + hw;
  }
  return out;
}

inline bool near_boundary(const std::vector<double>& x, const Box& box) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    double margin = 1e-6 * (box[i].hi - box[i].lo);
    if (x[i] - box[i].lo < margin || box[i].hi - x[i] < margin) return true;
  }
  return false;
}

// Direction panel for recession probing: axes and diagonals, plus a fine
// angular sweep in 2-D.
inline std::vector<std::vector<double>> probe_directions(std::size_t n) {
  std::vector<std::vector<double>> dirs = directions(n);
  if (n == 2) {
    const double tau = 6.283185307179586;
    const int K = 720;
    for (int k = 0; k < K; ++k) {
      double th = tau * k / K;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  }
  return dirs;
}

// Searches the unit sphere for a direction with rec(d) < -1e-9: axis and
// diagonal directions first, then for n = 2 a fine angular scan with golden
// refinement, else a deterministic sprinkle with local refinement. A hit is
// an exact certificate (rec is evaluated, not estimated); a miss is only
// heuristic absence.
inline bool negative_recession_direction(const Oracle& rec, std::size_t n) {
  constexpr double kNeg = -1e-9;
  auto val = [&](std::span<const double> d) -> double {
    ExtReal v = rec(d);
    if (v.is_plus_inf()) return HUGE_VAL;
    if (v.is_minus_inf()) return -HUGE_VAL;
    return v.value();
  };
  for (const auto& d : detail::directions(n))
    if (val(d) < kNeg) return true;
  if (n == 2) {
    const double tau = 6.283185307179586;
    const int K = 720;
    double best = HUGE_VAL, best_th = 0.0;
    for (int k = 0; k < K; ++k) {
      double th = tau * k / K;
      double d[2] = {std::cos(th), std::sin(th)};
      double v = val(std::span<const double>(d, 2));
      if (v < best) {
        best = v;
        best_th = th;
      }
    }
    if (best < kNeg) return true;
    if (best == HUGE_VAL) return false;
    auto at = [&](double th) {
      double d[2] = {std::cos(th), std::sin(th)};
      return val(std::span<const double>(d, 2));
    };
    double lo = best_th - tau / K, hi = best_th + tau / K;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - phi * (hi - lo), dd = lo + phi * (hi - lo);
    double fc = at(c), fd = at(dd);
    for (int it = 0; it < 60; ++it) {
      if (fc <= fd) {
        hi = dd;
        dd = c;
        fd = fc;
        c = hi - phi * (hi - lo);
        fc = at(c);
      } else {
        lo = c;
        c = dd;
        fc = fd;
        dd = lo + phi * (hi - lo);
        fd = at(dd);
      }
      if (std::min(fc, fd) < kNeg) return true;
    }
    return false;
  }
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  auto rnd = [&state]() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  std::vector<double> best_d;
  double best = HUGE_VAL;
  for (int k = 0; k < 512; ++k) {
    std::vector<double> d(n);
    double norm = 0.0;
    for (double& di : d) {
      di = double(rnd() >> 11) * 0x1.0p-53 - 0.5;
      norm += di * di;
    }
    if (norm < 1e-12) continue;
    norm = std::sqrt(norm);
    for (double& di : d) di /= norm;
    double v = val(d);
    if (v < best) {
      best = v;
      best_d = d;
    }
    if (v < kNeg) return true;
  }
  if (best_d.empty()) return false;
  double step = 0.25;
  for (int round = 0; round < 40; ++round) {
    bool moved = true;
    int guard = 0;
    while (moved && guard++ < 32) {
      moved = false;
      for (std::size_t i = 0; i < n; ++i)
        for (double sg : {1.0, -1.0}) {
          std::vector<double> d = best_d;
          d[i] += sg * step;
          double norm = 0.0;
          for (double di : d) norm += di * di;
          norm = std::sqrt(norm);
          for (double& di : d) di /= norm;
          double v = val(d);
          if (v < best) {
            best = v;
            best_d = d;
            moved = true;
            if (best < kNeg) return true;
          }
        }
    }
    step *= 0.5;
  }
  return best < kNeg;
}

}  // namespace detail

/// Derivative-free minimization of an extended-real oracle: multi-start coarse
/// grid, pattern-search refinement, then a box-growth loop that either
/// stabilizes the value or flags a suspected unbounded descent (two
/// consecutive growth rounds each dropping by more than cfg.unbounded_drop).
/// Deterministic for fixed inputs. Never reports a value below the best
/// point it actually evaluated.
///
/// `rec`, when given, is the oracle's recession function. A strictly negative
/// recession direction certifies the descent exactly (the drop heuristic
/// cannot see slopes shallower than its threshold); conversely a clean
/// recession screen disables the drop heuristic, since a convex function
/// with nonnegative recession everywhere is bounded below once feasible.
inline MinResult minimize(const Oracle& f, const MinConfig& cfg, const Oracle& rec = {}) {
  MinResult res;
  const auto dirs = detail::directions(cfg.box.size());
  Box box = cfg.box;
  std::optional<detail::BestPoint> best;
  double prev_drop = 0.0;
  bool grew_stable = false;
  bool rec_screened = false;
  bool rec_clean = false;
  Box last_box = box;

  for (int round = 0; round <= cfg.box_growth_rounds; ++round) {
    auto r = detail::scan_box(f, box, cfg, res.evals, dirs);
    if (r && (!best || r->value < best->value)) {
      if (rec && !rec_screened) {
        rec_screened = true;
        if (detail::negative_recession_direction(rec, cfg.box.size())) {
          res.value = ExtReal::minus_inf();
          res.status = MinStatus::UnboundedBelowSuspected;
          res.witness = r->x;
          return res;
        }
        rec_clean = true;
      }
      double drop = best ? best->value - r->value : 0.0;
      if (best && !rec_clean && drop > cfg.unbounded_drop && prev_drop > cfg.unbounded_drop) {
        res.value = ExtReal::minus_inf();
        res.status = MinStatus::UnboundedBelowSuspected;
        res.witness = r->x;
        return res;
      }
      prev_drop = best ? drop : 0.0;
      best = *r;
      last_box = box;
      if (round > 0 && drop <= cfg.tol * (1.0 + std::fabs(best->value))) {
        grew_stable = true;
        break;  // growth no longer helps
      }
    } else if (best) {
      grew_stable = true;
      break;
    }
    box = detail::grow(box, cfg.growth_factor);
  }

  if (!best) {
    res.value = ExtReal::plus_inf();
    res.status = MinStatus::Infeasible;
    return res;
  }

  // Grid ties can park the witness on a box face along a direction where the
  // objective is exactly flat (the minimum is then attained there too). Nudge
  // inward while the value stays put, so the boundary test below only sees
  // genuinely frontier-chasing witnesses.
  for (std::size_t i = 0; i < best->x.size(); ++i) {
    double width = last_box[i].hi - last_box[i].lo;
    double margin = 1e-6 * width;
    for (double target : {last_box[i].lo + 1e-3 * width, last_box[i].hi - 1e-3 * width}) {
      bool at_lo = best->x[i] - last_box[i].lo < margin && target > best->x[i];
      bool at_hi = last_box[i].hi - best->x[i] < margin && target < best->x[i];
      if (!at_lo && !at_hi) continue;
      std::vector<double> cand = best->x;
      cand[i] = target;
      ExtReal v = f(cand);
      ++res.evals;
      // exact non-increase only: anything looser would relocate along slowly
      // decaying tails and misreport unattained infima as attained
      if (v.is_finite() && v.value() <= best->value) {
        best->x = cand;
        best->value = v.value();
      }
    }
  }

  res.value = ExtReal::finite(best->value);
  res.witness = best->x;
  res.status = (grew_stable && !detail::near_boundary(best->x, last_box))
                   ? MinStatus::Attained
                   : MinStatus::ToleranceReached;
  return res;
}

using ScalarOracle = std::function<ExtReal(double)>;

struct Max1DResult {
  double s_star = 0.0;
  ExtReal value = ExtReal::minus_inf();
  bool attained = false;
};

/// Concave maximization over s >= 0: dyadic scan of [0, s_max] (step s_max/64,
/// so simple rationals like 1/16ths are hit exactly), bracket expansion while
/// the maximum sits at the right end (cap 2^16), then golden-section inside
/// the bracket. -inf samples are ordered below everything and never bracket.
/// Throws AllMinusInf when no sampled point is finite.
inline Max1DResult maximize_concave_1d(const ScalarOracle& f, double s_max = 4.0,
                                       double s_cap = 65536.0, int golden_iters = 80) {
  constexpr int kScan = 64;
  double best_s = 0.0;
  ExtReal best_v = ExtReal::minus_inf();
  int best_i = -1;
  bool capped = false;

  while (true) {
    best_v = ExtReal::minus_inf();
    best_i = -1;
    for (int i = 0; i <= kScan; ++i) {
      double s = s_max * double(i) / double(kScan);
      ExtReal v = f(s);
      if (v > best_v) {
        best_v = v;
        best_s = s;
        best_i = i;
      }
    }
    if (best_i < 0 || !best_v.is_finite()) throw AllMinusInf();
    if (best_i < kScan) break;
    if (s_max >= s_cap) {
      capped = true;
      break;
    }
    s_max = std::min(s_max * 2.0, s_cap);
  }

  double lo = best_s - s_max / double(kScan);
  double hi = best_s + s_max / double(kScan);
  lo = std::max(lo, 0.0);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - phi * (hi - lo);
  double d = lo + phi * (hi - lo);
  ExtReal fc = f(c), fd = f(d);
  for (int it = 0; it < golden_iters; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + phi * (hi - lo);
      fd = f(d);
    }
    if (fc > best_v) { best_v = fc; best_s = c; }
    if (fd > best_v) { best_v = fd; best_s = d; }
  }

  Max1DResult out;
  out.s_star = best_s;
  out.value = best_v;
  out.attained = !capped;  // at the cap the sup may only be approached
  return out;
}

}  // namespace cip

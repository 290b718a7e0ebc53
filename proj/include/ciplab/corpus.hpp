#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ciplab/duality.hpp"
#include "ciplab/problem.hpp"

namespace cip {

/// Expected values for a corpus instance, satisfying the weak-duality chain
/// by construction. Provenance names the source of each number: "analytic"
/// for hand-derived closed forms, "construction-kkt" for generated instances
/// whose optimum and multipliers are built in.
struct GroundTruth {
  ExtReal primal, d0, d, d1, limiting;
  bool slater = false;
  std::map<std::string, std::string> provenance;
};

struct Instance {
  Problem problem;
  GroundTruth truth;
};

namespace corpus {

/// Deterministic 64-bit mixer (splitmix64) so instances are reproducible.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  long pick(long n) { return static_cast<long>(next() % static_cast<std::uint64_t>(n)); }
};

/// min e^{x2} s.t. f1 = x1 on {x2 >= 0} (+inf below). The ordinary dual tops
/// out at 0 while the conic dual, sup-dual and primal all equal 1.
inline Instance example1() {
  Expr objective = exp_of(coord(2));
  Expr f1 = domain_restrict(coord(1), {AffineIneq{{0.0, -1.0}, 0.0}});
  IndexFamily fam = IndexFamily::finite({FamilyMember{"t1", f1}});
  Problem p("karney-example-1", 2, objective, fam, Box{{-8, 8}, {-8, 8}}, 50);
  GroundTruth t;
  t.primal = ExtReal::finite(1.0);
  t.d0 = ExtReal::finite(0.0);
  t.d = ExtReal::finite(1.0);
  t.d1 = ExtReal::finite(1.0);
  t.limiting = ExtReal::finite(1.0);
  t.slater = true;
  for (const char* k : {"primal", "d0", "d", "d1", "limiting", "slater"})
    t.provenance[k] = "analytic";
  return {std::move(p), std::move(t)};
}

/// min x2 s.t. x1 <= 0, -x2 <= 1, x1/t - x2 <= 0 (t = 3, 4, ...). The Haar
/// dual has the unique solution lambda = {t2: 1}, so sup(D0) = sup(D) = -1,
/// while inf(P) = sup(D1) = lim_{eps->0} v1(eps) = 0. The closed-form
/// sup-function is max(x1, -x2-1, max(x1/3, 0) - x2).
///
/// Strong Slater note: points like a = (-1, 1) give f_t(a) <= -1 for every t
/// (f_1 = -1, f_2 = -2, tail in [-4/3, -1)), so the condition genuinely holds
/// for this instance and the slater flag below says so.
inline Instance example2() {
  Expr objective = coord(2);
  std::vector<FamilyMember> head;
  head.push_back({"t1", affine({1.0, 0.0}, 0.0)});
  head.push_back({"t2", affine({0.0, -1.0}, -1.0)});
  AffineTemplate tail;
  tail.coeffs = {ScalarOfT{0.0, 0.0, 1.0}, ScalarOfT{-1.0, 0.0, 0.0}};
  tail.offset = ScalarOfT{0.0, 0.0, 0.0};
  Expr sup = max_of({affine({1.0, 0.0}, 0.0), affine({0.0, -1.0}, -1.0),
                     sum({max_of({affine({1.0 / 3.0, 0.0}, 0.0), constant(0.0)}),
                          affine({0.0, -1.0}, 0.0)})});
  IndexFamily fam = IndexFamily::parametric(std::move(head), tail, std::nullopt, sup);
  Problem p("karney-example-2", 2, objective, fam, Box{{-8, 8}, {-8, 8}}, 100);
  GroundTruth t;
  t.primal = ExtReal::finite(0.0);
  t.d0 = ExtReal::finite(-1.0);
  t.d = ExtReal::finite(-1.0);
  t.d1 = ExtReal::finite(0.0);
  t.limiting = ExtReal::finite(0.0);
  t.slater = true;
  for (const char* k : {"primal", "d0", "d", "d1", "limiting", "slater"})
    t.provenance[k] = "analytic";
  return {std::move(p), std::move(t)};
}

/// Parametric family with rows a_t = u + w/t, b_t = beta + gamma/t shrinking
/// toward the limit row u.x + beta <= 0 while keeping a uniform negative
/// margin at a constructed Slater point. The optimum sits on the kink where
/// the t=2 row meets the limit row; by KKT the objective c = -(u + theta w)
/// with theta < 1/2 makes the value beta + theta*gamma for primal and all
/// three duals.
inline Instance slater_family(std::uint64_t seed) {
  SplitMix64 rng(seed * 0x9E3779B97F4A7C15ull + 0x243F6A8885A308D3ull);
  const double pi = 3.14159265358979323846;
  double phi = double(rng.pick(24)) * pi / 12.0;
  double rho_u = 1.0 + 0.25 * double(rng.pick(4));                 // 1 .. 1.75
  double psi = (35.0 + 5.0 * double(rng.pick(8))) * pi / 180.0;    // 35 .. 70 deg
  double rho_w = 0.5 + 0.25 * double(rng.pick(3));                 // 0.5 .. 1
  double theta = 0.10 + 0.05 * double(rng.pick(8));                // 0.10 .. 0.45
  double beta = std::vector<double>{-1.0, -0.5, 0.5, 1.0}[static_cast<std::size_t>(rng.pick(4))];
  double gamma =
      std::vector<double>{-0.75, -0.25, 0.25, 0.5}[static_cast<std::size_t>(rng.pick(4))];
  double zeta = -0.5 - 0.5 * double(rng.pick(2));  // head row slack at z*

  std::vector<double> u = {rho_u * std::cos(phi), rho_u * std::sin(phi)};
  std::vector<double> w = {rho_w * std::cos(phi + psi), rho_w * std::sin(phi + psi)};

  // z* solves u.z = -beta, w.z = -gamma.
  double det = u[0] * w[1] - u[1] * w[0];
  std::vector<double> z = {(-beta * w[1] + gamma * u[1]) / det,
                           (-gamma * u[0] + beta * w[0]) / det};

  std::vector<double> c = {-(u[0] + theta * w[0]), -(u[1] + theta * w[1])};
  Expr objective = affine(c, 0.0);

  std::vector<FamilyMember> head;
  head.push_back({"t1", affine({2.0 * u[0], 2.0 * u[1]}, 2.0 * beta + zeta)});
  AffineTemplate tail;
  tail.coeffs = {ScalarOfT{u[0], 0.0, w[0]}, ScalarOfT{u[1], 0.0, w[1]}};
  tail.offset = ScalarOfT{beta, 0.0, gamma};
  // sup over t >= 2 of (w.x + gamma)/t is max((w.x + gamma)/2, 0)
  Expr sup = max_of(
      {affine({2.0 * u[0], 2.0 * u[1]}, 2.0 * beta + zeta),
       sum({affine(u, beta),
            max_of({affine({0.5 * w[0], 0.5 * w[1]}, 0.5 * gamma), constant(0.0)})})});
  IndexFamily fam = IndexFamily::parametric(std::move(head), tail, std::nullopt, sup);

  double reach = std::max(std::fabs(z[0]), std::fabs(z[1])) + 8.0;
  Problem p("slater_family_" + std::to_string(seed), 2, objective, fam,
            Box{{-reach, reach}, {-reach, reach}}, 100);

  double value = beta + theta * gamma;
  GroundTruth t;
  t.primal = t.d0 = t.d = t.d1 = t.limiting = ExtReal::finite(value);
  t.slater = true;
  for (const char* k : {"primal", "d0", "d", "d1", "limiting", "slater"})
    t.provenance[k] = "construction-kkt";
  return {std::move(p), std::move(t)};
}

/// Finite family (|T| <= 4): one active halfplane a1.x <= b1 with the
/// objective c = -lambda* a1, so the whole face is optimal with value
/// -lambda* b1 and multiplier {t1: lambda*}; the other rows are redundant on
/// a +-20 window and keep a strict Slater margin. All extra rows point into
/// the halfspace of a1 so the sup-dual function is -inf away from s = lambda*.
inline Instance finite_qp(std::uint64_t seed) {
  SplitMix64 rng(seed * 0xBF58476D1CE4E5B9ull + 0x452821E638D01377ull);
  const double pi = 3.14159265358979323846;
  double lambda_star = std::vector<double>{0.5, 1.0, 2.0}[static_cast<std::size_t>(rng.pick(3))];
  double phi = double(rng.pick(24)) * pi / 12.0;
  std::vector<double> c = {std::cos(phi), std::sin(phi)};
  std::vector<double> a1 = {-c[0] / lambda_star, -c[1] / lambda_star};
  double b1 = std::vector<double>{-1.0, -0.5, 0.5, 1.0}[static_cast<std::size_t>(rng.pick(4))];

  std::vector<FamilyMember> members;
  members.push_back({"t1", affine(a1, -b1)});
  long extra = 1 + rng.pick(3);  // |T| in 2..4
  double phi1 = std::atan2(a1[1], a1[0]);
  for (long j = 0; j < extra; ++j) {
    double off = (double(rng.pick(9)) - 4.0) * 20.0 * pi / 180.0;  // within +-80 deg of a1
    std::vector<double> aj = {std::cos(phi1 + off), std::sin(phi1 + off)};
    double margin = 0.5 + 1.5 * rng.uniform();
    double bj = 20.0 * (std::fabs(aj[0]) + std::fabs(aj[1])) + margin;
    members.push_back({"t" + std::to_string(j + 2), affine(aj, -bj)});
  }
  IndexFamily fam = IndexFamily::finite(std::move(members));
  Problem p("finite_qp_" + std::to_string(seed), 2, affine(c, 0.0), fam, Box{{-6, 6}, {-6, 6}},
            10);

  double value = -lambda_star * b1;
  GroundTruth t;
  t.primal = t.d0 = t.d = t.d1 = t.limiting = ExtReal::finite(value);
  t.slater = true;
  for (const char* k : {"primal", "d0", "d", "d1", "limiting", "slater"})
    t.provenance[k] = "construction-kkt";
  return {std::move(p), std::move(t)};
}

inline std::vector<std::string> registry() {
  return {"example1",        "example2",        "slater_family_1", "slater_family_2",
          "slater_family_3", "finite_qp_1",     "finite_qp_2",     "finite_qp_3"};
}

inline Instance make(const std::string& name) {
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  auto seed_of = [&](const std::string& prefix) -> std::optional<std::uint64_t> {
    if (name.rfind(prefix, 0) != 0) return std::nullopt;
    std::string rest = name.substr(prefix.size());
    if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos)
      return std::nullopt;
    return std::stoull(rest);
  };
  if (auto s = seed_of("slater_family_")) return slater_family(*s);
  if (auto s = seed_of("finite_qp_")) return finite_qp(*s);
  throw UnknownInstance(name);
}

}  // namespace corpus
}  // namespace cip

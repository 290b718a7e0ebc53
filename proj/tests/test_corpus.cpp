#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ciplab/corpus.hpp"
#include "ciplab/report.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace cip;

TEST_CASE("bundled ground truths") {
  GroundTruth t1 = corpus::example1().truth;
  CHECK(t1.primal == ExtReal::finite(1.0));
  CHECK(t1.d0 == ExtReal::finite(0.0));
  CHECK(t1.d == ExtReal::finite(1.0));
  CHECK(t1.d1 == ExtReal::finite(1.0));
  CHECK(t1.limiting == ExtReal::finite(1.0));
  CHECK(t1.slater);

  GroundTruth t2 = corpus::example2().truth;
  CHECK(t2.primal == ExtReal::finite(0.0));
  CHECK(t2.d0 == ExtReal::finite(-1.0));
  CHECK(t2.d == ExtReal::finite(-1.0));
  CHECK(t2.d1 == ExtReal::finite(0.0));
  CHECK(t2.limiting == ExtReal::finite(0.0));
  CHECK(t2.slater);
  CHECK(t2.provenance.at("primal") == "analytic");
}

TEST_CASE("ground truths respect the weak-duality chain") {
  std::vector<Instance> insts;
  for (const std::string& n : corpus::registry()) insts.push_back(corpus::make(n));
  for (std::uint64_t s = 1; s <= 20; ++s) {
    insts.push_back(corpus::slater_family(s));
    insts.push_back(corpus::finite_qp(s));
  }
  for (const Instance& i : insts) {
    CHECK(i.truth.d0 <= i.truth.d);
    CHECK(i.truth.d <= i.truth.d1);
    CHECK(i.truth.d1 <= i.truth.primal);
  }
}

TEST_CASE("seeded generators are deterministic") {
  CHECK(corpus::slater_family(9).problem == corpus::slater_family(9).problem);
  CHECK(corpus::finite_qp(9).problem == corpus::finite_qp(9).problem);
  CHECK_FALSE(corpus::slater_family(9).problem == corpus::slater_family(10).problem);
}

TEST_CASE("generated truths agree with a dense grid") {
  for (std::uint64_t seed : {5ull, 23ull}) {
    Instance inst = corpus::slater_family(seed);
    const Problem& p = inst.problem;
    Oracle constrained = [&](std::span<const double> x) -> ExtReal {
      if (!(sup_eval(p, x).value <= ExtReal::finite(0.0))) return ExtReal::plus_inf();
      return eval(p.objective(), x);
    };
    double brute = testkit::brute_grid_min(constrained, p.box(), 0.01);
    // a 0.01 grid on a kinked feasible set resolves the value to a few slopes
    CHECK(std::fabs(brute - inst.truth.primal.value()) <= 0.05);
    CHECK(brute >= inst.truth.primal.value() - 1e-9);
  }
  for (std::uint64_t seed : {7ull, 12ull}) {
    Instance inst = corpus::finite_qp(seed);
    const Problem& p = inst.problem;
    Oracle constrained = [&](std::span<const double> x) -> ExtReal {
      if (!(sup_eval(p, x).value <= ExtReal::finite(0.0))) return ExtReal::plus_inf();
      return eval(p.objective(), x);
    };
    double brute = testkit::brute_grid_min(constrained, p.box(), 0.005);
    CHECK(std::fabs(brute - inst.truth.primal.value()) <= 0.02);
    CHECK(brute >= inst.truth.primal.value() - 1e-9);
  }
}

TEST_CASE("constructed multiplier is Haar-optimal for the active row") {
  Instance inst = corpus::finite_qp(7);
  auto lp = detect_linear(inst.problem);
  REQUIRE(lp.has_value());
  HaarSolution sol = haar_dual(*lp);
  CHECK(sol.status == HaarStatus::Optimal);
  CHECK(std::fabs(sol.value.value() - inst.truth.d0.value()) <= 1e-9);
  CHECK(sol.multiplier.weight(1) > 0.0);  // the constructed active row carries weight
  CHECK(sol.residual <= 1e-9);
}

TEST_CASE("constructed Slater margin is uniform across the family") {
  Instance inst = corpus::slater_family(2);
  SolverConfig cfg = make_config(inst.problem);
  auto cert = strong_slater(inst.problem, cfg);
  REQUIRE(cert.has_value());
  for (long t = 1; t <= 10000; ++t)
    CHECK(inst.problem.family().eval_member(t, cert->a) <= ExtReal::finite(-cert->alpha));
}

TEST_CASE("truncation gap of the counterexample instance") {
  Instance e2 = corpus::example2();
  SolverConfig cfg = make_config(e2.problem);
  cfg.trunc = 100;

  DualReport exact = solve_primal(e2.problem, cfg);
  CHECK(std::fabs(exact.value.value()) <= 1e-3);
  CHECK(exact.exact);

  Problem truncated = e2.problem.without_sup_expr();
  DualReport gap = solve_primal(truncated, cfg);
  CHECK(gap.value.value() <= -1.0 + 1e-3);  // truncated feasible sets reach x2 near -1
  CHECK_FALSE(gap.exact);
}

TEST_CASE("corpus self-check machinery") {
  Instance e1 = corpus::example1();
  SolverConfig cfg = make_config(e1.problem);
  CorpusDiff ok = corpus_check(e1, cfg);
  CHECK(ok.ok);

  Instance wrong = e1;
  wrong.truth.d0 = ExtReal::finite(0.5);  // injected wrong truth
  CorpusDiff bad = corpus_check(wrong, cfg);
  CHECK_FALSE(bad.ok);
}

TEST_CASE("registry lookups") {
  CHECK(corpus::make("example1").problem.name() == "karney-example-1");
  CHECK(corpus::make("slater_family_4").problem.name() == "slater_family_4");
  CHECK(corpus::make("finite_qp_12").problem.name() == "finite_qp_12");
  CHECK_THROWS_AS(corpus::make("nonsense"), UnknownInstance);
  CHECK_THROWS_AS(corpus::make("slater_family_"), UnknownInstance);
  CHECK(corpus::registry().size() >= 8);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ciplab/corpus.hpp"
#include "ciplab/io.hpp"
#include "support/oracles.hpp"

#include <vector>

using namespace cip;

namespace {
std::vector<double> pt(double a, double b) { return {a, b}; }
}  // namespace

TEST_CASE("evaluation of the bundled expressions") {
  Instance e1 = corpus::example1();
  CHECK(eval(e1.problem.objective(), pt(0, 0)) == ExtReal::finite(1.0));
  // x1 restricted to x2 >= 0 is +inf below the axis
  const Expr& f1 = e1.problem.family().head()[0].expr;
  CHECK(eval(f1, pt(5, -1)).is_plus_inf());
  CHECK(eval(f1, pt(5, 1)) == ExtReal::finite(5.0));
  CHECK(eval(constant(0.0), pt(3, -7)) == ExtReal::finite(0.0));
}

TEST_CASE("dimension mismatches are reported") {
  std::vector<double> x{1.0};
  CHECK_THROWS_AS(eval(coord(2), x), DimensionMismatch);
  CHECK_THROWS_AS(eval(affine({1, 2}, 0), x), DimensionMismatch);
}

TEST_CASE("convexity certification") {
  CHECK(is_convex(exp_of(coord(2))).certified);
  CHECK(is_convex(domain_restrict(coord(1), {AffineIneq{{0, -1}, 0}})).certified);
  // rejected at construction: positive scaling demands c > 0
  CHECK_THROWS_AS(pos_scale(-1.0, exp_of(coord(1))), ConvexityRejected);
  CHECK_THROWS_AS(pos_scale(0.0, coord(1)), ConvexityRejected);
  CHECK_THROWS_AS(abs_of(exp_of(coord(1))), ConvexityRejected);
  CHECK_THROWS_AS(sum({}), ConvexityRejected);

  // a hand-assembled node that bypassed the builders is still caught
  ExprNode raw;
  raw.op = ExprOp::PosScale;
  raw.scalar = -2.0;
  raw.kids.push_back(coord(1));
  CertResult r = is_convex(detail::make(std::move(raw)));
  CHECK_FALSE(r.certified);
  CHECK(r.path == "expr");
}

TEST_CASE("convexity holds on sampled segments") {
  testkit::Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    Expr e = testkit::random_convex_expr(rng);
    REQUIRE(is_convex(e).certified);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> x{rng.range(-2, 2), rng.range(-2, 2)};
      std::vector<double> y{rng.range(-2, 2), rng.range(-2, 2)};
      for (double th : {0.25, 0.5, 0.75}) {
        std::vector<double> z{th * x[0] + (1 - th) * y[0], th * x[1] + (1 - th) * y[1]};
        ExtReal fz = eval(e, z), fx = eval(e, x), fy = eval(e, y);
        if (fx.is_plus_inf() || fy.is_plus_inf()) continue;  // rhs is +inf
        double rhs = th * fx.value() + (1 - th) * fy.value();
        REQUIRE(fz.is_finite());
        CHECK(fz.value() <= rhs + 1e-9 * (1 + std::fabs(rhs)));
      }
    }
  }
}

TEST_CASE("recession function bounds difference quotients") {
  testkit::Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    Expr e = testkit::random_convex_expr(rng);
    std::vector<double> x{rng.range(-1, 1), rng.range(-1, 1)};
    double th = rng.range(0, 6.2831853);
    std::vector<double> d{std::cos(th), std::sin(th)};
    ExtReal rec = recession(e, d);
    ExtReal fx = eval(e, x);
    REQUIRE(fx.is_finite());
    for (double T : {1.0, 100.0, 1e5}) {
      std::vector<double> z{x[0] + T * d[0], x[1] + T * d[1]};
      ExtReal fz = eval(e, z);
      if (!fz.is_finite()) continue;
      double quotient = (fz.value() - fx.value()) / T;
      if (rec.is_finite())
        CHECK(quotient <= rec.value() + 1e-6 * (1 + std::fabs(rec.value())));
    }
    // positive homogeneity
    if (rec.is_finite()) {
      std::vector<double> d2{2 * d[0], 2 * d[1]};
      CHECK(recession(e, d2).value() == doctest::Approx(2 * rec.value()).epsilon(1e-12));
    }
  }
}

TEST_CASE("recession of restricted and exp expressions") {
  Instance e1 = corpus::example1();
  const Expr& f1 = e1.problem.family().head()[0].expr;
  CHECK(recession(f1, pt(-1, 0)) == ExtReal::finite(-1.0));  // along the domain face
  CHECK(recession(f1, pt(0, -1)).is_plus_inf());             // leaves the domain cone
  CHECK(recession(e1.problem.objective(), pt(0, 1)).is_plus_inf());
  CHECK(recession(e1.problem.objective(), pt(0, -1)) == ExtReal::finite(0.0));
}

TEST_CASE("sup-function evaluation routes") {
  Instance e2 = corpus::example2();
  SupVal exact = sup_eval(e2.problem, pt(-1, 0));
  CHECK(exact.exact);
  CHECK(exact.value == ExtReal::finite(0.0));

  Problem truncated = e2.problem.without_sup_expr();
  SupVal t100 = sup_eval(truncated, pt(-1, 0), 100);
  CHECK_FALSE(t100.exact);
  CHECK(t100.value.value() == doctest::Approx(-0.01));  // max over t<=100 is -1/100

  Instance e1 = corpus::example1();
  SupVal s = sup_eval(e1.problem, pt(2, 1));
  CHECK(s.exact);
  CHECK(s.value == ExtReal::finite(2.0));
}

TEST_CASE("truncated sup is monotone in the level and below the closed form") {
  Instance e2 = corpus::example2();
  Problem truncated = e2.problem.without_sup_expr();
  testkit::Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x{rng.range(-6, 6), rng.range(-6, 6)};
    ExtReal closed = sup_eval(e2.problem, x).value;
    ExtReal prev = ExtReal::minus_inf();
    for (long n : {3L, 10L, 50L, 200L, 2000L}) {
      ExtReal v = sup_eval(truncated, x, n).value;
      CHECK(v >= prev);
      // 1/t applied as division vs. multiplication differs by an ulp
      CHECK(v.value() <= closed.value() + 1e-12 * (1 + std::fabs(closed.value())));
      prev = v;
    }
  }
}

TEST_CASE("set membership") {
  Instance e1 = corpus::example1();
  Instance e2 = corpus::example2();
  CHECK_FALSE(member(e1.problem, pt(3, -1), SetTag::M));
  CHECK(member(e2.problem, pt(-1, 0), SetTag::E, 100, 0.0));
  CHECK(member(e1.problem, pt(123, -456), SetTag::AllX));

  testkit::Rng rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x{rng.range(-4, 4), rng.range(-4, 4)};
    for (const Problem* p : {&e1.problem, &e2.problem}) {
      if (member(*p, x, SetTag::E, 100, 0.0)) CHECK(member(*p, x, SetTag::M));
      if (member(*p, x, SetTag::Delta1)) CHECK(member(*p, x, SetTag::Delta));
    }
  }
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(Problem("bad", 9, constant(0), IndexFamily::finite({{"t1", constant(-1)}}),
                          Box(9, {-1, 1}), 10),
                  SchemaError);
  CHECK_THROWS_AS(Problem("bad", 2, coord(1), IndexFamily::finite({{"t1", constant(-1)}}),
                          Box{{-1, 1}}, 10),
                  SchemaError);
  CHECK_THROWS_AS(Problem("bad", 1, coord(2), IndexFamily::finite({{"t1", constant(-1)}}),
                          Box{{-1, 1}}, 10),
                  SchemaError);
  // objective +inf on the whole box hint: not proper there
  Expr never = domain_restrict(constant(0), {AffineIneq{{0.0, 0.0}, 1.0}});
  CHECK_THROWS_AS(Problem("bad", 2, never, IndexFamily::finite({{"t1", constant(-1)}}),
                          Box{{-1, 1}, {-1, 1}}, 10),
                  SchemaError);
  CHECK_THROWS_AS(IndexFamily::finite({}), SchemaError);
}

TEST_CASE("family indexing") {
  Instance e2 = corpus::example2();
  const IndexFamily& fam = e2.problem.family();
  CHECK(fam.is_parametric());
  CHECK(fam.tail_start() == 3);
  CHECK(fam.contains(1));
  CHECK(fam.contains(1000000));
  CHECK_FALSE(fam.contains(0));
  CHECK(fam.label(2) == "t2");
  CHECK(fam.label(17) == "t17");
  CHECK(eval(fam.member(5), pt(10, 1)) == ExtReal::finite(10.0 / 5.0 - 1.0));
  CHECK(fam.eval_member(5, pt(10, 1)) == ExtReal::finite(10.0 / 5.0 - 1.0));
  CHECK(fam.indices_up_to(4) == std::vector<long>{1, 2, 3, 4});
}

TEST_CASE("problem files round-trip") {
  for (const char* name : {"example1", "example2", "slater_family_1", "finite_qp_7"}) {
    Instance inst = corpus::make(name);
    Problem back = parse_problem(serialize_problem(inst.problem));
    CHECK(back == inst.problem);
  }
}

TEST_CASE("shipped problem files match the corpus constructions") {
  CHECK(load_problem(std::string(CIPLAB_PROBLEMS_DIR) + "/example1.cip") ==
        corpus::example1().problem);
  CHECK(load_problem(std::string(CIPLAB_PROBLEMS_DIR) + "/example2.cip") ==
        corpus::example2().problem);
  CHECK(load_problem(std::string(CIPLAB_PROBLEMS_DIR) + "/slater_family_1.cip") ==
        corpus::slater_family(1).problem);
  CHECK(load_problem(std::string(CIPLAB_PROBLEMS_DIR) + "/finite_qp_7.cip") ==
        corpus::finite_qp(7).problem);
  Problem e1 = load_problem(std::string(CIPLAB_PROBLEMS_DIR) + "/example1.cip");
  CHECK(e1.name() == "karney-example-1");
  CHECK(e1.dim() == 2);
  CHECK(e1.family().head().size() == 1);
}

TEST_CASE("schema errors carry a path") {
  CHECK_THROWS_AS(parse_problem("{not json"), SchemaError);
  CHECK_THROWS_AS(parse_problem("{\"name\":\"x\"}"), SchemaError);
  CHECK_THROWS_AS(parse_problem(R"({"name":"x","dim":2,
    "objective":{"op":"coord","i":1},
    "constraints":{"kind":"weird"},
    "box":[[-1,1],[-1,1]]})"),
                  SchemaError);
  CHECK_THROWS_AS(parse_problem(R"({"name":"x","dim":2,
    "objective":{"op":"nope"},
    "constraints":{"kind":"finite","items":[{"expr":{"op":"const","value":-1}}]},
    "box":[[-1,1],[-1,1]]})"),
                  SchemaError);
  CHECK_THROWS_AS(load_problem("/nonexistent/path.cip"), SchemaError);
}

TEST_CASE("negative scale weights in documents are convexity-rejected") {
  try {
    parse_problem(R"({"name":"x","dim":2,
      "objective":{"op":"scale","c":-2,"arg":{"op":"coord","i":1}},
      "constraints":{"kind":"finite","items":[{"expr":{"op":"const","value":-1}}]},
      "box":[[-1,1],[-1,1]]})");
    FAIL("expected ConvexityRejected");
  } catch (const ConvexityRejected& e) {
    CHECK(e.path.find("objective") != std::string::npos);
  }
}

TEST_CASE("scalar-of-t coefficient forms") {
  std::string text = R"({"name":"t","dim":1,
    "objective":{"op":"coord","i":1},
    "constraints":{"kind":"parametric",
      "tail":{"coeffs":[{"invT":1.0,"c":2.0}],"offset":-1.0},
      "tailEnd":9},
    "box":[[-4,4]],"truncation":5})";
  Problem p = parse_problem(text);
  CHECK(p.family().is_parametric());
  CHECK(p.family().is_enumerable());
  CHECK(p.family().tail_start() == 1);
  // f_t(x) = (2 + 1/t) x - 1
  CHECK(p.family().eval_member(4, std::vector<double>{2.0}) ==
        ExtReal::finite((2.0 + 0.25) * 2.0 - 1.0));
  CHECK(parse_problem(serialize_problem(p)) == p);
}

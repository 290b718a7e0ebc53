#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ciplab/corpus.hpp"
#include "ciplab/report.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using namespace cip;

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(CIPLAB_BIN) + " " + args + " >/tmp/ciplab_out.txt 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string last_output() {
  std::ifstream in("/tmp/ciplab_out.txt");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string problems(const char* file) {
  return std::string(CIPLAB_PROBLEMS_DIR) + "/" + file;
}

}  // namespace

TEST_CASE("analyze exits cleanly and prints the chain") {
  CHECK(run("analyze " + problems("example1.cip")) == 0);
  std::string out = last_output();
  CHECK(out.find("sup(D0)") != std::string::npos);
  CHECK(out.find("chain") != std::string::npos);
}

TEST_CASE("analyze reports the strict gap on the counterexample") {
  CHECK(run("analyze " + problems("example2.cip")) == 0);
  std::string out = last_output();
  CHECK(out.find("gap") != std::string::npos);
  CHECK(out.find("strict") != std::string::npos);
}

TEST_CASE("missing input file exits with the input-error code") {
  CHECK(run("analyze /nonexistent.cip") == 3);
  CHECK(run("slater /nonexistent.cip") == 3);
}

TEST_CASE("malformed documents exit with the input-error code") {
  std::ofstream bad("/tmp/bad.cip");
  bad << "{\"name\":\"x\"}";
  bad.close();
  CHECK(run("analyze /tmp/bad.cip") == 3);
  std::ofstream nonconvex("/tmp/nonconvex.cip");
  nonconvex << R"({"name":"x","dim":1,
    "objective":{"op":"scale","c":-1,"arg":{"op":"coord","i":1}},
    "constraints":{"kind":"finite","items":[{"expr":{"op":"const","value":-1}}]},
    "box":[[-1,1]]})";
  nonconvex.close();
  CHECK(run("analyze /tmp/nonconvex.cip") == 3);
}

TEST_CASE("invalid sweep schedules are input errors") {
  CHECK(run("sweep " + problems("example1.cip") + " --ratio 1.5") == 3);
  CHECK(run("sweep " + problems("example1.cip") + " --eps0 0") == 3);
}

TEST_CASE("corpus commands") {
  CHECK(run("corpus list") == 0);
  CHECK(run("corpus run example1") == 0);
  CHECK(run("corpus run nonsense") == 3);
}

TEST_CASE("duals and slater subcommands") {
  CHECK(run("duals " + problems("finite_qp_7.cip") + " --which d1") == 0);
  CHECK(run("slater " + problems("example1.cip")) == 0);
  CHECK(last_output().find("alpha") != std::string::npos);
}

TEST_CASE("sweep writes csv and svg artifacts") {
  CHECK(run("sweep " + problems("example2.cip") +
            " --count 6 --csv /tmp/sweep.csv --svg /tmp/sweep.svg") == 0);
  std::ifstream csv("/tmp/sweep.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "epsilon,value,exact");
  int rows = 0;
  double eps, val;
  char comma;
  int exact;
  std::string line;
  while (std::getline(csv, line)) {
    std::istringstream ls(line);
    ls >> eps >> comma >> val >> comma >> exact;
    CHECK(std::fabs(val + eps) <= 1e-3 * (1 + eps));  // v1(eps) = -eps here
    CHECK(exact == 1);
    ++rows;
  }
  CHECK(rows == 6);
  std::ifstream svg("/tmp/sweep.svg");
  std::ostringstream ss;
  ss << svg.rdbuf();
  CHECK(ss.str().find("<svg") != std::string::npos);
  CHECK(ss.str().find("polyline") != std::string::npos);
}

TEST_CASE("extended-real json tokens") {
  CHECK(extreal_to_json(ExtReal::finite(2.5)) == nlohmann::json(2.5));
  CHECK(extreal_to_json(ExtReal::plus_inf()) == nlohmann::json("+inf"));
  CHECK(extreal_to_json(ExtReal::minus_inf()) == nlohmann::json("-inf"));
  CHECK(extreal_from_json(nlohmann::json(-0.25)) == ExtReal::finite(-0.25));
  CHECK(extreal_from_json(nlohmann::json("+inf")).is_plus_inf());
  CHECK(extreal_from_json(nlohmann::json("-inf")).is_minus_inf());
  CHECK_THROWS_AS(extreal_from_json(nlohmann::json("nan")), SchemaError);
  for (const ExtReal& v : {ExtReal::finite(1.0 / 3.0), ExtReal::plus_inf(), ExtReal::minus_inf()})
    CHECK(extreal_from_json(extreal_to_json(v)) == v);
}

TEST_CASE("json report round-trips") {
  Instance e1 = corpus::example1();
  RunReport r = analyze(e1.problem, make_config(e1.problem));
  nlohmann::json j = report_to_json(r);
  RunReport back = report_from_json(j);
  CHECK(report_to_json(back) == j);
  CHECK(back.problem == r.problem);
  CHECK(back.chain_ok == r.chain_ok);
  CHECK(back.primal.value == r.primal.value);
}

TEST_CASE("analyze --json carries the schema fields") {
  CHECK(run("analyze " + problems("example1.cip") + " --json") == 0);
  nlohmann::json j = nlohmann::json::parse(last_output());
  CHECK(j.at("problem") == "karney-example-1");
  CHECK(j.at("chainOk") == true);
  const auto& res = j.at("results");
  CHECK(extreal_from_json(res.at("primal").at("value")).value() ==
        doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::fabs(extreal_from_json(res.at("d0").at("value")).value()) <= 1e-3);
  CHECK(res.at("d1").contains("sStar"));
  CHECK(res.at("slater").at("found") == true);
  CHECK(res.at("limit").at("converged") == true);
}

TEST_CASE("chain line groups equal values") {
  Instance e2 = corpus::example2();
  RunReport r = analyze(e2.problem, make_config(e2.problem));
  std::string line = chain_line(r);
  CHECK(line.find("sup(D0)") != std::string::npos);
  CHECK(line.find(" < ") != std::string::npos);
  CHECK(line.find("inf(P)") != std::string::npos);
  CHECK(r.gap_strict);
}

TEST_CASE("deterministic reports") {
  Instance qp = corpus::finite_qp(3);
  RunReport a = analyze(qp.problem, make_config(qp.problem));
  RunReport b = analyze(qp.problem, make_config(qp.problem));
  a.seconds.clear();
  b.seconds.clear();
  CHECK(report_to_json(a) == report_to_json(b));
}

// ciplab: analyze convex infinite programs -- primal value, the three
// Lagrangian duals, epsilon sweeps, lsc hulls and Slater certificates.
//
// Exit codes: 0 ok, 2 chain violation / expectation mismatch,
//             3 input error, 4 internal solver anomaly.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ciplab/ciplab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 2;
constexpr int kExitInput = 3;
constexpr int kExitInternal = 4;

cip::Problem load_or_die(const std::string& path) { return cip::load_problem(path); }

void print_dual(const cip::RunReport& r, const cip::DualReport& d, const char* name) {
  std::printf("  %-8s %-12s %s%s", name, cip::fmt(d.value).c_str(),
              d.attained ? "attained" : "sup-only", d.exact ? "" : "  [truncated]");
  if (d.which == cip::DualKind::D1 && d.s_star)
    std::printf("  s* = %s", cip::fmt_num(*d.s_star).c_str());
  if ((d.which == cip::DualKind::D0 || d.which == cip::DualKind::D) && !d.multiplier.empty())
    std::printf("  lambda = %s", d.multiplier.str().c_str());
  if (d.which == cip::DualKind::Primal && d.witness) {
    std::printf("  at (");
    for (std::size_t i = 0; i < d.witness->size(); ++i)
      std::printf("%s%s", i ? ", " : "", cip::fmt_num((*d.witness)[i]).c_str());
    std::printf(")");
  }
  std::printf("\n");
  (void)r;
}

int cmd_analyze(const std::string& file, long trunc, bool as_json) {
  cip::Problem p = load_or_die(file);
  cip::SolverConfig cfg = cip::make_config(p);
  if (trunc > 0) cfg.trunc = trunc;
  cip::RunReport r = cip::analyze(p, cfg);
  if (as_json) {
    std::cout << cip::report_to_json(r).dump(2) << "\n";
  } else {
    std::printf("problem: %s  (n=%zu, %s family)\n", p.name().c_str(), p.dim(),
                p.family().is_parametric() ? "parametric" : "finite");
    print_dual(r, r.primal, "inf(P)");
    print_dual(r, r.d0, "sup(D0)");
    print_dual(r, r.d, "sup(D)");
    print_dual(r, r.d1, "sup(D1)");
    if (r.slater) {
      std::printf("  slater   found: a = (");
      for (std::size_t i = 0; i < r.slater->a.size(); ++i)
        std::printf("%s%s", i ? ", " : "", cip::fmt_num(r.slater->a[i]).c_str());
      std::printf("), alpha = %s%s\n", cip::fmt_num(r.slater->alpha).c_str(),
                  r.slater->exact ? "" : "  [truncated]");
    } else {
      std::printf("  slater   not found\n");
    }
    std::printf("  limit    %-12s %s%s\n", cip::fmt(r.limit.limit_estimate).c_str(),
                r.limit.converged ? "converged" : "not converged",
                r.limit.exact ? "" : "  [truncated]");
    std::printf("  lsc hull %-12s%s\n", cip::fmt(r.lsc.value).c_str(),
                r.lsc.exact ? "" : "  [truncated]");
    std::printf("  chain    %s   [%s]\n", cip::chain_line(r).c_str(),
                r.chain_ok ? "ok" : ("VIOLATION: " + r.chain_violation).c_str());
    if (r.gap_strict)
      std::printf("  gap      sup(D0) = %s < %s = limiting value  (strict)\n",
                  cip::fmt(r.d0.value).c_str(), cip::fmt(r.limit.limit_estimate).c_str());
  }
  return r.chain_ok ? kExitOk : kExitViolation;
}

int cmd_sweep(const std::string& file, double eps0, double ratio, int count,
              const std::string& csv, const std::string& svg, bool as_json) {
  if (!(eps0 > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 1) {
    std::cerr << "input error: sweep needs eps0 > 0, ratio in (0,1), count >= 1\n";
    return kExitInput;
  }
  cip::Problem p = load_or_die(file);
  cip::SolverConfig cfg = cip::make_config(p);
  cip::SweepSchedule sch{eps0, ratio, count};
  cip::SweepResult s = cip::limiting_value(p, sch, cfg);
  if (!csv.empty()) cip::write_sweep_csv(s, csv);
  if (!svg.empty()) cip::write_sweep_svg(s, svg);
  if (as_json) {
    nlohmann::json j;
    nlohmann::json eps = nlohmann::json::array(), vals = nlohmann::json::array();
    for (double e : s.epsilons) eps.push_back(e);
    for (const cip::ExtReal& v : s.values) vals.push_back(cip::extreal_to_json(v));
    j = {{"problem", p.name()},      {"epsilons", eps},
         {"values", vals},           {"estimate", cip::extreal_to_json(s.limit_estimate)},
         {"monotone", s.monotone},   {"converged", s.converged},
         {"exact", s.exact}};
    std::cout << j.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < s.epsilons.size(); ++i)
      std::printf("  eps = %-12s v1 = %s\n", cip::fmt_num(s.epsilons[i]).c_str(),
                  cip::fmt(s.values[i]).c_str());
    std::printf("limit estimate: %s  (%s%s)\n", cip::fmt(s.limit_estimate).c_str(),
                s.converged ? "converged" : "not converged", s.exact ? "" : ", truncated");
  }
  return kExitOk;
}

int cmd_slater(const std::string& file) {
  cip::Problem p = load_or_die(file);
  cip::SolverConfig cfg = cip::make_config(p);
  auto cert = cip::strong_slater(p, cfg);
  if (!cert) {
    std::printf("strong Slater point: not found\n");
    return kExitOk;
  }
  std::printf("strong Slater point: a = (");
  for (std::size_t i = 0; i < cert->a.size(); ++i)
    std::printf("%s%s", i ? ", " : "", cip::fmt_num(cert->a[i]).c_str());
  std::printf("), alpha = %s%s\n", cip::fmt_num(cert->alpha).c_str(),
              cert->exact ? "" : "  [truncated]");
  return kExitOk;
}

int cmd_duals(const std::string& file, const std::string& which) {
  cip::Problem p = load_or_die(file);
  cip::SolverConfig cfg = cip::make_config(p);
  cip::RunReport shell;
  shell.problem = p.name();
  if (which == "d0" || which == "all") print_dual(shell, cip::solve_D0(p, cfg), "sup(D0)");
  if (which == "d" || which == "all") print_dual(shell, cip::solve_D(p, cfg), "sup(D)");
  if (which == "d1" || which == "all") print_dual(shell, cip::solve_D1(p, cfg), "sup(D1)");
  return kExitOk;
}

int cmd_corpus(const std::string& action, const std::string& name) {
  if (action == "list") {
    for (const std::string& n : cip::corpus::registry()) {
      cip::Instance inst = cip::corpus::make(n);
      std::printf("  %-18s n=%zu %-10s truth: primal %s, d0 %s, d %s, d1 %s, limit %s, slater %s\n",
                  n.c_str(), inst.problem.dim(),
                  inst.problem.family().is_parametric() ? "parametric" : "finite",
                  cip::fmt(inst.truth.primal).c_str(), cip::fmt(inst.truth.d0).c_str(),
                  cip::fmt(inst.truth.d).c_str(), cip::fmt(inst.truth.d1).c_str(),
                  cip::fmt(inst.truth.limiting).c_str(), inst.truth.slater ? "yes" : "no");
    }
    return kExitOk;
  }
  auto run_one = [](const std::string& n) -> bool {
    cip::Instance inst = cip::corpus::make(n);
    cip::SolverConfig cfg = cip::make_config(inst.problem);
    cip::CorpusDiff d = cip::corpus_check(inst, cfg);
    std::printf("%s: %s\n", n.c_str(), d.ok ? "ok" : "MISMATCH");
    for (const std::string& line : d.lines) std::printf("%s\n", line.c_str());
    return d.ok;
  };
  if (action == "run") {
    if (name.empty()) throw cip::Error("corpus run needs an instance name");
    return run_one(name) ? kExitOk : kExitViolation;
  }
  if (action == "run-all") {
    bool all_ok = true;
    for (const std::string& n : cip::corpus::registry()) all_ok = run_one(n) && all_ok;
    return all_ok ? kExitOk : kExitViolation;
  }
  throw cip::Error("unknown corpus action '" + action + "' (list|run|run-all)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex infinite programming duality laboratory"};
  app.set_version_flag("--version", std::string("ciplab ") + cip::kVersion);
  app.require_subcommand(1);

  std::string file, csv, svg, which = "all", action, name;
  long trunc = 0;
  bool as_json = false;
  double eps0 = 1.0, ratio = 0.5;
  int count = 20;

  CLI::App* analyze = app.add_subcommand("analyze", "full duality analysis of a problem file");
  analyze->add_option("file", file)->required();
  analyze->add_option("--trunc", trunc, "truncation level override");
  analyze->add_flag("--json", as_json, "machine-readable report");

  CLI::App* sweep = app.add_subcommand("sweep", "epsilon sweep of the sup-value function v1");
  sweep->add_option("file", file)->required();
  sweep->add_option("--eps0", eps0);
  sweep->add_option("--ratio", ratio);
  sweep->add_option("--count", count);
  sweep->add_option("--csv", csv, "write epsilon,value,exact rows");
  sweep->add_option("--svg", svg, "write a line chart");
  sweep->add_flag("--json", as_json);

  CLI::App* slater = app.add_subcommand("slater", "search for a strong Slater point");
  slater->add_option("file", file)->required();

  CLI::App* duals = app.add_subcommand("duals", "compute selected dual values");
  duals->add_option("file", file)->required();
  duals->add_option("--which", which)->check(CLI::IsMember({"d0", "d", "d1", "all"}));

  CLI::App* corpus = app.add_subcommand("corpus", "built-in instances with ground truth");
  corpus->add_option("action", action)->required()->check(CLI::IsMember({"list", "run", "run-all"}));
  corpus->add_option("name", name);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(file, trunc, as_json);
    if (sweep->parsed()) return cmd_sweep(file, eps0, ratio, count, csv, svg, as_json);
    if (slater->parsed()) return cmd_slater(file);
    if (duals->parsed()) return cmd_duals(file, which);
    if (corpus->parsed()) return cmd_corpus(action, name);
  } catch (const cip::SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const cip::ConvexityRejected& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const cip::DimensionMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const cip::UnknownInstance& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const cip::Error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

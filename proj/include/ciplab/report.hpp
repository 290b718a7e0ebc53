#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "ciplab/corpus.hpp"
#include "ciplab/duality.hpp"
#include "ciplab/version.hpp"

namespace cip {

inline std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string fmt(const ExtReal& v) {
  if (v.is_plus_inf()) return "+inf";
  if (v.is_minus_inf()) return "-inf";
  return fmt_num(v.value());
}

inline nlohmann::json extreal_to_json(const ExtReal& v) {
  if (v.is_plus_inf()) return "+inf";
  if (v.is_minus_inf()) return "-inf";
  return v.value();
}

inline ExtReal extreal_from_json(const nlohmann::json& j) {
  if (j.is_number()) return ExtReal::finite(j.get<double>());
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "+inf") return ExtReal::plus_inf();
    if (s == "-inf") return ExtReal::minus_inf();
  }
  throw SchemaError("extreal", "expected a number, \"+inf\" or \"-inf\"");
}

/// Everything `analyze` computes for one problem, with per-analysis wall
/// clock and the exactness caveats carried through.
struct RunReport {
  std::string problem;
  std::string version = kVersion;
  DualReport primal, d0, d, d1;
  std::optional<SlaterCertificate> slater;
  SweepResult limit;
  LscResult lsc;
  bool chain_ok = true;
  std::string chain_violation;
  bool gap_strict = false;  // computed sup(D0) strictly below the limiting value
  long trunc = 0;
  std::map<std::string, double> seconds;
};

inline RunReport analyze(const Problem& p, const SolverConfig& cfg) {
  using clock = std::chrono::steady_clock;
  auto timed = [](auto&& fn, double& out) {
    auto t0 = clock::now();
    auto r = fn();
    out = std::chrono::duration<double>(clock::now() - t0).count();
    return r;
  };
  RunReport r;
  r.problem = p.name();
  r.trunc = cfg.trunc;
  r.primal = timed([&] { return solve_primal(p, cfg); }, r.seconds["primal"]);
  r.d0 = timed([&] { return solve_D0(p, cfg); }, r.seconds["d0"]);
  r.d = timed([&] { return solve_D(p, cfg); }, r.seconds["d"]);
  r.d1 = timed([&] { return solve_D1(p, cfg); }, r.seconds["d1"]);
  r.slater = timed([&] { return strong_slater(p, cfg); }, r.seconds["slater"]);
  r.limit = timed([&] { return limiting_value(p, SweepSchedule{}, cfg); }, r.seconds["limit"]);
  r.lsc = timed([&] { return lsc_hull_v(p, SweepSchedule{}, cfg); }, r.seconds["lsc"]);

  double mag = 0.0;
  for (const DualReport* d : {&r.primal, &r.d0, &r.d, &r.d1})
    if (d->value.is_finite()) mag = std::max(mag, std::fabs(d->value.value()));
  double slack = 1e-6 * (1.0 + mag);
  struct Pair {
    const char* what;
    const ExtReal* lo;
    const ExtReal* hi;
  };
  for (const Pair& pr : {Pair{"sup(D0) <= sup(D)", &r.d0.value, &r.d.value},
                         Pair{"sup(D) <= sup(D1)", &r.d.value, &r.d1.value},
                         Pair{"sup(D1) <= inf(P)", &r.d1.value, &r.primal.value}}) {
    if (!le_with_slack(*pr.lo, *pr.hi, slack)) {
      r.chain_ok = false;
      r.chain_violation = pr.what;
      break;
    }
  }

  // Strict gap between the ordinary dual and the limiting value: the classical
  // limiting formula for sup(D0) would require these to coincide.
  const ExtReal& lim = r.limit.limit_estimate;
  if (r.d0.value.is_finite() && lim.is_finite())
    r.gap_strict = lim.value() - r.d0.value.value() > 1e-3 * (1.0 + mag);
  else
    r.gap_strict = r.d0.value < lim;
  return r;
}

/// "-1 = sup(D0) = sup(D) < 0 = sup(D1) = inf(P)" -- values grouped by
/// equality at display tolerance, groups joined by the strict relation.
inline std::string chain_line(const RunReport& r) {
  struct Entry {
    const char* name;
    const ExtReal* v;
  };
  const Entry entries[] = {{"sup(D0)", &r.d0.value},
                           {"sup(D)", &r.d.value},
                           {"sup(D1)", &r.d1.value},
                           {"inf(P)", &r.primal.value}};
  double mag = 0.0;
  for (const Entry& e : entries)
    if (e.v->is_finite()) mag = std::max(mag, std::fabs(e.v->value()));
  const double tol = 1e-3 * (1.0 + mag);
  auto same = [&](const ExtReal& a, const ExtReal& b) {
    if (a.is_finite() && b.is_finite()) return std::fabs(a.value() - b.value()) <= tol;
    return a == b;
  };
  std::string out;
  for (std::size_t i = 0; i < 4;) {
    std::size_t j = i;
    while (j + 1 < 4 && same(*entries[i].v, *entries[j + 1].v)) ++j;
    if (i > 0) out += " < ";
    out += fmt(*entries[i].v);
    for (std::size_t k = i; k <= j; ++k) out += std::string(" = ") + entries[k].name;
    i = j + 1;
  }
  return out;
}

inline nlohmann::json multiplier_to_json(const Multiplier& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [t, w] : m.support()) j[std::to_string(t)] = w;
  return j;
}

inline nlohmann::json report_to_json(const RunReport& r) {
  using nlohmann::json;
  json res;
  res["primal"] = {{"value", extreal_to_json(r.primal.value)},
                   {"attained", r.primal.attained},
                   {"exact", r.primal.exact}};
  if (r.primal.witness) res["primal"]["witness"] = *r.primal.witness;
  res["d0"] = {{"value", extreal_to_json(r.d0.value)},
               {"attained", r.d0.attained},
               {"exact", r.d0.exact},
               {"multiplier", multiplier_to_json(r.d0.multiplier)}};
  res["d"] = {{"value", extreal_to_json(r.d.value)},
              {"attained", r.d.attained},
              {"exact", r.d.exact},
              {"multiplier", multiplier_to_json(r.d.multiplier)}};
  res["d1"] = {{"value", extreal_to_json(r.d1.value)},
               {"sStar", r.d1.s_star.value_or(0.0)},
               {"attained", r.d1.attained}};
  if (r.slater)
    res["slater"] = {{"found", true}, {"a", r.slater->a}, {"alpha", r.slater->alpha}};
  else
    res["slater"] = nullptr;
  json eps = json::array(), vals = json::array();
  for (double e : r.limit.epsilons) eps.push_back(e);
  for (const ExtReal& v : r.limit.values) vals.push_back(extreal_to_json(v));
  res["limit"] = {{"epsilons", std::move(eps)},
                  {"values", std::move(vals)},
                  {"estimate", extreal_to_json(r.limit.limit_estimate)},
                  {"converged", r.limit.converged}};
  res["lsc"] = {{"value", extreal_to_json(r.lsc.value)}, {"exact", r.lsc.exact}};

  json j;
  j["problem"] = r.problem;
  j["version"] = r.version;
  j["results"] = std::move(res);
  j["chainOk"] = r.chain_ok;
  if (!r.chain_violation.empty()) j["chainViolation"] = r.chain_violation;
  j["gapD0Limit"] = {{"d0", extreal_to_json(r.d0.value)},
                     {"limit", extreal_to_json(r.limit.limit_estimate)},
                     {"strict", r.gap_strict}};
  j["config"] = {{"truncation", r.trunc}};
  json secs = json::object();
  for (const auto& [k, v] : r.seconds) secs[k] = v;
  j["seconds"] = std::move(secs);
  return j;
}

/// Inverse of report_to_json for the fields the schema pins down; used to
/// check that emitted reports re-parse to the same document.
inline RunReport report_from_json(const nlohmann::json& j) {
  RunReport r;
  r.problem = j.at("problem").get<std::string>();
  r.version = j.at("version").get<std::string>();
  const auto& res = j.at("results");
  auto load_dual = [&](const char* key, DualKind kind, DualReport& d) {
    const auto& o = res.at(key);
    d.problem = r.problem;
    d.which = kind;
    d.value = extreal_from_json(o.at("value"));
    d.attained = o.at("attained").get<bool>();
    if (o.contains("exact")) d.exact = o.at("exact").get<bool>();
    if (o.contains("multiplier"))
      for (const auto& [k, v] : o.at("multiplier").items())
        d.multiplier.set(std::stol(k), v.get<double>());
    if (o.contains("sStar")) d.s_star = o.at("sStar").get<double>();
    if (o.contains("witness")) d.witness = o.at("witness").get<std::vector<double>>();
  };
  load_dual("primal", DualKind::Primal, r.primal);
  load_dual("d0", DualKind::D0, r.d0);
  load_dual("d", DualKind::D, r.d);
  load_dual("d1", DualKind::D1, r.d1);
  if (!res.at("slater").is_null() && res.at("slater").at("found").get<bool>()) {
    SlaterCertificate c;
    c.a = res.at("slater").at("a").get<std::vector<double>>();
    c.alpha = res.at("slater").at("alpha").get<double>();
    r.slater = c;
  }
  const auto& lim = res.at("limit");
  for (const auto& e : lim.at("epsilons")) r.limit.epsilons.push_back(e.get<double>());
  for (const auto& v : lim.at("values")) r.limit.values.push_back(extreal_from_json(v));
  r.limit.limit_estimate = extreal_from_json(lim.at("estimate"));
  r.limit.converged = lim.at("converged").get<bool>();
  r.lsc.value = extreal_from_json(res.at("lsc").at("value"));
  r.lsc.exact = res.at("lsc").at("exact").get<bool>();
  r.chain_ok = j.at("chainOk").get<bool>();
  if (j.contains("chainViolation")) r.chain_violation = j.at("chainViolation").get<std::string>();
  r.gap_strict = j.at("gapD0Limit").at("strict").get<bool>();
  r.trunc = j.at("config").at("truncation").get<long>();
  for (const auto& [k, v] : j.at("seconds").items()) r.seconds[k] = v.get<double>();
  return r;
}

inline void write_sweep_csv(const SweepResult& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "epsilon,value,exact\n";
  for (std::size_t i = 0; i < s.epsilons.size(); ++i)
    out << fmt_num(s.epsilons[i]) << "," << fmt(s.values[i]) << "," << (s.exact ? 1 : 0) << "\n";
}

/// Minimal standalone line chart, value vs log10(epsilon).
inline void write_sweep_svg(const SweepResult& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  const double W = 480, H = 320, ml = 56, mr = 16, mt = 16, mb = 40;
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < s.epsilons.size(); ++i) {
    if (!s.values[i].is_finite()) continue;
    double x = std::log10(s.epsilons[i]);
    double y = s.values[i].value();
    pts.push_back({x, y});
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, y);
  }
  if (pts.empty()) {
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='480' height='320'>"
        << "<text x='20' y='40'>no finite sweep values</text></svg>\n";
    return;
  }
  if (xhi - xlo < 1e-12) xhi = xlo + 1.0;
  if (yhi - ylo < 1e-12) yhi = ylo + 1.0;
  auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ylo) / (yhi - ylo) * (H - mt - mb); };
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  out << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
      << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
      << "' stroke='black'/>\n";
  out << "<text x='" << (W / 2 - 30) << "' y='" << (H - 8) << "' font-size='12'>log10(eps)"
      << "</text>\n";
  out << "<text x='8' y='" << (H / 2) << "' font-size='12' transform='rotate(-90 14," << (H / 2)
      << ")'>value</text>\n";
  out << "<text x='" << ml << "' y='" << (H - mb + 14) << "' font-size='10'>" << fmt_num(xlo)
      << "</text>\n<text x='" << (W - mr - 24) << "' y='" << (H - mb + 14) << "' font-size='10'>"
      << fmt_num(xhi) << "</text>\n";
  out << "<text x='4' y='" << (H - mb) << "' font-size='10'>" << fmt_num(ylo)
      << "</text>\n<text x='4' y='" << (mt + 10) << "' font-size='10'>" << fmt_num(yhi)
      << "</text>\n";
  out << "<polyline fill='none' stroke='steelblue' stroke-width='1.5' points='";
  for (const auto& [x, y] : pts) out << px(x) << "," << py(y) << " ";
  out << "'/>\n</svg>\n";
}

/// Recomputes an instance and diffs every value (and the Slater flag) against
/// its ground truth at the given tolerance.
struct CorpusDiff {
  bool ok = true;
  std::vector<std::string> lines;
};

inline CorpusDiff corpus_check(const Instance& inst, const SolverConfig& cfg, double tol = 1e-3) {
  CorpusDiff d;
  ChainAudit audit = weak_duality_audit(inst.problem, cfg);
  SweepResult sweep = limiting_value(inst.problem, SweepSchedule{}, cfg);
  auto slater = strong_slater(inst.problem, cfg);
  auto check = [&](const char* what, const ExtReal& got, const ExtReal& want) {
    bool ok;
    if (got.is_finite() && want.is_finite())
      ok = std::fabs(got.value() - want.value()) <= tol * (1.0 + std::fabs(want.value()));
    else
      ok = got == want;
    d.ok = d.ok && ok;
    d.lines.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what + ": computed " + fmt(got) +
                      ", expected " + fmt(want));
  };
  check("primal", audit.primal.value, inst.truth.primal);
  check("d0", audit.d0.value, inst.truth.d0);
  check("d", audit.d.value, inst.truth.d);
  check("d1", audit.d1.value, inst.truth.d1);
  check("limiting", sweep.limit_estimate, inst.truth.limiting);
  bool slater_ok = slater.has_value() == inst.truth.slater;
  d.ok = d.ok && slater_ok;
  d.lines.push_back(std::string(slater_ok ? "  ok   " : "  FAIL ") + "slater: computed " +
                    (slater ? "found" : "not-found") + ", expected " +
                    (inst.truth.slater ? "found" : "not-found"));
  if (!audit.ok) {
    d.ok = false;
    d.lines.push_back("  FAIL weak-duality chain: " + audit.violation);
  }
  return d;
}

}  // namespace cip

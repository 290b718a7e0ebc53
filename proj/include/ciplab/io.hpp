#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ciplab/problem.hpp"

namespace cip {

/// Problem-definition documents: JSON with 1-based coordinates to match the
/// x1, x2 ... notation. Expression nodes are tagged objects:
///   {"op":"const","value":0}            {"op":"coord","i":2}
///   {"op":"affine","a":[...],"b":0}     {"op":"sum","args":[...]}
///   {"op":"scale","c":2,"arg":...}      {"op":"max","args":[...]}
///   {"op":"exp","arg":...}              {"op":"abs","arg":...}
///   {"op":"restrict","arg":...,"where":[{"a":[...],"b":0},...]}
/// Scalar-of-t coefficients are a plain number or {"c":..,"t":..,"invT":..}.

namespace io_detail {

using nlohmann::json;

inline const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(path, std::string("missing ") + key);
  return j.at(key);
}

inline double need_num(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number()) throw SchemaError(path + "/" + key, "expected a number");
  return v.get<double>();
}

inline Expr parse_expr(const json& j, const std::string& path);

inline std::vector<Expr> parse_args(const json& j, const std::string& path) {
  const json& a = need(j, "args", path);
  if (!a.is_array() || a.empty()) throw SchemaError(path + "/args", "expected a non-empty array");
  std::vector<Expr> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    out.push_back(parse_expr(a[i], path + "/args/" + std::to_string(i)));
  return out;
}

inline std::vector<double> parse_vec(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (const json& v : j) {
    if (!v.is_number()) throw SchemaError(path, "expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline AffineIneq parse_ineq(const json& j, const std::string& path) {
  AffineIneq g;
  g.a = parse_vec(need(j, "a", path), path + "/a");
  g.b = need_num(j, "b", path);
  return g;
}

inline Expr parse_expr(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an expression object");
  std::string op = need(j, "op", path).get<std::string>();
  try {
    if (op == "const") return constant(need_num(j, "value", path));
    if (op == "coord") {
      const json& i = need(j, "i", path);
      if (!i.is_number_integer() || i.get<long>() < 1)
        throw SchemaError(path + "/i", "coordinate index must be an integer >= 1");
      return coord(static_cast<int>(i.get<long>()));
    }
    if (op == "affine")
      return affine(parse_vec(need(j, "a", path), path + "/a"), need_num(j, "b", path));
    if (op == "sum") return sum(parse_args(j, path));
    if (op == "max") return max_of(parse_args(j, path));
    if (op == "scale")
      return pos_scale(need_num(j, "c", path), parse_expr(need(j, "arg", path), path + "/arg"));
    if (op == "exp") return exp_of(parse_expr(need(j, "arg", path), path + "/arg"));
    if (op == "abs") return abs_of(parse_expr(need(j, "arg", path), path + "/arg"));
    if (op == "restrict") {
      const json& w = need(j, "where", path);
      if (!w.is_array() || w.empty())
        throw SchemaError(path + "/where", "expected a non-empty array");
      std::vector<AffineIneq> guards;
      for (std::size_t i = 0; i < w.size(); ++i)
        guards.push_back(parse_ineq(w[i], path + "/where/" + std::to_string(i)));
      return domain_restrict(parse_expr(need(j, "arg", path), path + "/arg"), std::move(guards));
    }
  } catch (const ConvexityRejected& e) {
    throw ConvexityRejected(path + " (" + e.path + ")", e.what());
  }
  throw SchemaError(path, "unknown op '" + op + "'");
}

inline ScalarOfT parse_scalar_t(const json& j, const std::string& path) {
  if (j.is_number()) return ScalarOfT{j.get<double>(), 0.0, 0.0};
  if (!j.is_object()) throw SchemaError(path, "expected a number or {c,t,invT}");
  ScalarOfT s;
  if (j.contains("c")) s.c0 = j.at("c").get<double>();
  if (j.contains("t")) s.lin = j.at("t").get<double>();
  if (j.contains("invT")) s.recip = j.at("invT").get<double>();
  return s;
}

inline json emit_scalar_t(const ScalarOfT& s) {
  if (s.is_constant()) return json(s.c0);
  json j = json::object();
  if (s.c0 != 0.0) j["c"] = s.c0;
  if (s.lin != 0.0) j["t"] = s.lin;
  if (s.recip != 0.0) j["invT"] = s.recip;
  return j;
}

inline json emit_expr(const Expr& e) {
  const ExprNode& n = e.node();
  json j = json::object();
  switch (n.op) {
    case ExprOp::Const:
      j["op"] = "const";
      j["value"] = n.scalar;
      break;
    case ExprOp::Coord:
      j["op"] = "coord";
      j["i"] = n.coord;
      break;
    case ExprOp::Affine:
      j["op"] = "affine";
      j["a"] = n.coeffs;
      j["b"] = n.offset;
      break;
    case ExprOp::Sum:
    case ExprOp::MaxOf: {
      j["op"] = n.op == ExprOp::Sum ? "sum" : "max";
      json args = json::array();
      for (const Expr& k : n.kids) args.push_back(emit_expr(k));
      j["args"] = std::move(args);
      break;
    }
    case ExprOp::PosScale:
      j["op"] = "scale";
      j["c"] = n.scalar;
      j["arg"] = emit_expr(n.kids[0]);
      break;
    case ExprOp::ExpOf:
      j["op"] = "exp";
      j["arg"] = emit_expr(n.kids[0]);
      break;
    case ExprOp::AbsOf:
      j["op"] = "abs";
      j["arg"] = emit_expr(n.kids[0]);
      break;
    case ExprOp::DomainRestrict: {
      j["op"] = "restrict";
      j["arg"] = emit_expr(n.kids[0]);
      json where = json::array();
      for (const AffineIneq& g : n.guards) where.push_back(json{{"a", g.a}, {"b", g.b}});
      j["where"] = std::move(where);
      break;
    }
  }
  return j;
}

}  // namespace io_detail

inline Problem parse_problem(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("document", e.what());
  }
  using io_detail::need;
  std::string name = need(j, "name", "document").get<std::string>();
  const json& dimj = need(j, "dim", "document");
  if (!dimj.is_number_integer() || dimj.get<long>() < 1)
    throw SchemaError("dim", "expected a positive integer");
  std::size_t dim = dimj.get<std::size_t>();
  Expr objective = io_detail::parse_expr(need(j, "objective", "document"), "objective");

  const json& cons = need(j, "constraints", "document");
  std::string kind = need(cons, "kind", "constraints").get<std::string>();
  std::optional<IndexFamily> fam;
  if (kind == "finite") {
    const json& items = need(cons, "items", "constraints");
    if (!items.is_array() || items.empty())
      throw SchemaError("constraints/items", "expected a non-empty array");
    std::vector<FamilyMember> members;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string path = "constraints/items/" + std::to_string(i);
      std::string label =
          items[i].contains("label") ? items[i].at("label").get<std::string>() : std::string{};
      members.push_back({label, io_detail::parse_expr(need(items[i], "expr", path), path)});
    }
    fam = IndexFamily::finite(std::move(members));
  } else if (kind == "parametric") {
    std::vector<FamilyMember> head;
    if (cons.contains("head")) {
      const json& h = cons.at("head");
      if (!h.is_array()) throw SchemaError("constraints/head", "expected an array");
      for (std::size_t i = 0; i < h.size(); ++i) {
        const std::string path = "constraints/head/" + std::to_string(i);
        std::string label =
            h[i].contains("label") ? h[i].at("label").get<std::string>() : std::string{};
        head.push_back({label, io_detail::parse_expr(need(h[i], "expr", path), path)});
      }
    }
    const json& tj = need(cons, "tail", "constraints");
    AffineTemplate tail;
    const json& cj = need(tj, "coeffs", "constraints/tail");
    if (!cj.is_array() || cj.empty())
      throw SchemaError("constraints/tail/coeffs", "expected a non-empty array");
    for (std::size_t i = 0; i < cj.size(); ++i)
      tail.coeffs.push_back(
          io_detail::parse_scalar_t(cj[i], "constraints/tail/coeffs/" + std::to_string(i)));
    tail.offset = io_detail::parse_scalar_t(need(tj, "offset", "constraints/tail"),
                                            "constraints/tail/offset");
    std::optional<long> tail_end;
    if (cons.contains("tailEnd")) tail_end = cons.at("tailEnd").get<long>();
    std::optional<Expr> sup;
    if (cons.contains("supExpr"))
      sup = io_detail::parse_expr(cons.at("supExpr"), "constraints/supExpr");
    fam = IndexFamily::parametric(std::move(head), std::move(tail), tail_end, std::move(sup));
  } else {
    throw SchemaError("constraints/kind", "expected \"finite\" or \"parametric\"");
  }

  const json& bj = need(j, "box", "document");
  if (!bj.is_array() || bj.empty()) throw SchemaError("box", "expected an array of [lo, hi]");
  Box box;
  for (std::size_t i = 0; i < bj.size(); ++i) {
    const json& iv = bj[i];
    if (!iv.is_array() || iv.size() != 2)
      throw SchemaError("box/" + std::to_string(i), "expected [lo, hi]");
    box.push_back({iv[0].get<double>(), iv[1].get<double>()});
  }
  long trunc = 100;
  if (j.contains("truncation")) trunc = j.at("truncation").get<long>();

  return Problem(std::move(name), dim, std::move(objective), std::move(*fam), std::move(box),
                 trunc);
}

inline std::string serialize_problem(const Problem& p) {
  using nlohmann::json;
  json j;
  j["name"] = p.name();
  j["dim"] = p.dim();
  j["objective"] = io_detail::emit_expr(p.objective());
  json cons;
  const IndexFamily& fam = p.family();
  if (!fam.is_parametric()) {
    cons["kind"] = "finite";
    json items = json::array();
    for (const FamilyMember& m : fam.head()) {
      json it;
      if (!m.label.empty()) it["label"] = m.label;
      it["expr"] = io_detail::emit_expr(m.expr);
      items.push_back(std::move(it));
    }
    cons["items"] = std::move(items);
  } else {
    cons["kind"] = "parametric";
    if (!fam.head().empty()) {
      json head = json::array();
      for (const FamilyMember& m : fam.head()) {
        json it;
        if (!m.label.empty()) it["label"] = m.label;
        it["expr"] = io_detail::emit_expr(m.expr);
        head.push_back(std::move(it));
      }
      cons["head"] = std::move(head);
    }
    json tail;
    json coeffs = json::array();
    for (const ScalarOfT& s : fam.tail().coeffs) coeffs.push_back(io_detail::emit_scalar_t(s));
    tail["coeffs"] = std::move(coeffs);
    tail["offset"] = io_detail::emit_scalar_t(fam.tail().offset);
    cons["tail"] = std::move(tail);
    if (fam.tail_end()) cons["tailEnd"] = *fam.tail_end();
    if (fam.sup_expr()) cons["supExpr"] = io_detail::emit_expr(*fam.sup_expr());
  }
  j["constraints"] = std::move(cons);
  json box = json::array();
  for (const Interval& iv : p.box()) box.push_back(json::array({iv.lo, iv.hi}));
  j["box"] = std::move(box);
  j["truncation"] = p.truncation_default();
  return j.dump(2) + "\n";
}

inline Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

inline void save_problem(const Problem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SchemaError(path, "cannot open file for writing");
  out << serialize_problem(p);
}

}  // namespace cip

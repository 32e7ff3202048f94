#include "lvmkit/interchange.hpp"

#include <fstream>
#include <sstream>

namespace lvmkit::io {

using Kind = ResonanceClass::Kind;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ParseError(where + ": " + what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

int int_from(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::vector<Complex> complex_list(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of [re, im] pairs");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Json complex_list_json(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (Complex z : v) a.push_back(to_json(z));
  return a;
}

Json mat3_json(const Eigen::Matrix3cd& M) {
  Json a = Json::array();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) a.push_back(to_json(M(i, k)));
  return a;
}

Eigen::Matrix3cd mat3_from(const Json& j, const std::string& where) {
  const auto v = complex_list(j, where);
  if (v.size() != 9) fail(where, "expected 9 entries (row-major 3x3)");
  Eigen::Matrix3cd M;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) M(i, k) = v[3 * i + k];
  return M;
}

Json point_json(const Point3& x) { return complex_list_json({x[0], x[1], x[2]}); }

} // namespace

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_document(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(where, "expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const Configuration& c) {
  Json vs = Json::array();
  for (const auto& v : c.vectors) vs.push_back(complex_list_json(v));
  return Json{{"m", c.m}, {"vectors", vs}};
}

Configuration configuration_from(const Json& j) {
  Configuration c;
  c.m = int_from(field(j, "m", "$"), "$.m");
  const Json& vs = field(j, "vectors", "$");
  if (!vs.is_array()) fail("$.vectors", "expected a list of vectors");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string where = "$.vectors[" + std::to_string(i) + "]";
    auto v = complex_list(vs[i], where);
    if (static_cast<int>(v.size()) != c.m) fail(where, "expected " + std::to_string(c.m) + " coordinates");
    c.vectors.push_back(std::move(v));
  }
  try {
    c.validate();
  } catch (const InputError& e) {
    throw ParseError(std::string("$: ") + e.what());
  }
  return c;
}

Json to_json(const HolonomyPair& h) {
  return complex_list_json({h.alpha[0], h.alpha[1], h.alpha[2], h.beta[0], h.beta[1], h.beta[2]});
}

HolonomyPair holonomy_from(const Json& j) {
  const auto v = complex_list(j, "$");
  if (v.size() != 6) fail("$", "expected six [re, im] pairs");
  HolonomyPair h;
  h.alpha = {v[0], v[1], v[2]};
  h.beta = {v[3], v[4], v[5]};
  return h;
}

Json to_json(const ResonanceClass& c) {
  switch (c.kind) {
  case Kind::NonResonant: return Json{{"kind", "non-resonant"}};
  case Kind::Single: return Json{{"kind", "single"}, {"p", c.p}, {"q", c.q}};
  case Kind::Double: return Json{{"kind", "double"}, {"p", c.p}};
  }
  return {};
}

ResonanceClass regime_from(const Json& j) {
  const Json& k = field(j, "kind", "$.regime");
  if (!k.is_string()) fail("$.regime.kind", "expected a string");
  const std::string kind = k.get<std::string>();
  if (kind == "non-resonant") return ResonanceClass::non_resonant();
  if (kind == "double") return ResonanceClass::double_(int_from(field(j, "p", "$.regime"), "$.regime.p"));
  if (kind == "single") {
    const int p = int_from(field(j, "p", "$.regime"), "$.regime.p");
    const int q = int_from(field(j, "q", "$.regime"), "$.regime.q");
    if (q < 2) fail("$.regime.q", "single regime needs q >= 2");
    return ResonanceClass::single(p, q);
  }
  fail("$.regime.kind", "unknown regime '" + kind + "'");
}

Json to_json(const GroupElement& g) { return Json{{"regime", to_json(g.regime)}, {"coeffs", complex_list_json(g.params())}}; }

GroupElement group_element_from(const Json& j, const ResonanceClass& regime) {
  const Json& c = j.is_object() ? field(j, "coeffs", "$") : j;
  const auto v = complex_list(c, "$.coeffs");
  try {
    return GroupElement::from_params(regime, v);
  } catch (const InputError& e) {
    throw ParseError(std::string("$.coeffs: ") + e.what());
  }
}

GroupElement group_element_from(const Json& j) { return group_element_from(j, regime_from(field(j, "regime", "$"))); }

Json to_json(const StructureSpec& s) {
  Json rho = Json::array();
  for (const auto& g : s.rho) rho.push_back(complex_list_json(g.params()));
  Json out{{"regime", to_json(s.regime)}, {"rho", rho}};
  if (s.base) out["base"] = to_json(*s.base);
  return out;
}

StructureSpec structure_spec_from(const Json& j) {
  StructureSpec s;
  s.regime = regime_from(field(j, "regime", "$"));
  const Json& rho = field(j, "rho", "$");
  if (!rho.is_array() || rho.size() != 3) fail("$.rho", "expected three coefficient lists");
  for (int k = 0; k < 3; ++k) {
    const std::string where = "$.rho[" + std::to_string(k) + "]";
    try {
      s.rho[k] = GroupElement::from_params(s.regime, complex_list(rho[k], where));
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (j.contains("base")) s.base = configuration_from(j["base"]);
  return s;
}

Json to_json(const FamilyPoint& pt) {
  Json out{{"space", pt.space_name()}, {"p", pt.p}, {"q", pt.q}, {"A", mat3_json(pt.A)}, {"B", mat3_json(pt.B)}};
  if (pt.space != FamilyPoint::Space::Sp) out["lambda"] = to_json(pt.lambda);
  return out;
}

FamilyPoint family_point_from(const Json& j) {
  const Json& sp = field(j, "space", "$");
  if (!sp.is_string()) fail("$.space", "expected a string");
  const std::string space = sp.get<std::string>();
  const Eigen::Matrix3cd A = mat3_from(field(j, "A", "$"), "$.A"), B = mat3_from(field(j, "B", "$"), "$.B");
  const int p = j.contains("p") ? int_from(j["p"], "$.p") : 0;
  const int q = j.contains("q") ? int_from(j["q"], "$.q") : 0;
  try {
    if (space == "T") return FamilyPoint::make_T(A, B, complex_from(field(j, "lambda", "$"), "$.lambda"));
    if (space == "T_pq") return FamilyPoint::make_Tpq(p, q, A, B, complex_from(field(j, "lambda", "$"), "$.lambda"));
    if (space == "S_p") return FamilyPoint::make_Sp(p, A, B);
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw ParseError(std::string("$: ") + e.what());
  }
  fail("$.space", "unknown space '" + space + "'");
}

Json to_json(const ConfigReport& r) {
  Json out{{"is_siegel", r.is_siegel},
           {"is_weakly_hyperbolic", r.is_weakly_hyperbolic},
           {"indispensable", Json(std::vector<int>(r.indispensable.begin(), r.indispensable.end()))}};
  if (r.type_triple) out["type"] = Json::array({r.type_triple->m, r.type_triple->n, r.type_triple->k});
  else out["type"] = nullptr;
  return out;
}

Json to_json(const ResonanceSearch& s, const ResonanceClass& regime) {
  Json res = Json::array();
  for (const auto& r : s.resonances) res.push_back(Json{{"j", r.j}, {"p", Json(std::vector<int>(r.p.begin(), r.p.end()))}});
  Json near = Json::array();
  for (const auto& n : s.near)
    near.push_back(Json{{"j", n.r.j}, {"p", Json(std::vector<int>(n.r.p.begin(), n.r.p.end()))}, {"defect", n.defect}});
  const auto d = cohomology_dims(regime);
  return Json{{"resonances", res},
              {"near_resonances", near},
              {"regime", to_json(regime)},
              {"regime_name", regime.name()},
              {"cohomology", Json(std::vector<int>(d.begin(), d.end()))},
              {"tol", s.tol},
              {"bound", s.bound}};
}

Json to_json(const VarietyResidual& r) {
  Json eq = Json::array();
  for (const auto& e : r.equations) eq.push_back(Json{{"name", e.name}, {"value", to_json(e.value)}});
  return Json{{"equations", eq}, {"max_abs", r.max_abs}};
}

Json to_json(const PsiResult& r) {
  Json out{{"pair", Json::array({to_json(r.pair[0]), to_json(r.pair[1])})},
           {"shifts", Json::array({to_json(r.shifts[0]), to_json(r.shifts[1])})},
           {"case", r.dev_case},
           {"newton_iterations", r.newton_iterations},
           {"warnings", Json(r.warnings)}};
  if (r.tail) {
    Json t = Json::array();
    for (const auto& v : *r.tail) t.push_back(complex_list_json(v));
    out["tail"] = t;
  }
  return out;
}

Json to_json(const StructureReport& r) {
  Json out{{"pass", r.pass},
           {"max_residual", r.max_residual},
           {"mean_residual", r.mean_residual},
           {"per_generator", Json(std::vector<double>(r.per_generator.begin(), r.per_generator.end()))},
           {"complete", r.complete},
           {"seed", r.seed},
           {"samples", r.samples},
           {"tol", r.tol},
           {"warnings", Json(r.warnings)}};
  out["failing_generator"] = r.failing_generator ? Json(*r.failing_generator) : Json(nullptr);
  return out;
}

Json to_json(const ActionCertificate& c) {
  Json out{{"window", c.window}, {"fixed_point_free", c.fixed_point_free}, {"words_checked", c.words_checked}};
  if (c.witness)
    out["witness"] = Json{{"r", c.witness->r}, {"s", c.witness->s}, {"point", point_json(c.witness->point)},
                          {"residual", c.witness->residual}};
  else out["witness"] = nullptr;
  return out;
}

Json to_json(const ProbeReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations)
    v.push_back(Json{{"r", x.r}, {"s", x.s}, {"point", point_json(x.point)}, {"image", point_json(x.image)}});
  return Json{{"radius", r.radius},   {"horizon", r.horizon}, {"samples", r.samples},
              {"words_checked", r.words_checked}, {"violations", v}, {"verdict", r.verdict}};
}

Json to_json(const MembershipReport& r) {
  Json cl = Json::array();
  for (const auto& c : r.clauses) cl.push_back(Json{{"name", c.name}, {"holds", c.holds}, {"detail", c.detail}});
  return Json{{"condition", r.condition}, {"satisfied", r.satisfied}, {"singular", r.singular},
              {"clauses", cl},           {"bound", r.bound},         {"tol", r.tol}};
}

} // namespace lvmkit::io

#include "lvmkit/cli.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lvmkit/suites.hpp"

namespace lvmkit {

namespace {

struct RunConfig {
  std::string command;
  std::string input;
  std::optional<double> tol;
  int bound = 64;
  int samples = 100;
  std::uint64_t seed = 0;
  int p = 1;
  bool json = false;
  bool inject_fault = false;
};

struct Outcome {
  int code = 0;
  io::Json doc;
  std::string text;
};

std::string complex_text(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string resonance_text(const Resonance& r) {
  return "(" + std::to_string(r.j) + ", [" + std::to_string(r.p[0]) + "," + std::to_string(r.p[1]) + "," +
         std::to_string(r.p[2]) + "])";
}

void append_resonances(std::ostringstream& os, const ResonanceSearch& s, const ResonanceClass& regime) {
  os << "resonances (tol " << s.tol << ", bound " << s.bound << "):";
  for (const auto& r : s.resonances) os << " " << resonance_text(r);
  os << "\n";
  for (const auto& n : s.near) os << "near-resonance " << resonance_text(n.r) << " defect " << n.defect << "\n";
  const auto d = cohomology_dims(regime);
  os << "regime " << regime.name() << "\ncohomology (" << d[0] << "," << d[1] << "," << d[2] << "," << d[3] << ")\n";
}

Outcome analyze(const RunConfig& rc) {
  const Configuration c = io::configuration_from(io::read_document(rc.input));
  const double tol = rc.tol.value_or(1e-9);
  Outcome o;
  std::ostringstream os;
  const ConfigReport rep = analyze_configuration(c);
  o.doc["config"] = io::to_json(rep);
  os << "siegel " << (rep.is_siegel ? "yes" : "no") << "\nweakly hyperbolic " << (rep.is_weakly_hyperbolic ? "yes" : "no")
     << "\nindispensable {";
  bool first = true;
  for (int k : rep.indispensable) {
    os << (first ? "" : ",") << k;
    first = false;
  }
  os << "}\n";
  if (!rep.is_siegel || !rep.is_weakly_hyperbolic) {
    const std::string cond = !rep.is_siegel ? "Siegel" : "weak hyperbolicity";
    o.doc["error"] = "NotLVM: " + cond + " condition fails";
    os << "NotLVM: " << cond << " condition fails\n";
    o.code = 1;
    o.text = os.str();
    return o;
  }
  const TypeTriple t = *rep.type_triple;
  os << "type (" << t.m << "," << t.n << "," << t.k << ")\n";
  if (!(t == TypeTriple{2, 6, 4})) {
    o.doc["error"] = "type is not (2,6,4)";
    os << "type is not (2,6,4)\n";
    o.code = 1;
    o.text = os.str();
    return o;
  }
  const HolonomyPair h = holonomy_pair(c);
  o.doc["holonomy"] = io::to_json(h);
  for (int j = 1; j <= 3; ++j) os << "alpha" << j << " " << complex_text(h.a(j)) << "\n";
  for (int j = 1; j <= 3; ++j) os << "beta" << j << " " << complex_text(h.b(j)) << "\n";
  const ResonanceSearch s = find_resonances(h, tol, rc.bound);
  const ResonanceClass regime = classify_regime(s.resonances);
  o.doc["resonances"] = io::to_json(s, regime);
  append_resonances(os, s, regime);
  o.text = os.str();
  return o;
}

Outcome resonances(const RunConfig& rc) {
  const io::Json doc = io::read_document(rc.input);
  HolonomyPair h;
  if (doc.is_array()) h = io::holonomy_from(doc);
  else h = holonomy_pair(io::configuration_from(doc));
  const ResonanceSearch s = find_resonances(h, rc.tol.value_or(1e-9), rc.bound);
  Outcome o;
  std::ostringstream os;
  const ResonanceClass regime = classify_regime(s.resonances);
  o.doc = io::to_json(s, regime);
  append_resonances(os, s, regime);
  o.text = os.str();
  return o;
}

Outcome verify(const RunConfig& rc) {
  SuiteOptions opt;
  opt.seed = rc.seed;
  opt.samples = rc.samples;
  opt.tol = rc.tol.value_or(1e-10);
  opt.bound = rc.bound;
  opt.p = rc.p;
  opt.inject_fault = rc.inject_fault;
  const SuiteReport r = run_suite(rc.input, opt);
  return {r.pass ? 0 : 1, to_json(r, opt), to_text(r, opt)};
}

Outcome deform(const RunConfig& rc) {
  const StructureSpec spec = io::structure_spec_from(io::read_document(rc.input));
  const double tol = rc.tol.value_or(1e-9);
  spec.validate();
  const PsiResult psi_r = psi(spec);
  const StructureReport rep = check_structure(spec, rc.samples, tol, rc.seed);
  Outcome o;
  o.doc["psi"] = io::to_json(psi_r);
  o.doc["structure"] = io::to_json(rep);
  std::ostringstream os;
  os << "case " << psi_r.dev_case << "\n";
  for (int k = 0; k < 2; ++k) {
    os << "generator " << k + 1 << ":";
    for (Complex z : psi_r.pair[k].params()) os << " " << complex_text(z);
    os << "\n";
  }
  if (psi_r.tail)
    for (int j = 0; j < 3; ++j) {
      os << "Lambda" << j + 4 << ":";
      for (Complex z : (*psi_r.tail)[j]) os << " " << complex_text(z);
      os << "\n";
    }
  for (const auto& w : rep.warnings) os << "warning: " << w << "\n";
  os.precision(3);
  os << std::scientific << "equivariance max " << rep.max_residual << " mean " << rep.mean_residual << " per generator ("
     << rep.per_generator[0] << ", " << rep.per_generator[1] << ", " << rep.per_generator[2] << ")\n"
     << std::defaultfloat << "complete " << (rep.complete ? "yes" : "no") << " seed " << rep.seed << " samples "
     << rep.samples << " tol " << rep.tol << "\n"
     << (rep.pass ? "PASS" : "FAIL") << "\n";
  o.text = os.str();
  o.code = rep.pass ? 0 : 1;
  return o;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analysis and verification of LVM manifolds of type (2,6,4)", "lvmkit"};
  app.require_subcommand(1);
  RunConfig rc;
  double tol_value = 0.0;

  const auto common = [&](CLI::App* sub, bool with_samples) {
    sub->add_option("--tol", tol_value, "Tolerance (must be positive)");
    sub->add_option("--bound", rc.bound, "Exponent bound for resonance windows")->capture_default_str();
    if (with_samples) {
      sub->add_option("--samples", rc.samples, "Number of samples")->capture_default_str();
      sub->add_option("--seed", rc.seed, "Seed for the randomised checks")->capture_default_str();
    }
    sub->add_flag("--json", rc.json, "Emit JSON");
  };
  CLI::App* a = app.add_subcommand("analyze", "Certify a configuration and report its holonomy and resonances");
  a->add_option("input", rc.input, "Configuration document")->required();
  common(a, false);
  CLI::App* r = app.add_subcommand("resonances", "Resonances of eigen-data or of a configuration");
  r->add_option("input", rc.input, "Eigen-data or configuration document")->required();
  common(r, false);
  CLI::App* v = app.add_subcommand("verify", "Run a seeded property suite");
  v->add_option("suite", rc.input, "group-laws | gluing | developing | action | all")->required();
  common(v, true);
  v->add_option("--p", rc.p, "Exponent p for the gluing suite")->capture_default_str();
  v->add_flag("--inject-fault", rc.inject_fault, "Perturb one map per suite (negative control)");
  CLI::App* d = app.add_subcommand("deform", "Project a deformed structure and check its developing map");
  d->add_option("input", rc.input, "Structure document")->required();
  common(d, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  for (CLI::App* sub : {a, r, v, d})
    if (sub->parsed()) rc.command = sub->get_name();
  if (v->parsed()) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), rc.input) == names.end()) {
      err << "unknown suite '" << rc.input << "'\n";
      return 2;
    }
  }
  if (app.get_subcommand(rc.command)->count("--tol")) {
    if (!(tol_value > 0.0) || !std::isfinite(tol_value)) {
      err << "--tol must be positive\n";
      return 2;
    }
    rc.tol = tol_value;
  }
  if (rc.samples < 1) {
    err << "--samples must be at least 1\n";
    return 2;
  }
  if (rc.bound < 1) {
    err << "--bound must be at least 1\n";
    return 2;
  }

  Outcome o;
  try {
    if (rc.command == "analyze") o = analyze(rc);
    else if (rc.command == "resonances") o = resonances(rc);
    else if (rc.command == "verify") o = verify(rc);
    else o = deform(rc);
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const NotLVM& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
  if (rc.json) out << o.doc.dump(2) << "\n";
  else out << o.text;
  return o.code;
}

} // namespace lvmkit

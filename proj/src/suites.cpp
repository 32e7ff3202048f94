#include "lvmkit/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "lvmkit/samplers.hpp"

namespace lvmkit {

using Kind = ResonanceClass::Kind;

std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  // splitmix64 over the three words
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL ^ (stream + 0x632BE59BD9B4E019ULL) * 0xBF58476D1CE4E5B9ULL ^
                    (index + 1) * 0x94D049BB133111EBULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

int thread_count(int requested) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("LVMKIT_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

std::vector<double> parallel_map(int n, int threads, const std::function<double(int)>& body) {
  std::vector<double> out(std::max(0, n), 0.0);
  const int t = std::min(std::max(1, threads), std::max(1, n));
  if (t == 1) {
    for (int i = 0; i < n; ++i) out[i] = body(i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < t; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) out[i] = body(i);
    });
  for (auto& th : pool) th.join();
  return out;
}

namespace {

std::string regime_tag(const ResonanceClass& c) {
  switch (c.kind) {
  case Kind::NonResonant: return "non-resonant";
  case Kind::Single: return "single(" + std::to_string(c.p) + "," + std::to_string(c.q) + ")";
  case Kind::Double: return "double(" + std::to_string(c.p) + ")";
  }
  return "?";
}

// Runs one check; exceptions count as infinite residuals and the first message is kept.
CheckResult run_check(const std::string& name, int n, double tol, int threads, const std::function<double(int)>& body) {
  std::vector<std::string> errors(std::max(0, n));
  const auto res = parallel_map(n, threads, [&](int i) {
    try {
      const double r = body(i);
      return std::isnan(r) ? INFINITY : r;
    } catch (const std::exception& e) {
      errors[i] = e.what();
      return double(INFINITY);
    }
  });
  CheckResult c{name, n, 0.0, tol, true, ""};
  for (double r : res) c.max_residual = std::max(c.max_residual, r);
  c.pass = c.max_residual <= tol;
  for (int i = 0; i < n; ++i)
    if (!errors[i].empty()) {
      c.detail = "instance " + std::to_string(i) + ": " + errors[i];
      break;
    }
  return c;
}

double scaled(double d, double scale) { return d / std::max(1.0, scale); }

double point_distance(const Point3& a, const Point3& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

SuiteReport finish(std::string name, std::vector<CheckResult> checks) {
  SuiteReport r{std::move(name), std::move(checks), true};
  for (const auto& c : r.checks) r.pass = r.pass && c.pass;
  return r;
}

const std::vector<ResonanceClass>& law_regimes() {
  static const std::vector<ResonanceClass> v{ResonanceClass::non_resonant(), ResonanceClass::single(1, 2),
                                             ResonanceClass::single(-2, 3), ResonanceClass::double_(0),
                                             ResonanceClass::double_(2)};
  return v;
}

const std::vector<ResonanceClass>& base_regimes() {
  static const std::vector<ResonanceClass> v{ResonanceClass::non_resonant(), ResonanceClass::single(0, 2),
                                             ResonanceClass::double_(0)};
  return v;
}

} // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> v{"group-laws", "gluing", "developing", "action", "all"};
  return v;
}

// ---- group laws and normal forms ----

SuiteReport group_law_suite(const SuiteOptions& opt) {
  const int n = opt.samples, th = thread_count(opt.threads);
  std::vector<CheckResult> out;
  std::uint64_t stream = 100;
  for (const ResonanceClass& reg : law_regimes()) {
    const std::string tag = regime_tag(reg);
    ++stream;
    const auto draw = [&, stream](int i) {
      Rng rng(instance_seed(opt.seed, stream, i));
      std::array<GroupElement, 3> e{sample::generic_element(reg, rng), sample::generic_element(reg, rng),
                                    sample::generic_element(reg, rng)};
      return std::make_pair(e, sample::point_in_V(rng));
    };
    out.push_back(run_check("associativity/" + tag, n, opt.tol, th, [&](int i) {
      auto [e, x] = draw(i);
      GroupElement fg = compose(e[0], e[1]);
      if (opt.inject_fault && i == 0) fg.a1 *= 1.0 + 1e-6;
      const GroupElement lhs = compose(fg, e[2]), rhs = compose(e[0], compose(e[1], e[2]));
      return scaled(param_distance(lhs, rhs), std::max(param_scale(lhs), param_scale(rhs)));
    }));
    out.push_back(run_check("inverse/" + tag, n, opt.tol, th, [&](int i) {
      auto [e, x] = draw(i);
      const GroupElement id = GroupElement::identity(reg), fi = inverse(e[0]);
      const double s = param_scale(e[0]) * param_scale(fi);
      return scaled(std::max(param_distance(compose(e[0], fi), id), param_distance(compose(fi, e[0]), id)), s);
    }));
    out.push_back(run_check("action-homomorphism/" + tag, n, opt.tol, th, [&](int i) {
      auto [e, x] = draw(i);
      return relative_distance(lvmkit::apply(compose(e[0], e[1]), x), lvmkit::apply(e[0], lvmkit::apply(e[1], x)));
    }));
    out.push_back(run_check("exp-log/" + tag, n, opt.tol, th, [&](int i) {
      Rng rng(instance_seed(opt.seed, stream + 50, i));
      const GroupElement f = sample::near_identity(reg, rng, 0.15);
      return scaled(param_distance(group_exp(group_log(f)), f), param_scale(f));
    }));

    if (reg.kind == Kind::Double) {
      out.push_back(run_check("triangularize/" + tag, n, opt.tol, th, [&](int i) {
        auto [e, x] = draw(i);
        const auto t = triangularize(e[0]);
        // rebuild f from its normal form rather than re-running the conjugation
        const GroupElement back = compose(t.h, compose(t.t, inverse(t.h)));
        return scaled(std::max(param_distance(back, e[0]), std::abs(t.t.m(0, 1))),
                      param_scale(e[0]) * param_scale(t.h) * param_scale(inverse(t.h)));
      }));
      out.push_back(run_check("simultaneous-triangularize/" + tag, n, opt.tol, th, [&](int i) {
        Rng rng(instance_seed(opt.seed, stream + 60, i));
        const Pair pr = sample::commuting_pair(reg, rng);
        const auto nf = simultaneous_triangularize(pr.f, pr.g);
        const GroupElement hi = inverse(nf.h);
        const double d = std::max({param_distance(compose(nf.h, compose(nf.tf, hi)), pr.f),
                                   param_distance(compose(nf.h, compose(nf.tg, hi)), pr.g), std::abs(nf.tf.m(0, 1)),
                                   std::abs(nf.tg.m(0, 1))});
        return scaled(d, std::max(param_scale(pr.f), param_scale(pr.g)) * param_scale(nf.h) * param_scale(inverse(nf.h)));
      }));
    }
    if (reg.kind == Kind::Single) {
      out.push_back(run_check("diagonalize-pair/" + tag, n, opt.tol, th, [&](int i) {
        Rng rng(instance_seed(opt.seed, stream + 60, i));
        const Pair pr = sample::commuting_pair(reg, rng);
        const auto nf = diagonalize_pair(pr.f, pr.g);
        const GroupElement hi = inverse(nf.h);
        const double d = std::max({param_distance(compose(nf.h, compose(nf.tf, hi)), pr.f),
                                   param_distance(compose(nf.h, compose(nf.tg, hi)), pr.g), std::abs(nf.tf.eps),
                                   std::abs(nf.tg.eps)});
        return scaled(d, std::max(param_scale(pr.f), param_scale(pr.g)) * param_scale(nf.h));
      }));
      // residual 1 when a nearly resonant first element is not refused
      out.push_back(run_check("diagonalize-refusal/" + tag, n, 0.0, th, [&](int i) {
        Rng rng(instance_seed(opt.seed, stream + 70, i));
        Pair pr = sample::commuting_pair(reg, rng);
        const Complex res = ipow(pr.f.a1, reg.p) * ipow(pr.f.a2, reg.q);
        pr.f.a3 = res + std::polar(rng.uniform(0.0, 1e-8), rng.uniform(-kPi, kPi));
        pr.g.eps = 0.0;
        pr.f.eps = 0.0;
        try {
          diagonalize_pair(pr.f, pr.g);
        } catch (const IllConditioned&) {
          return 0.0;
        }
        return 1.0;
      }));
    }
  }
  return finish("group-laws", std::move(out));
}

// ---- gluing ----

SuiteReport gluing_suite(const SuiteOptions& opt) {
  const int n = opt.samples, th = thread_count(opt.threads), p = opt.p, q = 2;
  const double tol = opt.tol;
  std::vector<CheckResult> out;
  const auto draw_T = [&](int i) {
    Rng rng(instance_seed(opt.seed, 201, i));
    FamilyPoint t = sample::T_point(rng);
    return std::make_pair(t, sample::point_in_V(rng));
  };
  const auto draw_U = [&](int i) {
    Rng rng(instance_seed(opt.seed, 202, i));
    FamilyPoint u = sample::Tpq_point(p, q, rng);
    return std::make_pair(u, sample::point_in_V(rng));
  };

  out.push_back(run_check("psi-equivariance", n, tol, th, [&](int i) {
    auto [t, x] = draw_T(i);
    GluedPoint s = glue_psi_p(t, x, p);
    if (opt.inject_fault && i == 0) s.point.A(1, 2) += 1e-6;
    double r = 0.0;
    for (auto [a, b] : {std::pair{1, 0}, std::pair{0, 1}}) {
      const Point3 lhs = glue_psi_p(t, family_act(t, a, b, x), p).xi;
      r = std::max(r, relative_distance(lhs, family_act(s.point, a, b, s.xi)));
    }
    return r;
  }));
  out.push_back(run_check("psi-equations", n, tol, th, [&](int i) {
    auto [t, x] = draw_T(i);
    const GluedPoint s = glue_psi_p(t, x, p);
    const ResonanceClass reg = ResonanceClass::double_(p);
    const GroupElement f = GroupElement::from_matrix3(reg, s.point.A), g = GroupElement::from_matrix3(reg, s.point.B);
    return scaled(variety_residual(f, g).max_abs, std::pow(std::max(param_scale(f), param_scale(g)), 2));
  }));
  out.push_back(run_check("psi-inverse", n, tol, th, [&](int i) {
    auto [t, x] = draw_T(i);
    const GluedPoint s = glue_psi_p(t, x, p);
    const GluedPoint back = invert_psi_p(s.point, s.xi);
    const GluedPoint again = glue_psi_p(back.point, back.xi, p);
    const GluedPoint orig{t, x};
    return std::max(glued_distance(back, orig), glued_distance(again, s)) /
           std::max({1.0, glued_distance(orig, GluedPoint{}), glued_distance(s, GluedPoint{})});
  }));
  out.push_back(run_check("psi-injectivity", n, 1.0, th, [&](int i) {
    auto [t, x] = draw_T(i);
    Rng rng(instance_seed(opt.seed, 203, i));
    FamilyPoint t2 = t;
    Point3 x2 = x;
    if (i % 2 == 0) t2.lambda += std::polar(1e-4, rng.uniform(-kPi, kPi));
    else x2[1 + i % 4 / 2] += std::polar(1e-4, rng.uniform(-kPi, kPi));
    const double sep = glued_distance(glue_psi_p(t, x, p), glue_psi_p(t2, x2, p));
    return 1e-8 / sep; // at most 1 when the images are 1e-8 apart
  }));
  out.push_back(run_check("psi-degenerate", n, 0.0, th, [&](int i) {
    auto [t, x] = draw_T(i);
    // lambda = 0 and eps = delta = 0: nothing moves
    FamilyPoint z = t;
    z.lambda = 0.0;
    z.A(2, 1) = 0.0;
    z.B(2, 1) = 0.0;
    const GluedPoint s = glue_psi_p(z, x, p);
    double d = std::max((s.point.A - z.A).cwiseAbs().maxCoeff(), (s.point.B - z.B).cwiseAbs().maxCoeff());
    d = std::max(d, point_distance(s.xi, x));
    // lambda = 0 only: delta -> delta1 and the xi3 shear
    FamilyPoint w = t;
    w.lambda = 0.0;
    const GluedPoint s2 = glue_psi_p(w, x, p);
    const Complex a1 = t.A(0, 0), a2 = t.A(1, 1), a3 = t.A(2, 2), e = t.A(2, 1);
    const Complex d1 = e * (t.B(2, 2) - ipow(t.B(0, 0), p) * t.B(1, 1)) / (a3 - ipow(a1, p) * a2);
    Eigen::Matrix3cd Bw = t.B;
    Bw(2, 1) = d1;
    const Point3 xw{x[0], x[1], x[2] + e / (a3 - a2) * x[1] - e / (a3 - ipow(a1, p) * a2) * ipow(x[0], p) * x[1]};
    d = std::max({d, (s2.point.A - t.A).cwiseAbs().maxCoeff(), (s2.point.B - Bw).cwiseAbs().maxCoeff(),
                  point_distance(s2.xi, xw)});
    return d;
  }));
  out.push_back(run_check("p-eigenvalue-covariance", n, tol, th, [&](int i) {
    Rng rng(instance_seed(opt.seed, 204, i));
    const GroupElement f = sample::generic_element(ResonanceClass::double_(p), rng);
    const auto t = triangularize(f);
    const auto a = p_eigenvalues(f.a1, f.m, p), b = p_eigenvalues(t.t.a1, t.t.m, p);
    const double direct = std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
    const double swapped = std::max(std::abs(a[0] - b[1]), std::abs(a[1] - b[0]));
    return scaled(std::min(direct, swapped), std::max(std::abs(a[0]), std::abs(a[1])));
  }));

  out.push_back(run_check("phi-equivariance", n, tol, th, [&](int i) {
    auto [u, x] = draw_U(i);
    GluedPoint t = glue_phi_pq(u, x);
    if (opt.inject_fault && i == 0) t.point.B(2, 1) += 1e-6;
    double r = 0.0;
    for (auto [a, b] : {std::pair{1, 0}, std::pair{0, 1}}) {
      const Point3 lhs = glue_phi_pq(u, family_act(u, a, b, x)).xi;
      r = std::max(r, relative_distance(lhs, family_act(t.point, a, b, t.xi)));
    }
    return r;
  }));
  out.push_back(run_check("phi-roundtrip", n, tol, th, [&](int i) {
    auto [u, x] = draw_U(i);
    const GluedPoint t = glue_phi_pq(u, x);
    const GluedPoint back = invert_phi_pq(t.point, t.xi, p, q);
    const GluedPoint orig{u, x};
    return glued_distance(back, orig) / std::max(1.0, glued_distance(orig, GluedPoint{}));
  }));
  out.push_back(run_check("phi-degenerate", n, 0.0, th, [&](int i) {
    auto [u, x] = draw_U(i);
    u.A(2, 1) = 0.0;
    u.B(2, 1) = 0.0;
    const GluedPoint t = glue_phi_pq(u, x);
    return std::max({point_distance(t.xi, x), std::abs(t.point.B(2, 1)), std::abs(t.point.lambda - u.lambda)});
  }));
  return finish("gluing", std::move(out));
}

// ---- developing maps ----

SuiteReport developing_suite(const SuiteOptions& opt) {
  const int n = opt.samples, th = thread_count(opt.threads);
  const double tol = std::max(opt.tol, 1e-9);
  std::vector<CheckResult> out;
  std::uint64_t stream = 300;
  for (const ResonanceClass& reg : base_regimes()) {
    const std::string tag = regime_tag(reg);
    ++stream;
    out.push_back(run_check("equivariance/" + tag, n, tol, th, [&, stream](int i) {
      Rng rng(instance_seed(opt.seed, stream, i));
      const StructureSpec spec = sample::near_identity_structure(reg, rng, i);
      Structure s = develop(spec);
      if (opt.inject_fault && i == 0) s.deck[0].lin = compose(s.deck[0].lin, sample::near_identity(reg, rng, 1e-6));
      return check_structure(s, 100, tol, instance_seed(opt.seed, stream + 50, i)).max_residual;
    }));
    out.push_back(run_check("psi-identity/" + tag, 1, 0.0, th, [&](int) {
      Rng rng(opt.seed);
      StructureSpec spec = sample::near_identity_structure(reg, rng, 0);
      spec.rho[2] = GroupElement::identity(reg);
      const PsiResult r = psi(spec);
      return std::max(param_distance(r.pair[0], spec.rho[0]), param_distance(r.pair[1], spec.rho[1]));
    }));
  }
  return finish("developing", std::move(out));
}

// ---- action ----

SuiteReport action_suite(const SuiteOptions& opt) {
  const int n = opt.samples, th = thread_count(opt.threads);
  std::vector<CheckResult> out;
  std::uint64_t stream = 400;
  for (const ResonanceClass& reg : base_regimes()) {
    const std::string tag = regime_tag(reg);
    ++stream;
    const auto draw = [&, stream](int i) {
      Rng rng(instance_seed(opt.seed, stream, i));
      return i == 0 ? sample::canonical_pair(reg) : sample::near_canonical_pair(reg, rng);
    };
    out.push_back(run_check("fixed-point-free/" + tag, n, 0.0, th, [&](int i) {
      Pair pr = draw(i);
      if (opt.inject_fault && i == 0) pr = sample::isometric_pair(reg);
      return fixed_point_certificate(pr, 25, 1e-10).fixed_point_free ? 0.0 : 1.0;
    }));
    out.push_back(run_check("isometric-witness/" + tag, 1, 0.0, th, [&](int) {
      const auto c = fixed_point_certificate(sample::isometric_pair(reg), 25, 1e-10);
      if (!c.witness) return 1.0;
      const Point3 img = lvmkit::apply(word_element(sample::isometric_pair(reg), c.witness->r, c.witness->s), c.witness->point);
      return relative_distance(img, c.witness->point) <= 1e-10 ? 0.0 : 1.0;
    }));
    const int probes = std::min(n, 8);
    out.push_back(run_check("properness-probe/" + tag, probes, 0.0, th, [&](int i) {
      const ProbeReport r = properness_probe(draw(i), 100.0, 20, 64, instance_seed(opt.seed, stream + 50, i));
      return static_cast<double>(r.violations.size());
    }));
  }
  return finish("action", std::move(out));
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& opt) {
  if (name == "group-laws") return group_law_suite(opt);
  if (name == "gluing") return gluing_suite(opt);
  if (name == "developing") return developing_suite(opt);
  if (name == "action") return action_suite(opt);
  if (name == "all") {
    std::vector<CheckResult> all;
    for (const auto& s : {group_law_suite(opt), gluing_suite(opt), developing_suite(opt), action_suite(opt)})
      for (const auto& c : s.checks) all.push_back(c);
    return finish("all", std::move(all));
  }
  throw InputError("unknown suite '" + name + "'");
}

io::Json to_json(const SuiteReport& r, const SuiteOptions& opt) {
  io::Json checks = io::Json::array();
  for (const auto& c : r.checks) {
    io::Json j{{"name", c.name}, {"count", c.count}, {"max_residual", c.max_residual}, {"tol", c.tol}, {"pass", c.pass}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(j);
  }
  double worst = 0.0;
  for (const auto& c : r.checks)
    if (std::isfinite(c.max_residual) && c.tol > 0) worst = std::max(worst, c.max_residual);
  return io::Json{{"suite", r.suite},       {"pass", r.pass},       {"seed", opt.seed},
                  {"samples", opt.samples}, {"tol", opt.tol},       {"bound", opt.bound},
                  {"p", opt.p},             {"inject_fault", opt.inject_fault},
                  {"max_residual", worst},  {"checks", checks}};
}

std::string to_text(const SuiteReport& r, const SuiteOptions& opt) {
  std::ostringstream os;
  os.precision(3);
  os << "suite " << r.suite << " seed=" << opt.seed << " samples=" << opt.samples << " tol=" << opt.tol << " p=" << opt.p
     << (opt.inject_fault ? " inject-fault" : "") << "\n";
  for (const auto& c : r.checks) {
    os << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << "  n=" << c.count << " max=" << std::scientific
       << c.max_residual << " tol=" << c.tol << std::defaultfloat;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  os << (r.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

} // namespace lvmkit

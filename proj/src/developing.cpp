#include "lvmkit/developing.hpp"

#include <algorithm>
#include <cmath>

#include "lvmkit/rng.hpp"

namespace lvmkit {

using Kind = ResonanceClass::Kind;

DevMap DevMap::canonical(const ResonanceClass& regime) {
  DevMap d;
  d.regime = regime;
  d.gamma = GroupElement::identity(regime);
  d.log_gamma.regime = regime;
  d.case_tag = regime.kind == Kind::NonResonant ? "diagonal" : regime.kind == Kind::Double ? "double" : "degenerate";
  return d;
}

DevMap DevMap::from_gamma(const GroupElement& gamma, const std::string& case_tag) {
  DevMap d;
  d.regime = gamma.regime;
  d.gamma = gamma;
  d.case_tag = case_tag;
  d.log_gamma.regime = gamma.regime;
  switch (gamma.regime.kind) {
  case Kind::NonResonant:
    if (case_tag != "diagonal") throw InputError("developing map: regime and case disagree");
    d.c = {log_over_2pii(gamma.a1), log_over_2pii(gamma.a2), log_over_2pii(gamma.a3)};
    break;
  case Kind::Double:
    if (case_tag != "double") throw InputError("developing map: regime and case disagree");
    d.log_gamma = group_log(gamma);
    break;
  case Kind::Single:
    if (case_tag != "generic" && case_tag != "degenerate") throw InputError("developing map: regime and case disagree");
    break;
  }
  return d;
}

Point3 dev_eval(const DevMap& d, const Point3& w) {
  const Complex w1 = w[0], x2 = w[1], x3 = w[2];
  if (x2 == Complex(0) && x3 == Complex(0)) throw InputError("dev_eval: (xi2, xi3) = 0");
  switch (d.regime.kind) {
  case Kind::NonResonant:
    return {std::exp(kTwoPiI * w1 * (1.0 + d.c[0])), std::exp(kTwoPiI * w1 * d.c[1]) * x2,
            std::exp(kTwoPiI * w1 * d.c[2]) * x3};
  case Kind::Double: {
    const GroupElement g = group_exp(d.log_gamma * w1);
    return lvmkit::apply(g, {std::exp(kTwoPiI * w1), x2, x3});
  }
  case Kind::Single: {
    const int p = d.regime.p, q = d.regime.q;
    const Complex lg = std::log(d.gamma.a1), lc1 = std::log(d.gamma.a2), lc4 = std::log(d.gamma.a3);
    const Complex c1 = d.gamma.a2, c3 = d.gamma.eps, c4 = d.gamma.a3;
    const Complex y1 = std::exp((kTwoPiI + lg) * w1);
    const Complex y2 = std::exp(w1 * lc1) * x2;
    Complex y3;
    if (d.case_tag == "degenerate") {
      y3 = std::exp(w1 * lc4) * (x3 + (c3 / c4) * w1 * std::exp(kTwoPiI * static_cast<double>(p) * w1) * ipow(x2, q));
    } else {
      const Complex K = c3 / (ipow(d.gamma.a1, p) * ipow(c1, q) - c4);
      y3 = std::exp(w1 * lc4) * x3 + K * std::exp(static_cast<double>(p) * (kTwoPiI + lg) * w1) *
                                         std::exp(static_cast<double>(q) * w1 * lc1) * ipow(x2, q);
    }
    return {y1, y2, y3};
  }
  }
  return w;
}

Point3 DeckTransform::apply(const Point3& w) const {
  const Point3 img = lvmkit::apply(lin, {std::exp(kTwoPiI * w[0]), w[1], w[2]});
  return {w[0] + shift, img[1], img[2]};
}

Structure develop(const StructureSpec& spec) {
  const PsiResult r = psi(spec);
  Structure s;
  s.dev = DevMap::from_gamma(spec.rho[2], r.dev_case);
  s.deck[0] = {r.shifts[0], r.pair[0]};
  s.deck[1] = {r.shifts[1], r.pair[1]};
  s.deck[2] = {Complex(1.0), GroupElement::identity(spec.regime)};
  s.holonomy = spec.rho;
  s.warnings = r.warnings;
  return s;
}

double equivariance_residual(const Structure& s, int k, const Point3& w) {
  if (k < 1 || k > 3) throw InputError("equivariance_residual: generator index must be 1, 2 or 3");
  const Point3 base = dev_eval(s.dev, w);
  const Point3 lhs = dev_eval(s.dev, s.deck[k - 1].apply(w));
  const Point3 rhs = lvmkit::apply(s.holonomy[k - 1], base);
  // coordinate-wise, so an error in a strongly contracted coordinate is not hidden by the others;
  // the floor keeps accidental near-cancellation in one coordinate from dominating
  const double floor = 1e-12 * std::max({1e-300, max_abs(base), max_abs(rhs), max_abs(lhs)});
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    d = std::max(d, std::abs(lhs[i] - rhs[i]) / std::max({floor, std::abs(lhs[i]), std::abs(rhs[i])}));
  return d;
}

std::vector<Point3> sample_cover(int samples, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point3> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const Complex w1 = rng.in_square(1.0);
    const auto z = rng.sphere2(0.5, 2.0);
    out.push_back({w1, z[0], z[1]});
  }
  return out;
}

StructureReport check_structure(const Structure& s, int samples, double tol, std::uint64_t seed) {
  if (samples < 1) throw InputError("check_structure: samples must be at least 1");
  StructureReport rep;
  rep.seed = seed;
  rep.samples = samples;
  rep.tol = tol;
  rep.warnings = s.warnings;
  rep.complete = s.holonomy[2].is_identity();
  double sum = 0.0;
  for (const Point3& w : sample_cover(samples, seed)) {
    for (int k = 1; k <= 3; ++k) {
      const double r = equivariance_residual(s, k, w);
      rep.per_generator[k - 1] = std::max(rep.per_generator[k - 1], std::isnan(r) ? INFINITY : r);
      sum += r;
    }
  }
  rep.mean_residual = sum / (3.0 * samples);
  int worst = 0;
  for (int k = 0; k < 3; ++k)
    if (rep.per_generator[k] > rep.per_generator[worst]) worst = k;
  rep.max_residual = rep.per_generator[worst];
  rep.pass = rep.max_residual <= tol;
  if (!rep.pass) rep.failing_generator = worst + 1;
  return rep;
}

StructureReport check_structure(const StructureSpec& spec, int samples, double tol, std::uint64_t seed) {
  return check_structure(develop(spec), samples, tol, seed);
}

} // namespace lvmkit

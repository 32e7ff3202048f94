#include "lvmkit/samplers.hpp"

#include <cmath>

#include "lvmkit/holonomy.hpp"

namespace lvmkit::sample {

using Kind = ResonanceClass::Kind;

namespace {

Complex spread(Rng& rng) {
  const double sign = rng.unit() < 0.5 ? -1.0 : 1.0;
  return std::polar(std::exp(sign * rng.uniform(0.2, 1.0)), rng.uniform(-kPi, kPi));
}

Mat2 unipotent_conjugator(Rng& rng) {
  Mat2 P = Mat2::Identity();
  P(rng.unit() < 0.5 ? 0 : 1, rng.unit() < 0.5 ? 1 : 0) = rng.in_square(0.5);
  if (P(0, 0) == Complex(1) && P(1, 1) == Complex(1) && P(0, 1) == Complex(0) && P(1, 0) == Complex(0))
    P(1, 0) = rng.in_square(0.5);
  return P;
}

} // namespace

bool has_base_configuration(const ResonanceClass& regime) {
  return regime == ResonanceClass::non_resonant() || regime == ResonanceClass::double_(0) ||
         regime == ResonanceClass::single(0, 2);
}

Configuration base_configuration(const ResonanceClass& regime) {
  Configuration c = example_e1();
  if (regime == ResonanceClass::non_resonant()) return c;
  if (regime == ResonanceClass::double_(0)) {
    c.vectors[5] = c.vectors[4];
    return c;
  }
  if (regime == ResonanceClass::single(0, 2)) {
    c.vectors[5] = {Complex(-2, -3), Complex(-2, -2)};
    return c;
  }
  throw InputError("no base configuration for regime " + regime.name());
}

Pair canonical_pair(const ResonanceClass& regime) {
  const HolonomyPair h = holonomy_pair(base_configuration(regime));
  Pair pr{GroupElement::identity(regime), GroupElement::identity(regime)};
  for (GroupElement* e : {&pr.f, &pr.g}) {
    const auto& v = e == &pr.f ? h.alpha : h.beta;
    e->a1 = v[0];
    e->a2 = v[1];
    e->a3 = v[2];
    e->m = Mat2::Zero();
    e->m(0, 0) = v[1];
    e->m(1, 1) = v[2];
  }
  return pr;
}

GroupElement near_identity(const ResonanceClass& regime, Rng& rng, double radius) {
  switch (regime.kind) {
  case Kind::NonResonant:
    return GroupElement::diagonal(rng.near_one(radius), rng.near_one(radius), rng.near_one(radius));
  case Kind::Single:
    return GroupElement::single(regime.p, regime.q, rng.near_one(radius), rng.near_one(radius),
                                rng.near_one(radius), rng.in_square(radius));
  case Kind::Double: {
    Mat2 m = Mat2::Identity();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) += rng.in_square(radius / 2);
    return GroupElement::double_(regime.p, rng.near_one(radius), m);
  }
  }
  return GroupElement::identity(regime);
}

GroupElement generic_element(const ResonanceClass& regime, Rng& rng) {
  const Complex a1 = rng.annulus(0.5, 2.0), a2 = rng.annulus(0.5, 2.0), a3 = rng.annulus(0.5, 2.0);
  switch (regime.kind) {
  case Kind::NonResonant: return GroupElement::diagonal(a1, a2, a3);
  case Kind::Single: return GroupElement::single(regime.p, regime.q, a1, a2, a3, rng.in_square(1.0));
  case Kind::Double: {
    Mat2 m;
    m << a2, rng.in_square(0.5), rng.in_square(0.5), a3;
    return GroupElement::double_(regime.p, a1, m);
  }
  }
  return GroupElement::identity(regime);
}

Pair commuting_pair(const ResonanceClass& regime, Rng& rng) {
  const int p = regime.p;
  switch (regime.kind) {
  case Kind::NonResonant: return {generic_element(regime, rng), generic_element(regime, rng)};
  case Kind::Single: {
    GroupElement f = generic_element(regime, rng), g = generic_element(regime, rng);
    g.eps = f.eps * resonance_gap(g) / resonance_gap(f);
    const GroupElement h = generic_element(regime, rng);
    return {conjugate(f, h), conjugate(g, h)};
  }
  case Kind::Double: {
    const Complex a1 = rng.annulus(0.5, 2.0), b1 = rng.annulus(0.5, 2.0);
    Mat2 mf = Mat2::Zero(), mg = Mat2::Zero();
    mf(0, 0) = rng.annulus(0.5, 2.0);
    mf(1, 1) = rng.annulus(0.5, 2.0);
    mf(1, 0) = rng.in_square(1.0);
    mg(0, 0) = rng.annulus(0.5, 2.0);
    mg(1, 1) = rng.annulus(0.5, 2.0);
    mg(1, 0) = mf(1, 0) * (mg(1, 1) - ipow(b1, p) * mg(0, 0)) / (mf(1, 1) - ipow(a1, p) * mf(0, 0));
    const GroupElement h = GroupElement::double_(p, rng.annulus(0.5, 2.0), unipotent_conjugator(rng));
    return {conjugate(GroupElement::double_(p, a1, mf), h), conjugate(GroupElement::double_(p, b1, mg), h)};
  }
  }
  return {};
}

Pair near_canonical_pair(const ResonanceClass& regime, Rng& rng, double radius) {
  Pair pr = canonical_pair(regime);
  const int p = regime.p, q = regime.q;
  for (GroupElement* e : {&pr.f, &pr.g}) {
    e->a1 *= rng.near_one(radius);
    e->a2 *= rng.near_one(radius);
    if (regime.kind == Kind::NonResonant) e->a3 *= rng.near_one(radius);
    else e->a3 = ipow(e->a1, p) * ipow(e->a2, q);
  }
  if (regime.kind == Kind::Single) {
    pr.f.eps = pr.f.a3 * rng.in_square(radius);
    pr.g.eps = pr.g.a3 * rng.in_square(radius);
  } else if (regime.kind == Kind::Double) {
    // on the doubly resonant diagonal locus only the twisted off-diagonal equation survives
    const Complex x = rng.annulus(0.5, 1.0) * radius, y = rng.in_square(radius), z = rng.in_square(radius);
    pr.f.m << pr.f.a2, pr.f.a2 * y, pr.f.a2 * x, pr.f.a3;
    const Complex d1 = pr.g.a2 * z;
    const Complex d2 = d1 * pr.f.m(0, 1) * ipow(pr.f.a1, p) / (pr.f.m(1, 0) * ipow(pr.g.a1, p));
    pr.g.m << pr.g.a2, d2, d1, pr.g.a3;
  }
  return pr;
}

Pair isometric_pair(const ResonanceClass& regime) {
  const Complex i(0.0, 1.0);
  Pair pr{GroupElement::identity(regime), GroupElement::identity(regime)};
  const std::array<Complex, 3> a{i, -1.0, i}, b{-1.0, i, 1.0};
  for (GroupElement* e : {&pr.f, &pr.g}) {
    const auto& v = e == &pr.f ? a : b;
    e->a1 = v[0];
    e->a2 = v[1];
    e->a3 = v[2];
    e->m = Mat2::Zero();
    e->m(0, 0) = v[1];
    e->m(1, 1) = v[2];
  }
  return pr;
}

StructureSpec near_identity_structure(const ResonanceClass& regime, Rng& rng, int draw, double radius) {
  StructureSpec spec;
  spec.regime = regime;
  const Pair pr = canonical_pair(regime);
  spec.rho[0] = pr.f;
  spec.rho[1] = pr.g;
  spec.rho[2] = near_identity(regime, rng, radius);
  if (regime.kind == Kind::Single && draw % 2 == 0) {
    GroupElement& c = spec.rho[2];
    c.a3 = ipow(c.a1, regime.p) * ipow(c.a2, regime.q);
  }
  spec.base = base_configuration(regime);
  return spec;
}

Point3 point_in_V(Rng& rng) {
  const Complex x1 = rng.annulus(0.5, 2.0);
  const auto z = rng.sphere2(0.5, 2.0);
  return {x1, z[0], z[1]};
}

FamilyPoint T_point(Rng& rng) {
  const Complex a1 = rng.annulus(0.95, 1.05), a2 = rng.annulus(1.2, 1.8);
  const Complex a3 = a2 * rng.annulus(0.2, 0.5);
  const Complex b1 = rng.annulus(0.5, 2.0), b2 = rng.annulus(0.5, 2.0), b3 = rng.annulus(0.5, 2.0);
  const Complex eps = rng.in_square(1.0);
  const Complex delta = eps * (b3 - b2) / (a3 - a2);
  return FamilyPoint::make_T(lower_shape(a1, a2, a3, eps), lower_shape(b1, b2, b3, delta), rng.in_square(1.0));
}

FamilyPoint Tpq_point(int p, int q, Rng& rng) {
  Complex a1, a2, a3, res;
  do {
    a1 = rng.annulus(0.8, 1.25);
    a2 = rng.annulus(0.5, 2.0);
    a3 = rng.annulus(0.5, 2.0);
    res = ipow(a1, p) * ipow(a2, q);
  } while (std::abs(a3 - res) < 0.1 * std::max(1.0, std::abs(res)) || std::abs(a3 - a2) < 0.1);
  const Complex b1 = rng.annulus(0.5, 2.0), b2 = rng.annulus(0.5, 2.0), b3 = rng.annulus(0.5, 2.0);
  const Complex eps = rng.in_square(1.0);
  const Complex delta = eps * (b3 - ipow(b1, p) * ipow(b2, q)) / (a3 - res);
  return FamilyPoint::make_Tpq(p, q, lower_shape(a1, a2, a3, eps), lower_shape(b1, b2, b3, delta),
                               rng.in_square(1.0));
}

HolonomyPair eigen_data(Rng& rng, int draw) {
  HolonomyPair h;
  h.alpha = {spread(rng), spread(rng), spread(rng)};
  h.beta = {spread(rng), spread(rng), spread(rng)};
  const int p = rng.integer(-3, 3);
  if (draw % 3 == 1) {
    const int q = rng.integer(2, 3);
    h.alpha[2] = ipow(h.alpha[0], p) * ipow(h.alpha[1], q);
    h.beta[2] = ipow(h.beta[0], p) * ipow(h.beta[1], q);
  } else if (draw % 3 == 2) {
    h.alpha[2] = ipow(h.alpha[0], p) * h.alpha[1];
    h.beta[2] = ipow(h.beta[0], p) * h.beta[1];
  }
  return h;
}

} // namespace lvmkit::sample

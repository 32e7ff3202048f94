#include <doctest.h>

#include "lvmkit/developing.hpp"
#include "lvmkit/samplers.hpp"

using namespace lvmkit;
using C = Complex;

namespace {

const std::vector<ResonanceClass> kBases{ResonanceClass::non_resonant(), ResonanceClass::single(0, 2),
                                         ResonanceClass::double_(0)};

double coordinate_residual(const Point3& lhs, const Point3& rhs) {
  double d = 0.0;
  const double floor = 1e-12 * std::max({1e-300, max_abs(lhs), max_abs(rhs)});
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(lhs[i] - rhs[i]) / std::max({floor, std::abs(lhs[i]), std::abs(rhs[i])}));
  return d;
}

StructureSpec canonical_spec(const ResonanceClass& reg) {
  StructureSpec s;
  s.regime = reg;
  const Pair pr = sample::canonical_pair(reg);
  s.rho = {pr.f, pr.g, GroupElement::identity(reg)};
  s.base = sample::base_configuration(reg);
  return s;
}

} // namespace

TEST_CASE("canonical developing map") {
  for (const auto& reg : kBases) {
    const DevMap d = DevMap::canonical(reg);
    const Point3 y = dev_eval(d, {C(0), C(1), C(0)});
    CHECK(y[0] == C(1));
    CHECK(y[1] == C(1));
    CHECK(y[2] == C(0));
    const Point3 z = dev_eval(d, {C(1), C(0.3, 1), C(-2)});
    CHECK(std::abs(z[0] - C(1)) < 1e-15);
    CHECK(z[1] == C(0.3, 1));
    CHECK(z[2] == C(-2));
    CHECK_THROWS_AS(dev_eval(d, {C(0.5), C(0), C(0)}), InputError);
  }
  CHECK_THROWS_AS(DevMap::from_gamma(GroupElement::identity(ResonanceClass::non_resonant()), "double"), InputError);
  CHECK_THROWS_AS(DevMap::from_gamma(GroupElement::identity(ResonanceClass::single(1, 2)), "diagonal"), InputError);
}

TEST_CASE("developing maps agree with independent evaluation of the formulas") {
  Rng rng(50);
  const auto cover = sample_cover(40, 3);
  // diagonal
  const GroupElement gd = sample::near_identity(ResonanceClass::non_resonant(), rng, 0.1);
  const DevMap dd = DevMap::from_gamma(gd, "diagonal");
  const C c1 = std::log(gd.a1) / kTwoPiI, c2 = std::log(gd.a2) / kTwoPiI, c3 = std::log(gd.a3) / kTwoPiI;
  for (const auto& w : cover) {
    const Point3 want{std::exp(kTwoPiI * w[0] * (1.0 + c1)), std::exp(kTwoPiI * w[0] * c2) * w[1],
                      std::exp(kTwoPiI * w[0] * c3) * w[2]};
    CHECK(relative_distance(dev_eval(dd, w), want) < 1e-12);
  }
  // single regime, both cases, written with principal complex powers
  for (const auto& reg : {ResonanceClass::single(1, 2), ResonanceClass::single(-1, 3)}) {
    const int p = reg.p, q = reg.q;
    for (int trial = 0; trial < 4; ++trial) {
      GroupElement g = sample::near_identity(reg, rng, 0.1);
      const bool degenerate = trial % 2 == 0;
      if (degenerate) g.a3 = std::pow(g.a1, p) * std::pow(g.a2, q);
      const DevMap d = DevMap::from_gamma(g, degenerate ? "degenerate" : "generic");
      for (const auto& w : cover) {
        const C w1 = w[0];
        const C y1 = std::exp(kTwoPiI * w1) * std::pow(g.a1, w1);
        const C y2 = std::pow(g.a2, w1) * w[1];
        C y3;
        if (degenerate)
          y3 = std::pow(g.a3, w1) * w[2] + g.eps / g.a3 * std::pow(g.a3, w1) * w1 * std::exp(kTwoPiI * C(p) * w1) *
                                               std::pow(w[1], q);
        else
          y3 = std::pow(g.a3, w1) * w[2] +
               g.eps / (std::pow(g.a1, p) * std::pow(g.a2, q) - g.a3) * std::pow(y1, p) * std::pow(y2, q);
        CHECK(relative_distance(dev_eval(d, w), Point3{y1, y2, y3}) < 1e-12);
      }
    }
  }
  // double regime: at integer w1 the one-parameter subgroup is a power of gamma
  for (const auto& reg : {ResonanceClass::double_(0), ResonanceClass::double_(1)}) {
    const GroupElement g = sample::near_identity(reg, rng, 0.1);
    const DevMap d = DevMap::from_gamma(g, "double");
    for (int n = -2; n <= 2; ++n) {
      const Point3 x = sample::point_in_V(rng);
      const Point3 got = dev_eval(d, {C(n), x[1], x[2]});
      const Point3 want = apply(power(g, n), {C(1), x[1], x[2]});
      CHECK(relative_distance(got, want) < 1e-12);
    }
  }
}

TEST_CASE("third generator equivariance of resonant developing maps") {
  // dev(w1 + 1, xi) = gamma dev(w1, xi), with the deck transform for the third loop being w1 -> w1 + 1
  Rng rng(51);
  for (const auto& reg : {ResonanceClass::single(2, 2), ResonanceClass::double_(-1)}) {
    for (int trial = 0; trial < 6; ++trial) {
      GroupElement g = sample::near_identity(reg, rng, 0.1);
      std::string tag = reg.kind == ResonanceClass::Kind::Double ? "double" : "generic";
      if (reg.kind == ResonanceClass::Kind::Single && trial % 2 == 0) {
        g.a3 = ipow(g.a1, reg.p) * ipow(g.a2, reg.q);
        tag = "degenerate";
      }
      const DevMap d = DevMap::from_gamma(g, tag);
      for (const auto& w : sample_cover(20, trial)) {
        const Point3 lhs = dev_eval(d, {w[0] + 1.0, w[1], w[2]});
        const Point3 rhs = lvmkit::apply(g, dev_eval(d, w));
        CHECK(coordinate_residual(lhs, rhs) < 1e-11);
      }
    }
  }
}

TEST_CASE("equivariance of canonical and projected structures") {
  Rng rng(52);
  for (const auto& reg : kBases) {
    const Structure s0 = develop(canonical_spec(reg));
    for (const auto& w : sample_cover(50, 1))
      for (int k = 1; k <= 3; ++k) CHECK(equivariance_residual(s0, k, w) < 1e-14);
    const StructureReport r0 = check_structure(s0, 50, 1e-12, 1);
    CHECK(r0.pass);
    CHECK(r0.complete);

    for (int draw = 0; draw < 10; ++draw) {
      const StructureSpec spec = sample::near_identity_structure(reg, rng, draw);
      const StructureReport r = check_structure(spec, 100, 1e-9, draw);
      CHECK(r.pass);
      CHECK(r.max_residual <= 1e-9);
      CHECK_FALSE(r.complete);
      CHECK(r.mean_residual <= r.max_residual);
    }
  }
  CHECK_THROWS_AS(equivariance_residual(develop(canonical_spec(kBases[0])), 4, {C(0), C(1), C(1)}), InputError);
}

TEST_CASE("mismatched holonomy is detected and located") {
  Rng rng(53);
  for (const auto& reg : kBases) {
    const StructureSpec a = sample::near_identity_structure(reg, rng, 1);
    Structure s = develop(a);
    // holonomy of the first generator taken from a structure perturbed by 1e-2
    s.holonomy[0] = compose(s.holonomy[0], sample::near_identity(reg, rng, 1e-2));
    const StructureReport r = check_structure(s, 50, 1e-9, 0);
    CHECK_FALSE(r.pass);
    CHECK(r.max_residual > 1e-3);
    REQUIRE(r.failing_generator.has_value());
    CHECK(*r.failing_generator == 1);
    CHECK(r.per_generator[1] <= 1e-9);
    CHECK(r.per_generator[2] <= 1e-9);

    Structure t = develop(a);
    t.deck[1].lin = compose(t.deck[1].lin, sample::near_identity(reg, rng, 1e-2));
    const StructureReport rt = check_structure(t, 50, 1e-9, 0);
    REQUIRE(rt.failing_generator.has_value());
    CHECK(*rt.failing_generator == 2);
  }
}

TEST_CASE("residual is covariant under diagonal conjugation") {
  Rng rng(54);
  const ResonanceClass reg = ResonanceClass::non_resonant();
  Structure s = develop(sample::near_identity_structure(reg, rng, 0));
  s.holonomy[1] = compose(s.holonomy[1], sample::near_identity(reg, rng, 1e-2));
  for (int trial = 0; trial < 10; ++trial) {
    const GroupElement g = sample::generic_element(reg, rng);
    const GroupElement conj = compose(g, compose(s.holonomy[1], inverse(g)));
    for (const auto& w : sample_cover(10, trial)) {
      const Point3 base = dev_eval(s.dev, w);
      const Point3 lhs = dev_eval(s.dev, s.deck[1].apply(w));
      const double r0 = equivariance_residual(s, 2, w);
      const double r1 = coordinate_residual(lvmkit::apply(g, lhs), lvmkit::apply(conj, lvmkit::apply(g, base)));
      CHECK(std::abs(r0 - r1) <= 1e-10 * std::max(1.0, r0));
    }
  }
}

TEST_CASE("check_structure is deterministic") {
  Rng rng(55);
  const StructureSpec spec = sample::near_identity_structure(ResonanceClass::double_(0), rng, 3);
  const StructureReport a = check_structure(spec, 30, 1e-9, 99), b = check_structure(spec, 30, 1e-9, 99);
  CHECK(a.max_residual == b.max_residual);
  CHECK(a.mean_residual == b.mean_residual);
  CHECK(a.seed == 99);
  CHECK(a.samples == 30);
  const auto c1 = sample_cover(5, 7), c2 = sample_cover(5, 7);
  CHECK(c1 == c2);
  for (const auto& w : c1) {
    CHECK(std::abs(w[0].real()) <= 1.0);
    CHECK(std::abs(w[0].imag()) <= 1.0);
    const double n = std::sqrt(std::norm(w[1]) + std::norm(w[2]));
    CHECK(n >= 0.5 - 1e-12);
    CHECK(n <= 2.0 + 1e-12);
  }
  CHECK_THROWS_AS(check_structure(spec, 0, 1e-9, 0), InputError);
}

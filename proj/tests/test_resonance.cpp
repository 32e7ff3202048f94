#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "lvmkit/resonance.hpp"
#include "lvmkit/rng.hpp"
#include "lvmkit/samplers.hpp"

using namespace lvmkit;
using C = Complex;

namespace {

HolonomyPair eigen(std::array<C, 3> a, std::array<C, 3> b) {
  HolonomyPair h;
  h.alpha = a;
  h.beta = b;
  return h;
}

// Direct products instead of log space; fine while |x|^(3 bound) stays in double range.
double direct_defect(const std::array<C, 3>& x, int j, const Exponent& p) {
  C prod(1.0);
  for (int k = 0; k < 3; ++k)
    for (int n = 0; n < std::abs(p[k]); ++n) prod = p[k] > 0 ? prod * x[k] : prod / x[k];
  return std::abs(x[j - 1] / prod - 1.0);
}

std::set<Resonance> enumerate_oracle(const HolonomyPair& h, double tol, int bound) {
  std::set<Resonance> out;
  for (int j = 1; j <= 3; ++j)
    for (int a = -bound; a <= bound; ++a)
      for (int b = 0; b <= bound; ++b)
        for (int c = 0; c <= bound; ++c) {
          const Exponent p{a, b, c};
          if (std::max(direct_defect(h.alpha, j, p), direct_defect(h.beta, j, p)) <= tol) out.insert({j, p});
        }
  for (int j = 1; j <= 3; ++j) {
    Exponent e{0, 0, 0};
    e[j - 1] = 1;
    out.insert({j, e});
  }
  return out;
}

std::set<Resonance> as_set(const ResonanceSearch& s) { return {s.resonances.begin(), s.resonances.end()}; }

// Flow of a field by RK4.
Point3 flow(const ResonantVectorField& X, Point3 z, double t, int steps = 20) {
  const double h = t / steps;
  auto add = [](const Point3& a, const Point3& b, double s) {
    return Point3{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
  };
  for (int i = 0; i < steps; ++i) {
    const Point3 k1 = X.evaluate(z);
    const Point3 k2 = X.evaluate(add(z, k1, h / 2));
    const Point3 k3 = X.evaluate(add(z, k2, h / 2));
    const Point3 k4 = X.evaluate(add(z, k3, h));
    for (int c = 0; c < 3; ++c) z[c] += h / 6 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
  }
  return z;
}

// phi^Y_{-t} phi^X_{-t} phi^Y_t phi^X_t (x) = x + t^2 [X,Y](x) + O(t^3); three-level Richardson in t.
Point3 flow_bracket(const ResonantVectorField& X, const ResonantVectorField& Y, const Point3& x) {
  auto quotient = [&](double t) {
    const Point3 y = flow(Y, flow(X, flow(Y, flow(X, x, t), t), -t), -t);
    return Point3{(y[0] - x[0]) / (t * t), (y[1] - x[1]) / (t * t), (y[2] - x[2]) / (t * t)};
  };
  const double t = 1e-2;
  const Point3 c1 = quotient(t), c2 = quotient(t / 2), c4 = quotient(t / 4);
  Point3 out;
  for (int k = 0; k < 3; ++k) {
    const C r1 = 2.0 * c2[k] - c1[k], r2 = 2.0 * c4[k] - c2[k];
    out[k] = (4.0 * r2 - r1) / 3.0;
  }
  return out;
}

const HolonomyPair kSingle12 = eigen({C(2), C(0.6), C(0.72)}, {C(1, 1), C(0, 0.5), C(-0.25, -0.25)});

double field_distance(const ResonantVectorField& a, const ResonantVectorField& b) {
  double d = 0.0;
  for (const auto& [k, c] : (a + b * C(-1)).terms()) d = std::max(d, std::abs(c));
  return d;
}

ResonantVectorField random_field(const HolonomyPair& amb, const std::vector<Resonance>& keys, Rng& rng) {
  ResonantVectorField X(amb);
  for (const auto& k : keys) X.add(k.j, k.p, rng.in_square(1.0));
  return X;
}

} // namespace

TEST_CASE("resonance examples against exhaustive enumeration") {
  const ResonanceSearch s = find_resonances(kSingle12, 1e-9, 8);
  CHECK(as_set(s) == enumerate_oracle(kSingle12, 1e-9, 8));
  CHECK(s.nontrivial() == std::vector<Resonance>{{3, {1, 2, 0}}});
  CHECK(classify_regime(s.resonances) == ResonanceClass::single(1, 2));

  const HolonomyPair plain = eigen({C(2), C(0.5), C(0.3)}, {C(3), C(0, 0.4), C(0.2)});
  const ResonanceSearch s2 = find_resonances(plain, 1e-9, 16);
  CHECK(s2.resonances.size() == 3);
  CHECK(as_set(s2) == enumerate_oracle(plain, 1e-9, 16));
  CHECK(classify_regime(s2.resonances) == ResonanceClass::non_resonant());

  const HolonomyPair dbl = eigen({C(2), C(0.5), C(0.5)}, {C(3), C(0, 0.4), C(0, 0.4)});
  const ResonanceSearch s3 = find_resonances(dbl, 1e-9, 16);
  CHECK(as_set(s3) == enumerate_oracle(dbl, 1e-9, 16));
  const std::vector<Resonance> want{{2, {0, 0, 1}}, {3, {0, 1, 0}}};
  CHECK(s3.nontrivial() == want);
  CHECK(classify_regime(s3.resonances) == ResonanceClass::double_(0));
}

TEST_CASE("seeded draws agree with enumeration and j=1 stays trivial") {
  Rng rng(1234);
  int planted = 0;
  for (int draw = 0; draw < 60; ++draw) {
    const HolonomyPair h = sample::eigen_data(rng, draw);
    const ResonanceSearch s = find_resonances(h, 1e-9, 10);
    CHECK(as_set(s) == enumerate_oracle(h, 1e-9, 10));
    for (const auto& r : s.nontrivial()) {
      CHECK(r.j != 1);
      // the only non-trivial shape with p3 != 0 is the double partner (2, (-p, 0, 1))
      if (r.p[2] != 0) CHECK((r.j == 2 && r.p[1] == 0 && r.p[2] == 1));
    }
    if (!s.nontrivial().empty()) ++planted;
  }
  CHECK(planted >= 30);
}

TEST_CASE("swapping the generators preserves the resonances") {
  Rng rng(77);
  for (int draw = 0; draw < 30; ++draw) {
    const HolonomyPair h = sample::eigen_data(rng, draw);
    const HolonomyPair sw = eigen(h.beta, h.alpha);
    CHECK(as_set(find_resonances(h, 1e-9, 16)) == as_set(find_resonances(sw, 1e-9, 16)));
  }
}

TEST_CASE("near resonances are reported separately") {
  HolonomyPair h = kSingle12;
  h.alpha[2] *= 1.0 + 4e-9;
  const ResonanceSearch s = find_resonances(h, 1e-9, 8);
  CHECK(s.nontrivial().empty());
  REQUIRE(s.near.size() == 1);
  CHECK(s.near[0].r == Resonance{3, {1, 2, 0}});
  CHECK(s.near[0].defect > 1e-9);
  CHECK(s.near[0].defect <= 1e-8);
  CHECK_THROWS_AS(find_resonances(h, 0.0, 8), InputError);
  CHECK_THROWS_AS(find_resonances(h, 1e-9, 0), InputError);
}

TEST_CASE("unit-circle moduli fall back to full enumeration") {
  // |alpha_1| = |alpha_2| = 1 makes the log-modulus system singular
  const C u1 = std::exp(C(0, 0.9)), u2 = std::exp(C(0, 2.1));
  const HolonomyPair h = eigen({u1, u2, u1 * u2 * u2}, {C(2), C(0.5), C(2) * C(0.25)});
  const ResonanceSearch s = find_resonances(h, 1e-9, 12);
  CHECK(as_set(s) == enumerate_oracle(h, 1e-9, 12));
  CHECK(s.nontrivial() == std::vector<Resonance>{{3, {1, 2, 0}}});
}

TEST_CASE("regime classification") {
  CHECK(classify_regime({{1, {1, 0, 0}}, {2, {0, 1, 0}}, {3, {0, 0, 1}}}) == ResonanceClass::non_resonant());
  CHECK(classify_regime({{3, {-2, 3, 0}}}) == ResonanceClass::single(-2, 3));
  CHECK(classify_regime({{3, {2, 1, 0}}, {2, {-2, 0, 1}}}) == ResonanceClass::double_(2));
  CHECK_THROWS_AS(classify_regime({{2, {2, 0, 0}}}), UnclassifiableResonancePattern);
  CHECK_THROWS_AS(classify_regime({{3, {2, 1, 0}}, {2, {1, 0, 1}}}), UnclassifiableResonancePattern);
  CHECK_THROWS_AS(classify_regime({{3, {1, 2, 0}}, {3, {2, 2, 0}}}), UnclassifiableResonancePattern);
}

TEST_CASE("cohomology dimensions") {
  CHECK(cohomology_dims(ResonanceClass::non_resonant()) == std::array<int, 4>{3, 6, 3, 0});
  CHECK(cohomology_dims(ResonanceClass::single(1, 2)) == std::array<int, 4>{4, 8, 4, 0});
  CHECK(cohomology_dims(ResonanceClass::double_(-1)) == std::array<int, 4>{5, 10, 5, 0});
  for (const auto& c : {ResonanceClass::non_resonant(), ResonanceClass::single(0, 3), ResonanceClass::double_(4)}) {
    const auto d = cohomology_dims(c);
    CHECK(d[1] == 2 * d[0]);
    CHECK(d[2] == d[0]);
    CHECK(d[3] == 0);
  }
}

TEST_CASE("bracket examples") {
  ResonantVectorField X(kSingle12), Y(kSingle12);
  X.add(3, {0, 0, 1}, C(1));
  Y.add(3, {1, 2, 0}, C(1));
  const ResonantVectorField b = bracket(X, Y);
  REQUIRE(b.terms().size() == 1);
  CHECK(b.terms().begin()->first == Resonance{3, {1, 2, 0}});
  CHECK(b.terms().begin()->second == C(-1));
  CHECK_FALSE(first_obstruction_vanishes(X, Y));
  CHECK(first_obstruction_vanishes(X, X));
  CHECK(bracket(Y, Y).terms().empty());

  ResonantVectorField D1(kSingle12), D2(kSingle12);
  D1.add(1, {1, 0, 0}, C(1));
  D2.add(2, {0, 1, 0}, C(1));
  CHECK(bracket(D1, D2).terms().empty());
  CHECK(first_obstruction_vanishes(D1, D2));

  CHECK_THROWS_AS(X.add(3, {2, 2, 0}, C(1)), InputError);
  CHECK_THROWS_AS(X.add(2, {0, -1, 0}, C(1)), InputError);
  const HolonomyPair other = eigen({C(2), C(0.5), C(0.3)}, {C(3), C(0, 0.4), C(0.2)});
  ResonantVectorField Z(other);
  Z.add(1, {1, 0, 0}, C(1));
  CHECK_THROWS_AS(bracket(X, Z), InputError);
}

TEST_CASE("bracket matches the flow commutator") {
  Rng rng(9);
  const std::vector<Resonance> keys{{1, {1, 0, 0}}, {2, {0, 1, 0}}, {3, {0, 0, 1}}, {3, {1, 2, 0}}};
  for (int inst = 0; inst < 3; ++inst) {
    const ResonantVectorField X = random_field(kSingle12, keys, rng);
    const ResonantVectorField Y = random_field(kSingle12, keys, rng);
    const ResonantVectorField B = bracket(X, Y);
    for (int pt = 0; pt < 20; ++pt) {
      const Point3 z{rng.annulus(0.7, 1.3), rng.annulus(0.7, 1.3), rng.annulus(0.7, 1.3)};
      const Point3 fd = flow_bracket(X, Y, z), ex = B.evaluate(z);
      for (int k = 0; k < 3; ++k) CHECK(std::abs(fd[k] - ex[k]) <= 1e-6 * std::max(1.0, std::abs(ex[k])));
    }
  }
}

TEST_CASE("bracket antisymmetry, Jacobi and closure in the double regime") {
  const HolonomyPair dbl = eigen({C(2), C(0.5), C(4) * C(0.5)}, {C(0, 3), C(0.4), C(0, 3) * C(0, 3) * C(0.4)});
  const ResonanceSearch s = find_resonances(dbl, 1e-9, 8);
  REQUIRE(classify_regime(s.resonances) == ResonanceClass::double_(2));
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto X = random_field(dbl, s.resonances, rng);
    const auto Y = random_field(dbl, s.resonances, rng);
    const auto Z = random_field(dbl, s.resonances, rng);
    CHECK(field_distance(bracket(X, Y), bracket(Y, X) * C(-1)) < 1e-10);
    const auto jac = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y));
    CHECK(jac.max_coefficient() < 1e-10);
    const auto bxy = bracket(X, Y);
    for (const auto& [k, c] : bxy.terms()) CHECK(resonance_defect(dbl, k.j, k.p) < 1e-9);
  }
}

#include <doctest.h>

#include "lvmkit/holonomy.hpp"
#include "lvmkit/rng.hpp"

using namespace lvmkit;
using C = Complex;

namespace {

// Independent path: adjugate inverse, hand-written bilinear pairing, then exp.
HolonomyPair holonomy_oracle(const Configuration& c) {
  const auto& L = c.vectors;
  const C o00 = L[1][0] - L[0][0], o01 = L[1][1] - L[0][1];
  const C o10 = L[2][0] - L[0][0], o11 = L[2][1] - L[0][1];
  const C det = o00 * o11 - o01 * o10;
  // columns of the inverse
  const C inv00 = o11 / det, inv10 = -o10 / det;
  const C inv01 = -o01 / det, inv11 = o00 / det;
  HolonomyPair h;
  for (int j = 0; j < 3; ++j) {
    const C d0 = L[j + 3][0] - L[0][0], d1 = L[j + 3][1] - L[0][1];
    h.alpha[j] = std::exp(kTwoPiI * (d0 * inv00 + d1 * inv10));
    h.beta[j] = std::exp(kTwoPiI * (d0 * inv01 + d1 * inv11));
  }
  return h;
}

double rel(C a, C b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

bool has_rule(const std::vector<HolonomyViolation>& v, const std::string& rule, int j) {
  for (const auto& x : v)
    if (x.rule == rule && x.j == j) return true;
  return false;
}

} // namespace

TEST_CASE("omega matrix of E1") {
  const Mat2 om = omega_matrix(example_e1());
  CHECK(std::abs(om(0, 0) - C(-1, 1)) == 0.0);
  CHECK(std::abs(om(0, 1)) == 0.0);
  CHECK(std::abs(om(1, 0) - C(-1)) == 0.0);
  CHECK(std::abs(om(1, 1) - C(1)) == 0.0);
  const C det = om(0, 0) * om(1, 1) - om(0, 1) * om(1, 0);
  CHECK(std::abs(det - C(-1, 1)) < 1e-15);
  CHECK(std::abs(om.determinant() - det) < 1e-15);

  Configuration bad = example_e1();
  bad.vectors[2] = bad.vectors[1];
  CHECK_THROWS_AS(omega_matrix(bad), InternalInconsistency);
}

TEST_CASE("normalized E1 omega and pairing invariance") {
  const Configuration n = normalize_affine(example_e1());
  const Mat2 om = omega_matrix(n);
  CHECK(std::abs(om(0, 0) - C(-1)) < 1e-14);
  CHECK(std::abs(om(0, 1) - C(1)) < 1e-14);
  CHECK(std::abs(om(1, 0) - C(-1)) < 1e-14);
  CHECK(std::abs(om(1, 1)) < 1e-14);
  const auto e0 = holonomy_exponents(example_e1());
  const auto e1 = holonomy_exponents(n);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 2; ++k) CHECK(std::abs(e0[j][k] - e1[j][k]) < 1e-12);
}

TEST_CASE("E1 holonomy matches the independent evaluation") {
  const Configuration e1 = example_e1();
  const HolonomyPair h = holonomy_pair(e1);
  const HolonomyPair o = holonomy_oracle(e1);
  for (int j = 0; j < 3; ++j) {
    CHECK(rel(h.alpha[j], o.alpha[j]) < 1e-12);
    CHECK(rel(h.beta[j], o.beta[j]) < 1e-12);
  }
  REQUIRE(h.omega.has_value());
  CHECK(validate_holonomy(h).empty());
  // exponents of Lambda_4 pair to (0, ...): alpha_1 is exactly 1
  CHECK(std::abs(h.a(1) - C(1)) < 1e-15);
}

TEST_CASE("holonomy is invariant under affine maps") {
  Rng rng(21);
  const Configuration e1 = example_e1();
  const HolonomyPair h0 = holonomy_pair(e1);
  int done = 0;
  while (done < 20) {
    Eigen::MatrixXcd M(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) M(i, j) = rng.in_square(2.0);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    if (svd.singularValues()(0) > 1e3 * svd.singularValues()(1)) continue;
    Eigen::VectorXcd b(2);
    b << rng.in_square(3.0), rng.in_square(3.0);
    const HolonomyPair h = compute_holonomy(apply_affine(e1, M, b));
    for (int j = 0; j < 3; ++j) {
      CHECK(rel(h.alpha[j], h0.alpha[j]) < 1e-10);
      CHECK(rel(h.beta[j], h0.beta[j]) < 1e-10);
    }
    ++done;
  }
}

TEST_CASE("orthogonal exponent gives a unit eigenvalue") {
  // Lambda_1 = 0 and an identity frame, so the pairing with e1 is the first coordinate
  const Configuration c{2,
                        {{C(0), C(0)},
                         {C(1), C(0)},
                         {C(0), C(1)},
                         {C(0), C(0.3)},
                         {C(-1), C(-1)},
                         {C(-2), C(0.5, 0.5)}}};
  const HolonomyPair h = compute_holonomy(c);
  CHECK(h.a(1) == C(1));
  CHECK(std::abs(h.b(1) - std::exp(kTwoPiI * 0.3)) < 1e-15);
}

TEST_CASE("random perturbations of E1 stay admissible") {
  Rng rng(8);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Configuration c = example_e1();
    for (int k = 4; k < 6; ++k)
      for (auto& z : c.vectors[k]) z += rng.in_square(0.1);
    const ConfigReport rep = analyze_configuration(c);
    if (!(rep.type_triple && *rep.type_triple == TypeTriple{2, 6, 4})) continue;
    CHECK_NOTHROW(holonomy_pair(c));
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("validate_holonomy examples") {
  HolonomyPair ok;
  ok.alpha = {C(2), C(0.5), C(0.3)};
  ok.beta = {C(3), C(0, 0.4), C(0.2)};
  CHECK(validate_holonomy(ok).empty());

  HolonomyPair unit = ok;
  unit.alpha[0] = C(1);
  unit.beta[0] = std::exp(C(0, 0.7));
  CHECK(has_rule(validate_holonomy(unit), "unit-pair", 1));

  HolonomyPair eq = ok;
  eq.alpha = {C(2), C(2), C(0.3)};
  eq.beta = {C(3), C(3), C(0.2)};
  const auto v = validate_holonomy(eq);
  CHECK(has_rule(v, "equal-to-first", 2));
  CHECK_FALSE(has_rule(v, "equal-to-first", 3));

  HolonomyPair zero = ok;
  zero.beta[2] = C(0);
  CHECK(has_rule(validate_holonomy(zero), "nonzero", 3));

  // real exponents put both eigenvalues of the first generator on the unit circle
  const Configuration real4{2,
                            {{C(0), C(0)},
                             {C(1), C(0)},
                             {C(0), C(1)},
                             {C(0.3), C(0.2)},
                             {C(-1), C(-1)},
                             {C(-2), C(0.5, 0.5)}}};
  try {
    holonomy_pair(real4);
    FAIL("expected HolonomyError");
  } catch (const HolonomyError& e) {
    CHECK(has_rule(e.violations(), "unit-pair", 1));
  }
}

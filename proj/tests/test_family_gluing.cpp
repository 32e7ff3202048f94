#include <doctest.h>

#include "lvmkit/family_gluing.hpp"
#include "lvmkit/holonomy.hpp"
#include "lvmkit/samplers.hpp"

using namespace lvmkit;
using C = Complex;
using M3 = Eigen::Matrix3cd;

namespace {

// det(X diag(1, alpha^p) - M)
C char_poly(C x, C alpha, const Mat2& m, int p) {
  const C ap = std::pow(alpha, p);
  return (x - m(0, 0)) * (x * ap - m(1, 1)) - m(0, 1) * m(1, 0);
}

bool lex_ordered(C a, C b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag()); }

// The S_p action written out by hand from the matrix entries.
Point3 sp_act(const M3& A, int p, const Point3& x) {
  const C xp = std::pow(x[0], p);
  return {A(0, 0) * x[0], A(1, 1) * x[1] + A(1, 2) / xp * x[2], A(2, 1) * xp * x[1] + A(2, 2) * x[2]};
}

double coord_residual(const Point3& a, const Point3& b) {
  double d = 0.0;
  const double floor = 1e-12 * std::max({1e-300, max_abs(a), max_abs(b)});
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a[i] - b[i]) / std::max({floor, std::abs(a[i]), std::abs(b[i])}));
  return d;
}

double point_scale(const GluedPoint& g) {
  double s = std::max({1.0, std::abs(g.point.lambda), max_abs(g.xi)});
  s = std::max(s, g.point.A.cwiseAbs().maxCoeff());
  return std::max(s, g.point.B.cwiseAbs().maxCoeff());
}

// T-point relation delta = eps (b3 - b2) / (a3 - a2), rebuilt after editing eps
FamilyPoint retune_T(const FamilyPoint& t, C eps) {
  M3 A = t.A, B = t.B;
  A(2, 1) = eps;
  B(2, 1) = eps * (B(2, 2) - B(1, 1)) / (A(2, 2) - A(1, 1));
  return FamilyPoint::make_T(A, B, t.lambda);
}

const std::vector<std::pair<int, int>> kGens{{1, 0}, {0, 1}};

} // namespace

TEST_CASE("p-eigenvalues") {
  Mat2 m;
  m << C(1, 2), C(-0.5), C(0.3, 1), C(2, -1);
  const auto r0 = p_eigenvalues(C(3, 1), m, 0);
  const Eigen::ComplexEigenSolver<Mat2> es(m);
  for (const C& root : r0) {
    const double d = std::min(std::abs(root - es.eigenvalues()(0)), std::abs(root - es.eigenvalues()(1)));
    CHECK(d < 1e-12);
  }

  Mat2 sw;
  sw << C(0), C(1), C(1), C(0);
  const auto h = p_eigenvalues(C(2), sw, 1);
  CHECK(std::abs(h[0] + 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(h[1] - 1.0 / std::sqrt(2.0)) < 1e-15);

  Rng rng(70);
  for (int i = 0; i < 50; ++i) {
    const C alpha = rng.annulus(0.5, 2.0), a = rng.in_square(2.0), d = rng.in_square(2.0);
    const int p = rng.integer(-3, 3);
    Mat2 dm;
    dm << a, C(0), C(0), d;
    const auto r = p_eigenvalues(alpha, dm, p);
    const C want0 = a, want1 = d * std::pow(alpha, -p);
    const bool direct = std::abs(r[0] - want0) < 1e-12 && std::abs(r[1] - want1) < 1e-12;
    const bool swapped = std::abs(r[1] - want0) < 1e-12 && std::abs(r[0] - want1) < 1e-12;
    CHECK((direct || swapped));

    Mat2 g;
    g << rng.in_square(2.0), rng.in_square(2.0), rng.in_square(2.0), rng.in_square(2.0);
    const auto rg = p_eigenvalues(alpha, g, p);
    CHECK(lex_ordered(rg[0], rg[1]));
    const double sc = std::pow(std::max({1.0, std::abs(rg[0]), std::abs(rg[1])}), 2) *
                      std::max(1.0, std::abs(std::pow(alpha, p))) * std::max(1.0, g.cwiseAbs().maxCoeff());
    for (const C& root : rg) CHECK(std::abs(char_poly(root, alpha, g, p)) < 1e-12 * sc);
  }
  CHECK_THROWS_AS(p_eigenvalues(C(0), m, 1), InputError);
}

TEST_CASE("p-eigenvalues are invariant under triangularizing conjugation") {
  Rng rng(71);
  for (int p : {-1, 0, 1, 2}) {
    for (int i = 0; i < 25; ++i) {
      const GroupElement f = sample::generic_element(ResonanceClass::double_(p), rng);
      const Triangularization tr = triangularize(f);
      const auto before = p_eigenvalues(f.a1, f.m, p);
      const auto after = p_eigenvalues(tr.t.a1, tr.t.m, p);
      const double sc = std::max({1.0, std::abs(before[0]), std::abs(before[1])});
      const double d = std::min(std::max(std::abs(before[0] - after[0]), std::abs(before[1] - after[1])),
                                std::max(std::abs(before[0] - after[1]), std::abs(before[1] - after[0])));
      CHECK(d < 1e-10 * sc);
    }
  }
}

TEST_CASE("membership conditions") {
  const Configuration e1 = sample::base_configuration(ResonanceClass::non_resonant());
  const HolonomyPair h = compute_holonomy(e1);
  const M3 A = lower_shape(h.alpha[0], h.alpha[1], h.alpha[2], C(0));
  const M3 B = lower_shape(h.beta[0], h.beta[1], h.beta[2], C(0));
  ConditionOptions opt;
  opt.witness = e1;
  const MembershipReport rc = check_condition(FamilyPoint::make_T(A, B, C(0.5)), opt);
  CHECK(rc.condition == "C");
  CHECK(rc.satisfied);
  CHECK(rc.bound == 16);
  CHECK_FALSE(rc.singular);
  REQUIRE(rc.clauses.size() == 4);
  for (const auto& c : rc.clauses) CHECK_MESSAGE(c.holds, c.name << ": " << c.detail);
  // resonance clause agrees with the resonance search on the same eigen-data
  CHECK(find_resonances(h, 1e-9, 16).nontrivial().empty());

  // a perturbed diagonal no longer matches the witness
  const M3 A2 = lower_shape(h.alpha[0], h.alpha[1] * 1.01, h.alpha[2], C(0));
  CHECK_FALSE(check_condition(FamilyPoint::make_T(A2, B, C(0)), opt).satisfied);
  // relation clause breaks when delta is off
  M3 Be = B, Ae = A;
  Ae(2, 1) = C(1);
  Be(2, 1) = C(0.3);
  const MembershipReport rbad = check_condition(FamilyPoint::make_T(Ae, Be, C(0)), {});
  CHECK_FALSE(rbad.satisfied);
  CHECK_FALSE(rbad.clauses[1].holds);

  // single regime with the admitted resonance holding exactly: the extra clause of the singular set
  const int p = 1, q = 2;
  const C a1(1.1, 0.2), a2(1.5, 0.5), b1(0.7, -0.3), b2(0.9, 0.8);
  const M3 Ar = lower_shape(a1, a2, a1 * a2 * a2, C(0.4));
  const M3 Br = lower_shape(b1, b2, b1 * b2 * b2, C(-0.2, 0.1));
  const MembershipReport rs = check_condition(FamilyPoint::make_Tpq(p, q, Ar, Br, C(0)), {});
  CHECK(rs.condition == "K_pq");
  CHECK(rs.singular);
  CHECK(rs.clauses[1].holds);

  // |a2| <= |a3| fails the modulus clause
  const M3 Am = lower_shape(C(1.1), C(0.5), C(0.9, 0.3), C(0));
  const M3 Bm = lower_shape(C(0.8), C(1.3), C(0.6), C(0));
  const MembershipReport rm = check_condition(FamilyPoint::make_Tpq(p, q, Am, Bm, C(0)), {});
  CHECK_FALSE(rm.satisfied);
  CHECK(rm.clauses.front().name == "modulus");
  CHECK_FALSE(rm.clauses.front().holds);
  CHECK_FALSE(rm.singular);

  // window resonance: a3 = a1^2 a2^3 is flagged for (p, q) = (1, 2)
  const M3 Aw = lower_shape(a1, a2 * 0.5, a1 * a1 * std::pow(a2 * 0.5, 3), C(0));
  const MembershipReport rw = check_condition(FamilyPoint::make_Tpq(p, q, Aw, Bm, C(0)), {});
  CHECK_FALSE(rw.clauses.back().holds);

  // shape violations
  M3 bad = A;
  bad(0, 1) = C(1);
  CHECK_THROWS_AS(FamilyPoint::make_T(bad, B, C(0)), InputError);
  M3 sp = A;
  sp(1, 2) = C(1);
  CHECK_THROWS_AS(FamilyPoint::make_T(sp, B, C(0)), InputError);
  CHECK_NOTHROW(FamilyPoint::make_Sp(1, sp, B));
  CHECK_THROWS_AS(FamilyPoint::make_Tpq(1, 1, A, B, C(0)), InputError);
}

TEST_CASE("psi_p with vanishing parameters") {
  Rng rng(72);
  for (int p : {-1, 0, 1, 2}) {
    const M3 A = lower_shape(C(1.02), C(1.5, 0.3), C(0.4, -0.2), C(0));
    const M3 B = lower_shape(C(0.7, 0.4), C(1.3), C(-0.8, 0.9), C(0));
    const Point3 x = sample::point_in_V(rng);
    const GluedPoint g = glue_psi_p(FamilyPoint::make_T(A, B, C(0)), x, p);
    CHECK(g.point.space == FamilyPoint::Space::Sp);
    CHECK(g.point.p == p);
    CHECK((g.point.A - A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((g.point.B - B).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.xi == x);

    // eps != 0: delta becomes delta1 and xi3 is sheared, nothing else moves
    const C e(0.6, -0.4);
    const FamilyPoint t = retune_T(FamilyPoint::make_T(A, B, C(0)), e);
    const GluedPoint ge = glue_psi_p(t, x, p);
    const C a1p = std::pow(A(0, 0), p);
    const C delta1 = e * (B(2, 2) - std::pow(B(0, 0), p) * B(1, 1)) / (A(2, 2) - a1p * A(1, 1));
    CHECK((ge.point.A - t.A).cwiseAbs().maxCoeff() == 0.0);
    M3 wantB = B;
    wantB(2, 1) = delta1;
    CHECK((ge.point.B - wantB).cwiseAbs().maxCoeff() < 1e-15);
    const C shear = e / (A(2, 2) - A(1, 1)) - e / (A(2, 2) - a1p * A(1, 1)) * std::pow(x[0], p);
    CHECK(ge.xi[0] == x[0]);
    CHECK(ge.xi[1] == x[1]);
    CHECK(std::abs(ge.xi[2] - (x[2] + shear * x[1])) < 1e-14 * max_abs(x));
  }
}

TEST_CASE("psi_p is equivariant and lands in S_p") {
  Rng rng(73);
  for (int p : {-2, -1, 0, 1, 2}) {
    for (int i = 0; i < 10; ++i) {
      const FamilyPoint t = sample::T_point(rng);
      for (int k = 0; k < 50; ++k) {
        const Point3 x = sample::point_in_V(rng);
        const GluedPoint g = glue_psi_p(t, x, p);
        for (auto [r, s] : kGens) {
          const Point3 lhs = glue_psi_p(t, family_act(t, r, s, x), p).xi;
          const Point3 rhs = family_act(g.point, r, s, g.xi);
          CHECK(coord_residual(lhs, rhs) <= 1e-10);
        }
        // the generators commute under the hand-written S_p action
        const Point3 ab = sp_act(g.point.A, p, sp_act(g.point.B, p, x));
        const Point3 ba = sp_act(g.point.B, p, sp_act(g.point.A, p, x));
        CHECK(coord_residual(ab, ba) <= 1e-10);
      }
      const GluedPoint g = glue_psi_p(t, {C(1), C(1), C(0)}, p);
      const M3 &A = g.point.A, &B = g.point.B;
      const double sc = std::pow(std::max(A.cwiseAbs().maxCoeff(), B.cwiseAbs().maxCoeff()), 3);
      CHECK(std::abs(A(2, 1) * B(1, 2) * std::pow(B(0, 0), p) - B(2, 1) * A(1, 2) * std::pow(A(0, 0), p)) <=
            1e-10 * sc);
      const MembershipReport rep = check_condition(g.point, {});
      CHECK(rep.condition == "C_p");
      CHECK(rep.clauses[1].name == "equations");
      CHECK(rep.clauses[1].holds);
    }
  }
}

TEST_CASE("inverse of psi_p") {
  Rng rng(74);
  for (int p : {-1, 0, 1, 2}) {
    for (int i = 0; i < 20; ++i) {
      const FamilyPoint t = sample::T_point(rng);
      const Point3 x = sample::point_in_V(rng);
      const GluedPoint fwd = glue_psi_p(t, x, p);
      const GluedPoint back = invert_psi_p(fwd.point, fwd.xi);
      const GluedPoint orig{t, x};
      CHECK(glued_distance(back, orig) <= 1e-10 * point_scale(orig));
      const GluedPoint again = glue_psi_p(back.point, back.xi, p);
      CHECK(glued_distance(again, fwd) <= 1e-10 * point_scale(fwd));

      // lambda = 0 is recovered
      FamilyPoint t0 = t;
      t0.lambda = C(0);
      const GluedPoint f0 = glue_psi_p(t0, x, p);
      CHECK(std::abs(invert_psi_p(f0.point, f0.xi).point.lambda) <= 1e-10);
    }
  }
  // p-eigenvalue ordering |a2'| > |a3'| fails for both assignments
  const int p = 1;
  const C a1(2), a2(0.5), a3(1), e(0.3), b1(1.5), b2(0.8), b3(0.6, 0.2);
  const C delta = e * (b3 - b1 * b2) / (a3 - a1 * a2);
  const FamilyPoint s = FamilyPoint::make_Sp(p, lower_shape(a1, a2, a3, e), lower_shape(b1, b2, b3, delta));
  CHECK_THROWS_AS(invert_psi_p(s, {C(1), C(1), C(1)}), NotInImage);
  // not on the variety
  const FamilyPoint s2 = FamilyPoint::make_Sp(p, lower_shape(a1, a2, a3, e), lower_shape(b1, b2, b3, delta + 0.1));
  CHECK_THROWS_AS(invert_psi_p(s2, {C(1), C(1), C(1)}), NotInImage);
  CHECK_THROWS_AS(invert_psi_p(sample::T_point(rng), {C(1), C(1), C(1)}), InputError);
}

TEST_CASE("psi_p separates distinct inputs") {
  Rng rng(75);
  for (int i = 0; i < 30; ++i) {
    const int p = i % 3 - 1;
    const FamilyPoint t = sample::T_point(rng);
    const Point3 x = sample::point_in_V(rng);
    const GluedPoint base = glue_psi_p(t, x, p);
    std::vector<GluedPoint> moved;
    FamilyPoint tl = t;
    tl.lambda += C(1e-4);
    moved.push_back(glue_psi_p(tl, x, p));
    moved.push_back(glue_psi_p(retune_T(t, t.A(2, 1) + C(0, 1e-4)), x, p));
    for (int c = 0; c < 3; ++c) {
      Point3 y = x;
      y[c] += C(1e-4);
      moved.push_back(glue_psi_p(t, y, p));
    }
    for (const auto& m : moved) CHECK(glued_distance(m, base) >= 1e-8);
  }
}

TEST_CASE("phi_pq") {
  Rng rng(76);
  for (auto [p, q] : std::vector<std::pair<int, int>>{{0, 2}, {1, 2}, {-1, 3}, {2, 2}}) {
    // eps = 0: the point map is the identity and delta' = 0
    const FamilyPoint z = FamilyPoint::make_Tpq(p, q, lower_shape(C(1.1), C(0.6), C(1.7, 0.2), C(0)),
                                                lower_shape(C(0.9), C(1.2), C(0.5), C(0)), C(0.25));
    const Point3 x0 = sample::point_in_V(rng);
    const GluedPoint g0 = glue_phi_pq(z, x0);
    CHECK(g0.xi == x0);
    CHECK(g0.point.space == FamilyPoint::Space::T);
    CHECK(g0.point.B(2, 1) == C(0));
    CHECK(g0.point.lambda == C(0.25));

    for (int i = 0; i < 10; ++i) {
      const FamilyPoint u = sample::Tpq_point(p, q, rng);
      for (int k = 0; k < 50; ++k) {
        const Point3 x = sample::point_in_V(rng);
        const GluedPoint g = glue_phi_pq(u, x);
        for (auto [r, s] : kGens) {
          const Point3 lhs = glue_phi_pq(u, family_act(u, r, s, x)).xi;
          const Point3 rhs = family_act(g.point, r, s, g.xi);
          CHECK(coord_residual(lhs, rhs) <= 1e-10);
        }
        const GluedPoint back = invert_phi_pq(g.point, g.xi, p, q);
        const GluedPoint orig{u, x};
        CHECK(glued_distance(back, orig) <= 1e-10 * point_scale(orig));
        CHECK(back.point.space == FamilyPoint::Space::Tpq);
      }
      // the image satisfies the relation of T
      const GluedPoint g = glue_phi_pq(u, {C(1), C(1), C(1)});
      CHECK(check_condition(g.point, {}).clauses[1].holds);
    }
  }
}

TEST_CASE("ill-conditioned denominators") {
  const Point3 x{C(1), C(1), C(1)};
  // a3 = a2
  const FamilyPoint t1 = FamilyPoint::make_T(lower_shape(C(1), C(0.5), C(0.5), C(0)),
                                             lower_shape(C(1), C(2), C(3), C(0)), C(0));
  CHECK_THROWS_AS(glue_psi_p(t1, x, 1), IllConditioned);
  // a3 = a1^p a2
  const FamilyPoint t2 = FamilyPoint::make_T(lower_shape(C(2), C(0.5), C(1), C(0)),
                                             lower_shape(C(1), C(2), C(3), C(0)), C(0));
  CHECK_THROWS_AS(glue_psi_p(t2, x, 1), IllConditioned);
  CHECK_NOTHROW(glue_psi_p(t2, x, 0));
  // a3 = a1^p a2^q
  const FamilyPoint u = FamilyPoint::make_Tpq(1, 2, lower_shape(C(2), C(0.5), C(0.5), C(0)),
                                              lower_shape(C(1), C(2), C(3), C(0)), C(0));
  CHECK_THROWS_AS(glue_phi_pq(u, x), IllConditioned);
  CHECK_THROWS_AS(invert_phi_pq(t2, x, 2, 2, 1e-12), IllConditioned);
  CHECK_THROWS_AS(glue_psi_p(u, x, 1), InputError);
  CHECK_THROWS_AS(glue_phi_pq(t1, x), InputError);
}

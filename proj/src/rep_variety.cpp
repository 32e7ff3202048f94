#include "lvmkit/rep_variety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lvmkit/holonomy.hpp"

namespace lvmkit {

using Kind = ResonanceClass::Kind;

// ---- variety equations ----

VarietyResidual variety_residual(const GroupElement& f, const GroupElement& g) {
  if (!(f.regime == g.regime)) throw InputError("variety_residual: regime mismatch");
  VarietyResidual out;
  const int p = f.regime.p, q = f.regime.q;
  if (f.regime.kind == Kind::Single) {
    const Complex r = f.eps * (g.a3 - ipow(g.a1, p) * ipow(g.a2, q)) - g.eps * (f.a3 - ipow(f.a1, p) * ipow(f.a2, q));
    out.equations.push_back({"commutation", r});
  } else if (f.regime.kind == Kind::Double) {
    const Complex a1 = f.a1, a2 = f.m(0, 0), e2 = f.m(0, 1), e1 = f.m(1, 0), a3 = f.m(1, 1);
    const Complex b1 = g.a1, b2 = g.m(0, 0), d2 = g.m(0, 1), d1 = g.m(1, 0), b3 = g.m(1, 1);
    const Complex ap = ipow(a1, p), bp = ipow(b1, p), am = ipow(a1, -p), bm = ipow(b1, -p);
    out.equations.push_back({"twisted-offdiag", e1 * d2 * bp - d1 * e2 * ap});
    out.equations.push_back({"lower-left", e1 * (b3 - bp * b2) - d1 * (a3 - ap * a2)});
    out.equations.push_back({"upper-right", e2 * (b2 - bm * b3) - d2 * (a2 - am * a3)});
  }
  for (const auto& e : out.equations) out.max_abs = std::max(out.max_abs, std::abs(e.value));
  return out;
}

CMat variety_jacobian(const GroupElement& f, const GroupElement& g) {
  if (!(f.regime == g.regime)) throw InputError("variety_jacobian: regime mismatch");
  const int p = f.regime.p, q = f.regime.q;
  const double dp = p, dq = q;
  switch (f.regime.kind) {
  case Kind::NonResonant:
    return CMat(0, 6);
  case Kind::Single: {
    // variables (a1,a2,a3,eps, b1,b2,b3,delta)
    CMat J = CMat::Zero(1, 8);
    const Complex a1 = f.a1, a2 = f.a2, a3 = f.a3, e = f.eps;
    const Complex b1 = g.a1, b2 = g.a2, b3 = g.a3, d = g.eps;
    J(0, 0) = d * dp * ipow(a1, p - 1) * ipow(a2, q);
    J(0, 1) = d * dq * ipow(a1, p) * ipow(a2, q - 1);
    J(0, 2) = -d;
    J(0, 3) = b3 - ipow(b1, p) * ipow(b2, q);
    J(0, 4) = -e * dp * ipow(b1, p - 1) * ipow(b2, q);
    J(0, 5) = -e * dq * ipow(b1, p) * ipow(b2, q - 1);
    J(0, 6) = e;
    J(0, 7) = -(a3 - ipow(a1, p) * ipow(a2, q));
    return J;
  }
  case Kind::Double: {
    // variables (a1, a2, e2, e1, a3, b1, b2, d2, d1, b3) following params()
    CMat J = CMat::Zero(3, 10);
    const Complex a1 = f.a1, a2 = f.m(0, 0), e2 = f.m(0, 1), e1 = f.m(1, 0), a3 = f.m(1, 1);
    const Complex b1 = g.a1, b2 = g.m(0, 0), d2 = g.m(0, 1), d1 = g.m(1, 0), b3 = g.m(1, 1);
    const Complex ap = ipow(a1, p), bp = ipow(b1, p), am = ipow(a1, -p), bm = ipow(b1, -p);
    const Complex ap1 = ipow(a1, p - 1), bp1 = ipow(b1, p - 1), am1 = ipow(a1, -p - 1), bm1 = ipow(b1, -p - 1);
    enum { A1, A2, E2, E1, A3, B1, B2, D2, D1, B3 };
    // e1 d2 b1^p - d1 e2 a1^p
    J(0, A1) = -d1 * e2 * dp * ap1;
    J(0, E2) = -d1 * ap;
    J(0, E1) = d2 * bp;
    J(0, B1) = e1 * d2 * dp * bp1;
    J(0, D2) = e1 * bp;
    J(0, D1) = -e2 * ap;
    // e1 (b3 - b1^p b2) - d1 (a3 - a1^p a2)
    J(1, E1) = b3 - bp * b2;
    J(1, B3) = e1;
    J(1, B1) = -e1 * dp * bp1 * b2;
    J(1, B2) = -e1 * bp;
    J(1, D1) = -(a3 - ap * a2);
    J(1, A3) = -d1;
    J(1, A1) = d1 * dp * ap1 * a2;
    J(1, A2) = d1 * ap;
    // e2 (b2 - b1^-p b3) - d2 (a2 - a1^-p a3)
    J(2, E2) = b2 - bm * b3;
    J(2, B2) = e2;
    J(2, B1) = e2 * dp * bm1 * b3;
    J(2, B3) = -e2 * bm;
    J(2, D2) = -(a2 - am * a3);
    J(2, A2) = -d2;
    J(2, A1) = -d2 * dp * am1 * a3;
    J(2, A3) = d2 * am;
    return J;
  }
  }
  return {};
}

TangentReport tangent_dimension(const GroupElement& f, const GroupElement& g) {
  const CMat J = variety_jacobian(f, g);
  const int nvars = static_cast<int>(J.cols());
  TangentReport out;
  const double scale = std::max(param_scale(f), param_scale(g));
  const double eps = std::numeric_limits<double>::epsilon();
  if (J.rows() == 0) {
    out.dimension = nvars;
    out.gap = 1.0 / eps;
    return out;
  }
  Eigen::JacobiSVD<CMat> svd(J);
  const Eigen::VectorXd s = svd.singularValues();
  for (int i = 0; i < s.size(); ++i) out.singular_values.push_back(s(i));
  const double thr = 1e-8 * std::max(s.size() ? s(0) : 0.0, scale);
  int rank = 0;
  while (rank < s.size() && s(rank) > thr) ++rank;
  out.dimension = nvars - rank;
  const double above = rank > 0 ? s(rank - 1) : scale;
  const double below = rank < s.size() ? s(rank) : 0.0;
  out.gap = above / std::max(below, scale * eps);
  if (out.gap < 10.0) out.warning = "RankAmbiguous";
  return out;
}

// ---- structure specs ----

void StructureSpec::validate(double tol) const {
  for (const auto& g : rho)
    if (!(g.regime == regime)) throw InputError("structure spec: generator regime differs from the declared regime");
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double s = std::max(param_scale(rho[i]), param_scale(rho[j]));
      if (commutation_residual(rho[i], rho[j]) > tol * s * s)
        throw PreconditionError("structure spec: generators " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " do not commute");
    }
}

std::array<Complex, 3> StructureSpec::branch_data() const {
  const GroupElement& c = rho[2];
  return {log_over_2pii(c.a1), log_over_2pii(c.a2), log_over_2pii(c.a3)};
}

namespace {

using Row = std::array<Complex, 3>;

// Unknowns x = (u1,u2,u3,v1,v2,v3); equivariance of the diagonal developing map.
CVec nonres_F(const CVec& x, const Row& a, const Row& b, const Row& c) {
  CVec F(6);
  for (int k = 0; k < 2; ++k) {
    const Row& t = k == 0 ? a : b;
    const Complex x1 = x(3 * k);
    F(3 * k) = std::exp(kTwoPiI * x1 * (1.0 + c[0])) / t[0] - 1.0;
    for (int j = 1; j < 3; ++j) F(3 * k + j) = std::exp(kTwoPiI * (x(3 * k + j) + x1 * c[j])) / t[j] - 1.0;
  }
  return F;
}

CMat nonres_J(const CVec& x, const Row& a, const Row& b, const Row& c) {
  CMat J = CMat::Zero(6, 6);
  for (int k = 0; k < 2; ++k) {
    const Row& t = k == 0 ? a : b;
    const Complex x1 = x(3 * k);
    J(3 * k, 3 * k) = kTwoPiI * (1.0 + c[0]) * std::exp(kTwoPiI * x1 * (1.0 + c[0])) / t[0];
    for (int j = 1; j < 3; ++j) {
      const Complex e = std::exp(kTwoPiI * (x(3 * k + j) + x1 * c[j])) / t[j];
      J(3 * k + j, 3 * k + j) = kTwoPiI * e;
      J(3 * k + j, 3 * k) = kTwoPiI * c[j] * e;
    }
  }
  return J;
}

void require_ball(const GroupElement& g) {
  if (!(distance_from_identity(g) < 1.0))
    throw BranchDomain("third generator outside the principal-logarithm ball");
}

// measured multiplicatively, so holonomy with large moduli is not penalised
double anchor_distance(const std::array<GroupElement, 2>& out, const StructureSpec& spec) {
  return std::max(distance_from_identity(compose(inverse(spec.rho[0]), out[0])),
                  distance_from_identity(compose(inverse(spec.rho[1]), out[1])));
}

} // namespace

PsiResult psi_nonresonant(const StructureSpec& spec) {
  if (spec.regime.kind != Kind::NonResonant) throw InputError("psi_nonresonant: NonResonant regime only");
  if (!spec.base) throw PreconditionError("psi_nonresonant: a base configuration is required to anchor branches");
  spec.validate();
  require_ball(spec.rho[2]);
  const Configuration& base = *spec.base;
  const auto E = holonomy_exponents(base);
  const GroupElement &A = spec.rho[0], &B = spec.rho[1];
  const Row a{A.a1, A.a2, A.a3}, b{B.a1, B.a2, B.a3};
  const Row c = spec.branch_data();

  // logs of the targets anchored at the base pairings
  CVec x0(6), ell(6);
  for (int j = 0; j < 3; ++j) {
    x0(j) = E[j][0];
    x0(3 + j) = E[j][1];
    ell(j) = E[j][0] + log_over_2pii(a[j] / std::exp(kTwoPiI * E[j][0]));
    ell(3 + j) = E[j][1] + log_over_2pii(b[j] / std::exp(kTwoPiI * E[j][1]));
  }
  CVec x(6);
  for (int k = 0; k < 2; ++k) {
    x(3 * k) = ell(3 * k) / (1.0 + c[0]);
    for (int j = 1; j < 3; ++j) x(3 * k + j) = ell(3 * k + j) - x(3 * k) * c[j];
  }

  PsiResult out;
  out.dev_case = "diagonal";
  const bool trivial = spec.rho[2].is_identity();
  if (!trivial) {
    const NewtonResult nr = newton_solve([&](const CVec& y) { return nonres_F(y, a, b, c); },
                                         [&](const CVec& y) { return nonres_J(y, a, b, c); }, x);
    x = nr.x;
    out.newton_iterations = nr.iterations;
  }
  if ((x - x0).lpNorm<Eigen::Infinity>() > 1.0)
    throw PreconditionError("psi_nonresonant: solution leaves the neighbourhood of the base configuration");

  if (trivial) {
    out.pair = {A, B};
  } else {
    out.pair = {GroupElement::diagonal(std::exp(kTwoPiI * x(0)), std::exp(kTwoPiI * x(1)), std::exp(kTwoPiI * x(2))),
                GroupElement::diagonal(std::exp(kTwoPiI * x(3)), std::exp(kTwoPiI * x(4)), std::exp(kTwoPiI * x(5)))};
  }
  out.shifts = {x(0), x(3)};

  // Lambda_{j+3} moves by du (Lambda_2 - Lambda_1) + dv (Lambda_3 - Lambda_1).
  std::array<std::vector<Complex>, 3> tail;
  for (int j = 0; j < 3; ++j) {
    const Complex du = x(j) - x0(j), dv = x(3 + j) - x0(3 + j);
    tail[j] = base.vectors[3 + j];
    for (int i = 0; i < base.m; ++i)
      tail[j][i] += du * (base.vectors[1][i] - base.vectors[0][i]) + dv * (base.vectors[2][i] - base.vectors[0][i]);
  }
  out.tail = tail;
  Configuration moved = base;
  for (int j = 0; j < 3; ++j) moved.vectors[3 + j] = tail[j];
  try {
    const TypeTriple t = classify_type(moved);
    if (!(t == TypeTriple{2, 6, 4})) out.warnings.push_back("deformed configuration has a different type");
  } catch (const NotLVM& e) {
    out.warnings.push_back(std::string("deformed configuration: ") + e.what());
  }
  return out;
}

Complex solve_twisted_root(Complex gamma, Complex target) {
  const Complex lg = std::log(gamma) / kTwoPiI;
  auto F = [&](const CVec& v) {
    CVec r(1);
    r(0) = v(0) * std::exp(lg * std::log(v(0))) - target;
    return r;
  };
  auto J = [&](const CVec& v) {
    CMat m(1, 1);
    m(0, 0) = std::exp(lg * std::log(v(0))) * (1.0 + lg);
    return m;
  };
  CVec x0(1);
  x0(0) = target;
  return newton_solve(F, J, x0).x(0);
}

PsiResult psi_resonant(const StructureSpec& spec, const PsiOptions& opt) {
  const ResonanceClass& rc = spec.regime;
  if (rc.kind == Kind::NonResonant) throw InputError("psi_resonant: resonant regime required");
  spec.validate();
  const GroupElement &A = spec.rho[0], &B = spec.rho[1], &G = spec.rho[2];
  require_ball(G);
  PsiResult out;
  const int p = rc.p, q = rc.q;

  if (G.is_identity()) {
    out.pair = {A, B};
    out.shifts = {log_over_2pii(A.a1), log_over_2pii(B.a1)};
    out.dev_case = rc.kind == Kind::Double ? "double" : "degenerate";
    return out;
  }

  const Complex delta = solve_twisted_root(G.a1, A.a1);
  const Complex eta = solve_twisted_root(G.a1, B.a1);
  const Complex ld = log_over_2pii(delta), le = log_over_2pii(eta);
  out.shifts = {ld, le};

  if (rc.kind == Kind::Double) {
    out.dev_case = "double";
    const LieElement X = group_log(G);
    auto lift = [&](const GroupElement& F, Complex x, Complex l) {
      const Mat2 N = group_exp(X * l).m;
      return GroupElement::double_(p, x, tau(x, p, N.inverse()) * F.m);
    };
    out.pair = {lift(A, delta, ld), lift(B, eta, le)};
  } else {
    const Complex gq = ipow(G.a1, p) * ipow(G.a2, q);
    const Complex gap = gq - G.a3;
    const double ref = std::max({1.0, std::abs(G.a3), std::abs(gq)});
    const bool degenerate = std::abs(gap) < opt.tol_case * ref;
    if (degenerate && gap != Complex(0))
      out.warnings.push_back("third generator is within tol_case of the resonant case; degenerate formula used");
    const Complex lc1 = std::log(G.a2), lc4 = std::log(G.a3);
    auto lift = [&](const GroupElement& F, Complex x, Complex l) {
      const Complex d1 = F.a2 * std::exp(-l * lc1);
      const Complex d4 = F.a3 * std::exp(-l * lc4);
      Complex d3 = 0.0;
      if (degenerate) d3 = F.eps * d4 / F.a3 - (G.eps / G.a3) * l * ipow(x, p) * ipow(d1, q);
      return GroupElement::single(p, q, x, d1, d4, d3);
    };
    out.dev_case = degenerate ? "degenerate" : "generic";
    out.pair = {lift(A, delta, ld), lift(B, eta, le)};
  }
  if (anchor_distance(out.pair, spec) > 1.0)
    throw PreconditionError("psi_resonant: solution leaves the neighbourhood of the input pair");
  return out;
}

PsiResult psi(const StructureSpec& spec) {
  return spec.regime.kind == Kind::NonResonant ? psi_nonresonant(spec) : psi_resonant(spec);
}

RankReport psi_jacobian_rank(const StructureSpec& spec, double h) {
  if (spec.regime.kind != Kind::NonResonant) throw InputError("psi_jacobian_rank: NonResonant regime only");
  auto eval = [&](const StructureSpec& s) {
    const PsiResult r = psi_nonresonant(s);
    CVec v(6);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 2; ++i) v(2 * j + i) = (*r.tail)[j][i];
    return v;
  };
  CMat J(6, 9);
  for (int g = 0; g < 3; ++g)
    for (int k = 0; k < 3; ++k) {
      StructureSpec sp = spec, sm = spec;
      Complex* cp = k == 0 ? &sp.rho[g].a1 : k == 1 ? &sp.rho[g].a2 : &sp.rho[g].a3;
      Complex* cm = k == 0 ? &sm.rho[g].a1 : k == 1 ? &sm.rho[g].a2 : &sm.rho[g].a3;
      // multiplicative steps: E1 has eigenvalues of size 1e-7, below any useful absolute step
      *cp *= 1.0 + h;
      *cm *= 1.0 - h;
      J.col(3 * g + k) = (eval(sp) - eval(sm)) / (2.0 * h);
    }
  Eigen::JacobiSVD<CMat> svd(J);
  RankReport out;
  const Eigen::VectorXd s = svd.singularValues();
  for (int i = 0; i < s.size(); ++i) out.singular_values.push_back(s(i));
  const double thr = 1e-6 * (s.size() ? s(0) : 0.0);
  while (out.rank < s.size() && s(out.rank) > thr) ++out.rank;
  return out;
}

} // namespace lvmkit

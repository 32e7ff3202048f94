#include "lvmkit/resonant_group.hpp"

#include <algorithm>
#include <cmath>

namespace lvmkit {

using Kind = ResonanceClass::Kind;

namespace {

void require_same(const GroupElement& f, const GroupElement& g, const char* where) {
  if (!(f.regime == g.regime)) throw InputError(std::string(where) + ": regime mismatch");
}

// (e^d - 1) for complex d, accurate near 0.
Complex cexpm1(Complex d) {
  const double a = d.real(), b = d.imag();
  const double s = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

// (e^x - e^y)/(x - y), continuous across x = y.
Complex divided_exp(Complex x, Complex y) {
  const Complex d = x - y;
  if (std::abs(d) < 1e-8) return std::exp(y) * (1.0 + 0.5 * d + d * d / 6.0);
  return std::exp(y) * cexpm1(d) / d;
}

double opnorm2(const Mat2& A) {
  Eigen::JacobiSVD<Mat2> svd(A);
  return svd.singularValues()(0);
}

bool on_cut(Complex z) { return z.imag() == 0.0 && z.real() <= 0.0; }

} // namespace

// ---- construction ----

GroupElement GroupElement::identity(const ResonanceClass& regime) {
  GroupElement g;
  g.regime = regime;
  return g;
}

GroupElement GroupElement::diagonal(Complex a1, Complex a2, Complex a3) {
  GroupElement g;
  g.a1 = a1;
  g.a2 = a2;
  g.a3 = a3;
  return g;
}

GroupElement GroupElement::single(int p, int q, Complex a1, Complex a2, Complex a3, Complex eps) {
  GroupElement g = diagonal(a1, a2, a3);
  g.regime = ResonanceClass::single(p, q);
  g.eps = eps;
  return g;
}

GroupElement GroupElement::double_(int p, Complex a1, const Mat2& m) {
  GroupElement g;
  g.regime = ResonanceClass::double_(p);
  g.a1 = a1;
  g.m = m;
  return g;
}

std::vector<Complex> GroupElement::params() const {
  switch (regime.kind) {
  case Kind::NonResonant:
    return {a1, a2, a3};
  case Kind::Single:
    return {a1, a2, a3, eps};
  case Kind::Double:
    return {a1, m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
  }
  return {};
}

GroupElement GroupElement::from_params(const ResonanceClass& regime, const std::vector<Complex>& v) {
  const std::size_t want = regime.kind == Kind::NonResonant ? 3 : regime.kind == Kind::Single ? 4 : 5;
  if (v.size() != want) throw InputError("group element: expected " + std::to_string(want) + " coefficients");
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InputError("group element: non-finite coefficient");
  GroupElement g = identity(regime);
  if (regime.kind == Kind::Double) {
    g.a1 = v[0];
    g.m << v[1], v[2], v[3], v[4];
    if (g.m.determinant() == Complex(0)) throw InputError("group element: singular matrix block");
  } else {
    g.a1 = v[0];
    g.a2 = v[1];
    g.a3 = v[2];
    if (regime.kind == Kind::Single) g.eps = v[3];
    if (g.a2 == Complex(0) || g.a3 == Complex(0)) throw InputError("group element: zero diagonal coefficient");
  }
  if (g.a1 == Complex(0)) throw InputError("group element: zero diagonal coefficient");
  return g;
}

Eigen::Matrix3cd GroupElement::matrix3() const {
  Eigen::Matrix3cd A = Eigen::Matrix3cd::Zero();
  A(0, 0) = a1;
  if (regime.kind == Kind::Double) {
    A.block<2, 2>(1, 1) = m;
  } else {
    A(1, 1) = a2;
    A(2, 2) = a3;
    if (regime.kind == Kind::Single) A(2, 1) = eps;
  }
  return A;
}

GroupElement GroupElement::from_matrix3(const ResonanceClass& regime, const Eigen::Matrix3cd& A) {
  if (regime.kind == Kind::Double) {
    Mat2 m = A.block<2, 2>(1, 1);
    return double_(regime.p, A(0, 0), m);
  }
  if (regime.kind == Kind::Single) return single(regime.p, regime.q, A(0, 0), A(1, 1), A(2, 2), A(2, 1));
  return diagonal(A(0, 0), A(1, 1), A(2, 2));
}

bool GroupElement::is_identity() const { return params() == identity(regime).params(); }

double param_distance(const GroupElement& f, const GroupElement& g) {
  require_same(f, g, "param_distance");
  const auto a = f.params(), b = g.params();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double param_scale(const GroupElement& f) {
  double s = 1.0;
  for (const auto& z : f.params()) s = std::max(s, std::abs(z));
  return s;
}

// ---- action and group law ----

void require_in_V(const Point3& x) {
  if (x[0] == Complex(0)) throw InputError("point not in V: xi1 = 0");
  if (x[1] == Complex(0) && x[2] == Complex(0)) throw InputError("point not in V: (xi2, xi3) = 0");
  for (const auto& z : x)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InputError("point not in V: non-finite");
}

Point3 apply(const GroupElement& f, const Point3& x) {
  require_in_V(x);
  switch (f.regime.kind) {
  case Kind::NonResonant:
    return {f.a1 * x[0], f.a2 * x[1], f.a3 * x[2]};
  case Kind::Single:
    return {f.a1 * x[0], f.a2 * x[1],
            f.a3 * x[2] + f.eps * ipow(x[0], f.regime.p) * ipow(x[1], f.regime.q)};
  case Kind::Double: {
    const Mat2 T = tau(x[0], f.regime.p, f.m);
    const Vec2 z = T * Vec2(x[1], x[2]);
    return {f.a1 * x[0], z(0), z(1)};
  }
  }
  return x;
}

GroupElement compose(const GroupElement& f, const GroupElement& g) {
  require_same(f, g, "compose");
  GroupElement r = f;
  switch (f.regime.kind) {
  case Kind::NonResonant:
    r.a1 = f.a1 * g.a1;
    r.a2 = f.a2 * g.a2;
    r.a3 = f.a3 * g.a3;
    break;
  case Kind::Single:
    r.a1 = f.a1 * g.a1;
    r.a2 = f.a2 * g.a2;
    r.a3 = f.a3 * g.a3;
    r.eps = f.a3 * g.eps + f.eps * ipow(g.a1, f.regime.p) * ipow(g.a2, f.regime.q);
    break;
  case Kind::Double:
    r.a1 = f.a1 * g.a1;
    r.m = tau(g.a1, f.regime.p, f.m) * g.m;
    break;
  }
  return r;
}

GroupElement inverse(const GroupElement& f) {
  GroupElement r = f;
  switch (f.regime.kind) {
  case Kind::NonResonant:
    r.a1 = 1.0 / f.a1;
    r.a2 = 1.0 / f.a2;
    r.a3 = 1.0 / f.a3;
    break;
  case Kind::Single:
    r.a1 = 1.0 / f.a1;
    r.a2 = 1.0 / f.a2;
    r.a3 = 1.0 / f.a3;
    r.eps = -f.eps / (f.a3 * ipow(f.a1, f.regime.p) * ipow(f.a2, f.regime.q));
    break;
  case Kind::Double:
    r.a1 = 1.0 / f.a1;
    r.m = tau(r.a1, f.regime.p, f.m.inverse());
    break;
  }
  return r;
}

GroupElement power(const GroupElement& f, long long n) {
  GroupElement base = n < 0 ? inverse(f) : f;
  unsigned long long k = n < 0 ? static_cast<unsigned long long>(-(n + 1)) + 1ULL : static_cast<unsigned long long>(n);
  GroupElement acc = GroupElement::identity(f.regime);
  while (k) {
    if (k & 1ULL) acc = compose(acc, base);
    k >>= 1;
    if (k) base = compose(base, base);
  }
  return acc;
}

GroupElement conjugate(const GroupElement& f, const GroupElement& h) { return compose(inverse(h), compose(f, h)); }

double commutation_residual(const GroupElement& f, const GroupElement& g) {
  return param_distance(compose(f, g), compose(g, f));
}

Complex resonance_gap(const GroupElement& f) {
  if (f.regime.kind != Kind::Single) throw InputError("resonance_gap: Single regime only");
  return f.a3 - ipow(f.a1, f.regime.p) * ipow(f.a2, f.regime.q);
}

// ---- normal forms ----

namespace {

std::array<Complex, 2> p_roots(Complex alpha, const Mat2& M, int p) {
  // det(X L - M) = alpha^p X^2 - (M11 alpha^p + M22) X + det M
  const Complex ap = ipow(alpha, p);
  auto r = quadratic_roots(ap, -(M(0, 0) * ap + M(1, 1)), M.determinant());
  if (lex_less(r[1], r[0])) std::swap(r[0], r[1]);
  return r;
}

// (1, P) whose second column spans the given p-eigenvector.
GroupElement conjugator_from(int p, Vec2 y) {
  Mat2 P;
  if (std::abs(y(1)) >= std::abs(y(0))) {
    y /= y(1);
    P << 1.0, y(0), 0.0, 1.0;
  } else {
    y /= y(0);
    P << 0.0, 1.0, 1.0, y(1);
  }
  return GroupElement::double_(p, 1.0, P);
}

Vec2 p_eigenvector(const GroupElement& f, Complex lambda) {
  return kernel_vector(f.m - lambda * twist_diag(f.a1, f.regime.p));
}

} // namespace

Triangularization triangularize(const GroupElement& f) {
  if (f.regime.kind != Kind::Double) throw InputError("triangularize: Double regime only");
  if (f.m(0, 1) == Complex(0)) return {GroupElement::identity(f.regime), f};
  const auto r = p_roots(f.a1, f.m, f.regime.p);
  const GroupElement h = conjugator_from(f.regime.p, p_eigenvector(f, r[1]));
  return {h, conjugate(f, h)};
}

PairNormalForm simultaneous_triangularize(const GroupElement& f, const GroupElement& g, double tol) {
  if (f.regime.kind != Kind::Double) throw InputError("simultaneous_triangularize: Double regime only");
  require_same(f, g, "simultaneous_triangularize");
  const double scale = std::max(param_scale(f), param_scale(g));
  if (commutation_residual(f, g) > tol * scale * scale)
    throw PreconditionError("simultaneous_triangularize: elements do not commute");
  if (f.m(0, 1) == Complex(0) && g.m(0, 1) == Complex(0))
    return {GroupElement::identity(f.regime), f, g};

  // A common p-eigenvector: the eigenvector of whichever element has the better separated
  // p-spectrum is well conditioned and, by commutation, shared by the other.
  const int p = f.regime.p;
  auto separation = [&](const GroupElement& e, Complex& lam) {
    const auto r = p_roots(e.a1, e.m, p);
    lam = r[1];
    return std::abs(r[0] - r[1]) / std::max(1e-300, std::abs(r[0]) + std::abs(r[1]));
  };
  Complex lf, lg;
  const double sf = separation(f, lf), sg = separation(g, lg);
  Vec2 y;
  if (std::max(sf, sg) > 1e-8) {
    y = sf >= sg ? p_eigenvector(f, lf) : p_eigenvector(g, lg);
  } else {
    // Both have a double p-eigenvalue: use a non-scalar one (its kernel is the line).
    const Mat2 Kf = f.m - lf * twist_diag(f.a1, p), Kg = g.m - lg * twist_diag(g.a1, p);
    y = Kf.norm() >= Kg.norm() ? kernel_vector(Kf) : kernel_vector(Kg);
    if (std::max(Kf.norm(), Kg.norm()) <= 1e-12 * scale) y = Vec2(0, 1);
  }
  const GroupElement h = conjugator_from(p, y);
  return {h, conjugate(f, h), conjugate(g, h)};
}

PairNormalForm diagonalize_pair(const GroupElement& f, const GroupElement& g, double tol_sep, double tol_comm) {
  if (f.regime.kind != Kind::Single) throw InputError("diagonalize_pair: Single regime only");
  require_same(f, g, "diagonalize_pair");
  const int p = f.regime.p, q = f.regime.q;
  const Complex res = ipow(f.a1, p) * ipow(f.a2, q);
  const Complex gap = f.a3 - res;
  if (std::abs(gap) <= tol_sep * std::max({1.0, std::abs(f.a3), std::abs(res)}))
    throw IllConditioned("diagonalize_pair: linear part of the first element is resonant");
  const double scale = std::max(param_scale(f), param_scale(g));
  if (commutation_residual(f, g) > tol_comm * scale * scale)
    throw PreconditionError("diagonalize_pair: elements do not commute");
  if (f.eps == Complex(0) && g.eps == Complex(0)) return {GroupElement::identity(f.regime), f, g};
  const Complex c = -f.eps / gap;
  const GroupElement h = GroupElement::single(p, q, 1.0, 1.0, 1.0, c);
  GroupElement df = conjugate(f, h), dg = conjugate(g, h);
  return {h, df, dg};
}

Untwisted untwist(const GroupElement& f) {
  if (f.regime.kind != Kind::Double) throw InputError("untwist: Double regime only");
  return {f.a1, twist_diag(f.a1, f.regime.p).inverse() * f.m};
}

GroupElement twist(int p, Complex a1, const Mat2& n) {
  return GroupElement::double_(p, a1, twist_diag(a1, p) * n);
}

// ---- exp / log ----

LieElement LieElement::operator*(Complex s) const {
  LieElement r = *this;
  r.x1 *= s;
  r.x2 *= s;
  r.x3 *= s;
  r.e *= s;
  r.y *= s;
  return r;
}

double distance_from_identity(const GroupElement& f) {
  if (f.regime.kind == Kind::Double) {
    const Untwisted u = untwist(f);
    return std::max(std::abs(u.a1 - 1.0), opnorm2(u.n - Mat2::Identity()));
  }
  // the fibre shear does not affect convergence of the logarithm
  return std::max({std::abs(f.a1 - 1.0), std::abs(f.a2 - 1.0), std::abs(f.a3 - 1.0)});
}

GroupElement group_exp(const LieElement& X) {
  const ResonanceClass& c = X.regime;
  switch (c.kind) {
  case Kind::NonResonant: {
    GroupElement g = GroupElement::diagonal(std::exp(X.x1), std::exp(X.x2), std::exp(X.x3));
    return g;
  }
  case Kind::Single: {
    // flow of x1 z1 d1 + x2 z2 d2 + (x3 z3 + e z1^p z2^q) d3 at time 1
    const Complex mu = static_cast<double>(c.p) * X.x1 + static_cast<double>(c.q) * X.x2;
    return GroupElement::single(c.p, c.q, std::exp(X.x1), std::exp(X.x2), std::exp(X.x3),
                                X.e * divided_exp(mu, X.x3));
  }
  case Kind::Double:
    return twist(c.p, std::exp(X.x1), expm2(X.y));
  }
  return GroupElement::identity(c);
}

LieElement group_log(const GroupElement& f) {
  if (!(distance_from_identity(f) < 1.0)) throw BranchDomain("group_log: element outside the principal ball");
  LieElement X;
  X.regime = f.regime;
  if (f.regime.kind == Kind::Double) {
    const Untwisted u = untwist(f);
    if (on_cut(u.a1)) throw BranchDomain("group_log: scalar on the branch cut");
    X.x1 = std::log(u.a1);
    X.y = logm2(u.n);
    return X;
  }
  X.x1 = std::log(f.a1);
  X.x2 = std::log(f.a2);
  X.x3 = std::log(f.a3);
  if (f.regime.kind == Kind::Single) {
    const Complex mu = static_cast<double>(f.regime.p) * X.x1 + static_cast<double>(f.regime.q) * X.x2;
    const Complex phi = divided_exp(mu, X.x3);
    if (std::abs(phi) < 1e-12 * std::abs(std::exp(X.x3))) throw BranchDomain("group_log: shear not on a one-parameter subgroup");
    X.e = f.eps / phi;
  }
  return X;
}

int group_dim(const ResonanceClass& c) {
  switch (c.kind) {
  case Kind::NonResonant:
    return 3;
  case Kind::Single:
    return 4;
  case Kind::Double:
    return 5;
  }
  return 0;
}

} // namespace lvmkit

#include "lvmkit/family_gluing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lvmkit/holonomy.hpp"
#include "lvmkit/rep_variety.hpp"

namespace lvmkit {

using Space = FamilyPoint::Space;

namespace {

struct Diag {
  Complex a1, a2, a3, e;
};

Diag lower_entries(const Eigen::Matrix3cd& A) { return {A(0, 0), A(1, 1), A(2, 2), A(2, 1)}; }

double entry_scale(std::initializer_list<Complex> zs) {
  double s = 1.0;
  for (Complex z : zs) s = std::max(s, std::abs(z));
  return s;
}

Complex checked_den(Complex den, double scale, double tol, const char* what) {
  if (!(std::abs(den) > tol * scale)) throw IllConditioned(std::string("gluing denominator ") + what + " is below threshold");
  return den;
}

Eigen::Matrix3cd mat_power(const Eigen::Matrix3cd& M, int n) {
  Eigen::Matrix3cd base = n < 0 ? Eigen::Matrix3cd(M.inverse()) : M;
  Eigen::Matrix3cd r = Eigen::Matrix3cd::Identity();
  for (unsigned k = static_cast<unsigned>(n < 0 ? -n : n); k; k >>= 1) {
    if (k & 1u) r = r * base;
    base = base * base;
  }
  return r;
}

Eigen::Matrix3cd unipotent23(Complex x) {
  Eigen::Matrix3cd U = Eigen::Matrix3cd::Identity();
  U(1, 2) = x;
  return U;
}

ResonanceClass regime_of(const FamilyPoint& pt) {
  if (pt.space == Space::Tpq) return ResonanceClass::single(pt.p, pt.q);
  if (pt.space == Space::Sp) return ResonanceClass::double_(pt.p);
  return ResonanceClass::non_resonant();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

bool close_rel(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol * entry_scale({a, b}); }

Clause modulus_clause(Complex a2, Complex a3) {
  const bool ok = std::abs(a2) > std::abs(a3);
  return {"modulus", ok, "|a2| = " + fmt(std::abs(a2)) + ", |a3| = " + fmt(std::abs(a3))};
}

Clause lvm_clause(const std::array<Complex, 3>& a, const std::array<Complex, 3>& b, const ConditionOptions& opt) {
  HolonomyPair h;
  h.alpha = a;
  h.beta = b;
  const auto v = validate_holonomy(h);
  if (!v.empty()) return {"lvm-eigenvalues", false, "eigen-data rule '" + v.front().rule + "' fails"};
  if (!opt.witness) return {"lvm-eigenvalues", true, "eigen-data admissible (no configuration witness supplied)"};
  const auto rep = analyze_configuration(*opt.witness);
  if (!rep.type_triple || !(*rep.type_triple == TypeTriple{2, 6, 4}))
    return {"lvm-eigenvalues", false, "witness is not a certified (2,6,4) configuration"};
  const HolonomyPair w = compute_holonomy(*opt.witness);
  for (int j = 0; j < 3; ++j)
    if (!close_rel(w.alpha[j], a[j], opt.tol) || !close_rel(w.beta[j], b[j], opt.tol))
      return {"lvm-eigenvalues", false, "witness holonomy differs at j = " + std::to_string(j + 1)};
  return {"lvm-eigenvalues", true, "eigen-data reproduced by the witness configuration"};
}

// a3 != a1^r a2^s for |r| <= bound, 1 <= s <= bound, (r,s) != skip.
Clause no_resonance_clause(Complex a1, Complex a2, Complex a3, std::pair<int, int> skip, const ConditionOptions& opt) {
  const Complex l1 = std::log(a1), l2 = std::log(a2), l3 = std::log(a3);
  for (int s = 1; s <= opt.bound; ++s)
    for (int r = -opt.bound; r <= opt.bound; ++r) {
      if (std::make_pair(r, s) == skip) continue;
      if (exp_defect(l3 - static_cast<double>(r) * l1 - static_cast<double>(s) * l2) <= opt.tol)
        return {"no-resonance", false,
                "a3 = a1^" + std::to_string(r) + " a2^" + std::to_string(s) + " within the window"};
    }
  return {"no-resonance", true, "no relation a3 = a1^r a2^s with |r|, s <= " + std::to_string(opt.bound)};
}

} // namespace

// ---- points ----

Eigen::Matrix3cd lower_shape(Complex a1, Complex a2, Complex a3, Complex eps) {
  Eigen::Matrix3cd A = Eigen::Matrix3cd::Zero();
  A(0, 0) = a1;
  A(1, 1) = a2;
  A(2, 2) = a3;
  A(2, 1) = eps;
  return A;
}

FamilyPoint FamilyPoint::make_T(const Eigen::Matrix3cd& A, const Eigen::Matrix3cd& B, Complex lambda) {
  FamilyPoint pt;
  pt.space = Space::T;
  pt.A = A;
  pt.B = B;
  pt.lambda = lambda;
  pt.validate_shape();
  return pt;
}

FamilyPoint FamilyPoint::make_Tpq(int p, int q, const Eigen::Matrix3cd& A, const Eigen::Matrix3cd& B, Complex lambda) {
  FamilyPoint pt;
  pt.space = Space::Tpq;
  pt.p = p;
  pt.q = q;
  pt.A = A;
  pt.B = B;
  pt.lambda = lambda;
  pt.validate_shape();
  return pt;
}

FamilyPoint FamilyPoint::make_Sp(int p, const Eigen::Matrix3cd& A, const Eigen::Matrix3cd& B) {
  FamilyPoint pt;
  pt.space = Space::Sp;
  pt.p = p;
  pt.A = A;
  pt.B = B;
  pt.validate_shape();
  return pt;
}

void FamilyPoint::validate_shape() const {
  if (space == Space::Tpq && q < 2) throw InputError("T_pq point needs q >= 2");
  for (const Eigen::Matrix3cd* M : {&A, &B}) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const bool diag = i == j;
        const bool allowed = diag || (i == 2 && j == 1) || (space == Space::Sp && i == 1 && j == 2);
        if (!allowed && (*M)(i, j) != Complex(0))
          throw InputError(space_name() + " point: entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") must vanish");
      }
    if ((*M)(0, 0) == Complex(0)) throw InputError(space_name() + " point: first eigenvalue must be nonzero");
    if ((*M)(1, 1) * (*M)(2, 2) - (*M)(1, 2) * (*M)(2, 1) == Complex(0))
      throw InputError(space_name() + " point: singular block");
  }
}

std::string FamilyPoint::space_name() const {
  switch (space) {
  case Space::T: return "T";
  case Space::Tpq: return "T_pq";
  case Space::Sp: return "S_p";
  }
  return "?";
}

Point3 family_act(const FamilyPoint& pt, int r, int s, const Point3& xi) {
  if (pt.space == Space::T) {
    const Eigen::Vector3cd v = mat_power(pt.A, r) * mat_power(pt.B, s) * Eigen::Vector3cd(xi[0], xi[1], xi[2]);
    return {v(0), v(1), v(2)};
  }
  const ResonanceClass reg = regime_of(pt);
  const GroupElement f = GroupElement::from_matrix3(reg, pt.A);
  const GroupElement g = GroupElement::from_matrix3(reg, pt.B);
  return lvmkit::apply(compose(power(f, r), power(g, s)), xi);
}

// ---- p-eigenvalues ----

std::array<Complex, 2> p_eigenvalues(Complex alpha, const Mat2& M, int p) {
  if (alpha == Complex(0)) throw InputError("p_eigenvalues: alpha must be nonzero");
  const Complex ap = ipow(alpha, p);
  auto r = quadratic_roots(ap, -(M(0, 0) * ap + M(1, 1)), M.determinant());
  if (lex_less(r[1], r[0])) std::swap(r[0], r[1]);
  return r;
}

std::array<Complex, 4> lifted_eigenvalues(const FamilyPoint& pt) {
  if (pt.space != Space::Sp) throw InputError("lifted_eigenvalues: S_p point required");
  const ResonanceClass reg = regime_of(pt);
  const auto nf = simultaneous_triangularize(GroupElement::from_matrix3(reg, pt.A), GroupElement::from_matrix3(reg, pt.B));
  std::array<Complex, 4> out{nf.tf.m(0, 0), nf.tf.m(1, 1), nf.tg.m(0, 0), nf.tg.m(1, 1)};
  if (std::abs(out[1]) > std::abs(out[0])) {
    std::swap(out[0], out[1]);
    std::swap(out[2], out[3]);
  }
  return out;
}

// ---- membership ----

MembershipReport check_condition(const FamilyPoint& pt, const ConditionOptions& opt) {
  MembershipReport rep;
  rep.bound = opt.bound;
  rep.tol = opt.tol;
  std::array<Complex, 3> a, b;
  int p = pt.p, q = 1;
  if (pt.space == Space::Sp) {
    rep.condition = "C_p";
    const GroupElement f = GroupElement::from_matrix3(regime_of(pt), pt.A);
    const GroupElement g = GroupElement::from_matrix3(regime_of(pt), pt.B);
    const double res = variety_residual(f, g).max_abs;
    const double sc = std::pow(std::max(param_scale(f), param_scale(g)), 2);
    rep.clauses.push_back({"equations", res <= opt.tol * sc, "residual " + fmt(res)});
    const auto l = lifted_eigenvalues(pt);
    a = {pt.A(0, 0), l[0], l[1]};
    b = {pt.B(0, 0), l[2], l[3]};
  } else {
    const Diag x = lower_entries(pt.A), y = lower_entries(pt.B);
    a = {x.a1, x.a2, x.a3};
    b = {y.a1, y.a2, y.a3};
    Complex res;
    if (pt.space == Space::T) {
      rep.condition = "C";
      res = x.e * (y.a3 - y.a2) - y.e * (x.a3 - x.a2);
    } else {
      rep.condition = "K_pq";
      q = pt.q;
      res = x.e * (y.a3 - ipow(y.a1, p) * ipow(y.a2, q)) - y.e * (x.a3 - ipow(x.a1, p) * ipow(x.a2, q));
    }
    const double sc = std::pow(entry_scale({x.a1, x.a2, x.a3, x.e, y.a1, y.a2, y.a3, y.e}), 2);
    rep.clauses.push_back({"relation", std::abs(res) <= opt.tol * sc, "residual " + fmt(std::abs(res))});
  }
  rep.clauses.insert(rep.clauses.begin(), modulus_clause(a[1], a[2]));
  rep.clauses.push_back(lvm_clause(a, b, opt));
  // T has no admitted resonance; the others exclude their own exponent
  const std::pair<int, int> skip = pt.space == Space::T ? std::make_pair(0, 0) : std::make_pair(p, q);
  rep.clauses.push_back(no_resonance_clause(a[0], a[1], a[2], skip, opt));
  rep.satisfied = std::all_of(rep.clauses.begin(), rep.clauses.end(), [](const Clause& c) { return c.holds; });
  if (pt.space != Space::T) {
    rep.singular = close_rel(a[2], ipow(a[0], p) * ipow(a[1], q), opt.tol) &&
                   close_rel(b[2], ipow(b[0], p) * ipow(b[1], q), opt.tol);
  }
  return rep;
}

// ---- psi_p ----

GluedPoint glue_psi_p(const FamilyPoint& t, const Point3& xi, int p, double tol_den) {
  if (t.space != Space::T) throw InputError("glue_psi_p: T point required");
  require_in_V(xi);
  const Diag a = lower_entries(t.A), b = lower_entries(t.B);
  const Complex a1p = ipow(a.a1, p);
  const Complex d1 = checked_den(a.a3 - a.a2, entry_scale({a.a3, a.a2}), tol_den, "a3 - a2");
  const Complex d2 = checked_den(a.a3 - a1p * a.a2, entry_scale({a.a3, a1p * a.a2}), tol_den, "a3 - a1^p a2");
  const Complex delta1 = a.e * (b.a3 - ipow(b.a1, p) * b.a2) / d2;
  const Complex lam = t.lambda;

  GluedPoint out;
  const Eigen::Matrix3cd right = unipotent23(-lam);
  out.point = FamilyPoint::make_Sp(p, unipotent23(lam / a1p) * lower_shape(a.a1, a.a2, a.a3, a.e) * right,
                                   unipotent23(lam / ipow(b.a1, p)) * lower_shape(b.a1, b.a2, b.a3, delta1) * right);
  const Complex x1p = ipow(xi[0], p);
  const Complex u = xi[2] + (a.e / d1) * xi[1] - (a.e / d2) * x1p * xi[1];
  out.xi = {xi[0], xi[1] + lam / x1p * u, u};
  return out;
}

GluedPoint invert_psi_p(const FamilyPoint& s, const Point3& xi, double tol) {
  if (s.space != Space::Sp) throw InputError("invert_psi_p: S_p point required");
  require_in_V(xi);
  const int p = s.p;
  const GroupElement f = GroupElement::from_matrix3(regime_of(s), s.A);
  const GroupElement g = GroupElement::from_matrix3(regime_of(s), s.B);
  const double sc = std::max(param_scale(f), param_scale(g));
  const double res = variety_residual(f, g).max_abs;
  if (res > tol * sc * sc) throw NotInImage("S_p point fails the defining equations (residual " + fmt(res) + ")");

  const Complex a1 = f.a1, b1 = g.a1, a1p = ipow(a1, p);
  const Mat2& Mp = f.m;
  const Complex eps = Mp(1, 0);
  const auto mu = p_eigenvalues(a1, Mp, p);

  // lifted assignment: a2' = mu_a, a3' = a1^p mu_b
  std::string why = "no admissible ordering of the p-eigenvalues";
  std::vector<int> valid;
  for (int k = 0; k < 2; ++k) {
    const Complex a2 = mu[k], a3 = a1p * mu[1 - k];
    if (!(std::abs(a2) > std::abs(a3))) {
      why = "p-eigenvalue modulus ordering |a2'| > |a3'| fails";
      continue;
    }
    if (close_rel(a3, a1p * a2, tol)) {
      why = "p-eigenvalues satisfy a3' = a1^p a2'";
      continue;
    }
    if (std::abs(eps) <= tol * sc && !close_rel(a2, Mp(0, 0), tol)) {
      why = "e1 = 0 but a2' differs from the (2,2) entry";
      continue;
    }
    valid.push_back(k);
  }
  if (valid.empty()) throw NotInImage(why);
  if (valid.size() == 2) throw NotInImage("ambiguous: both orderings of the p-eigenvalues are admissible");
  const int k = valid.front();
  const Complex mub = mu[1 - k];

  const Vec2 v = kernel_vector(Mp - mub * twist_diag(a1, p));
  if (!(std::abs(v(1)) > tol * v.norm())) throw NotInImage("p-eigenvector has no (lambda, 1) normalisation");
  const Complex lam = v(0) / v(1);

  Mat2 Q, Qi;
  Q << 1.0, -lam, 0.0, 1.0;
  Qi << 1.0, lam, 0.0, 1.0;
  const Mat2 M = tau(a1, p, Q) * Mp * Qi;
  const Mat2 N = tau(b1, p, Q) * g.m * Qi;
  if (std::abs(M(0, 1)) > tol * sc || std::abs(N(0, 1)) > tol * sc)
    throw NotInImage("the pair is not triangular in the frame of the p-eigenvector");

  const Complex a2 = M(0, 0), a3 = M(1, 1), b2 = N(0, 0), b3 = N(1, 1);
  const Complex d1 = checked_den(a3 - a2, entry_scale({a3, a2}), 1e-12, "a3 - a2");
  const Complex d2 = checked_den(a3 - a1p * a2, entry_scale({a3, a1p * a2}), 1e-12, "a3 - a1^p a2");
  const Complex delta = M(1, 0) * (b3 - b2) / d1;

  GluedPoint out;
  out.point = FamilyPoint::make_T(lower_shape(a1, a2, a3, M(1, 0)), lower_shape(b1, b2, b3, delta), lam);
  const Complex x1p = ipow(xi[0], p);
  const Complex x2 = xi[1] - lam / x1p * xi[2];
  const Complex e = M(1, 0);
  out.xi = {xi[0], x2, xi[2] - (e / d1) * x2 + (e / d2) * x1p * x2};
  return out;
}

// ---- phi_pq ----

GluedPoint glue_phi_pq(const FamilyPoint& u, const Point3& xi, double tol_den) {
  if (u.space != Space::Tpq) throw InputError("glue_phi_pq: T_pq point required");
  require_in_V(xi);
  const int p = u.p, q = u.q;
  const Diag a = lower_entries(u.A), b = lower_entries(u.B);
  const Complex res = ipow(a.a1, p) * ipow(a.a2, q);
  const Complex d1 = checked_den(a.a3 - res, entry_scale({a.a3, res}), tol_den, "a3 - a1^p a2^q");
  const Complex d2 = checked_den(a.a3 - a.a2, entry_scale({a.a3, a.a2}), tol_den, "a3 - a2");
  const Complex delta = a.e * (b.a3 - b.a2) / d2;

  GluedPoint out;
  out.point = FamilyPoint::make_T(lower_shape(a.a1, a.a2, a.a3, a.e), lower_shape(b.a1, b.a2, b.a3, delta), u.lambda);
  out.xi = {xi[0], xi[1], xi[2] + (a.e / d1) * ipow(xi[0], p) * ipow(xi[1], q) - (a.e / d2) * xi[1]};
  return out;
}

GluedPoint invert_phi_pq(const FamilyPoint& t, const Point3& xi, int p, int q, double tol_den) {
  if (t.space != Space::T) throw InputError("invert_phi_pq: T point required");
  require_in_V(xi);
  const Diag a = lower_entries(t.A), b = lower_entries(t.B);
  const Complex res = ipow(a.a1, p) * ipow(a.a2, q);
  const Complex d1 = checked_den(a.a3 - res, entry_scale({a.a3, res}), tol_den, "a3 - a1^p a2^q");
  const Complex d2 = checked_den(a.a3 - a.a2, entry_scale({a.a3, a.a2}), tol_den, "a3 - a2");
  const Complex delta = a.e * (b.a3 - ipow(b.a1, p) * ipow(b.a2, q)) / d1;

  GluedPoint out;
  out.point = FamilyPoint::make_Tpq(p, q, lower_shape(a.a1, a.a2, a.a3, a.e), lower_shape(b.a1, b.a2, b.a3, delta),
                                    t.lambda);
  out.xi = {xi[0], xi[1], xi[2] - (a.e / d1) * ipow(xi[0], p) * ipow(xi[1], q) + (a.e / d2) * xi[1]};
  return out;
}

double glued_distance(const GluedPoint& a, const GluedPoint& b) {
  double d = std::abs(a.point.lambda - b.point.lambda);
  d = std::max(d, (a.point.A - b.point.A).cwiseAbs().maxCoeff());
  d = std::max(d, (a.point.B - b.point.B).cwiseAbs().maxCoeff());
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a.xi[i] - b.xi[i]));
  return d;
}

} // namespace lvmkit

#pragma once

#include <vector>

#include "lvmkit/matrix2.hpp"
#include "lvmkit/resonance.hpp"

namespace lvmkit {

/// Element of the group of resonant transformations of V for a fixed regime.
///   NonResonant: (xi1,xi2,xi3) -> (a1 xi1, a2 xi2, a3 xi3)
///   Single{p,q}: (xi1,xi2,xi3) -> (a1 xi1, a2 xi2, a3 xi3 + eps xi1^p xi2^q)
///   Double{p}:   (xi1,xi2,xi3) -> (a1 xi1, tau_p(xi1)(m) (xi2,xi3))
/// Only the fields of the active regime are meaningful.
struct GroupElement {
  ResonanceClass regime;
  Complex a1{1.0}, a2{1.0}, a3{1.0};
  Complex eps{0.0};
  Mat2 m = Mat2::Identity();

  static GroupElement identity(const ResonanceClass& regime);
  static GroupElement diagonal(Complex a1, Complex a2, Complex a3);
  static GroupElement single(int p, int q, Complex a1, Complex a2, Complex a3, Complex eps);
  static GroupElement double_(int p, Complex a1, const Mat2& m);

  /// Interchange ordering: NonResonant [a1,a2,a3]; Single [a1,a2,a3,eps];
  /// Double [a1, m00, m01, m10, m11].
  std::vector<Complex> params() const;
  static GroupElement from_params(const ResonanceClass& regime, const std::vector<Complex>& v);

  /// The 3x3 matrix in the shape used by the families: Single puts eps at (3,2).
  Eigen::Matrix3cd matrix3() const;
  static GroupElement from_matrix3(const ResonanceClass& regime, const Eigen::Matrix3cd& A);

  bool is_identity() const;
};

/// Max-abs distance between parameter vectors (same regime required).
double param_distance(const GroupElement& f, const GroupElement& g);
double param_scale(const GroupElement& f);

/// Throws InputError unless xi1 != 0 and (xi2, xi3) != 0.
void require_in_V(const Point3& x);

Point3 apply(const GroupElement& f, const Point3& x);
GroupElement compose(const GroupElement& f, const GroupElement& g);
GroupElement inverse(const GroupElement& f);
GroupElement power(const GroupElement& f, long long n);
/// Conjugate h^{-1} f h.
GroupElement conjugate(const GroupElement& f, const GroupElement& h);

/// Parameter distance between compose(f,g) and compose(g,f).
double commutation_residual(const GroupElement& f, const GroupElement& g);

/// a3 - a1^p a2^q for a Single element.
Complex resonance_gap(const GroupElement& f);

struct Triangularization {
  GroupElement h, t;
};
/// h = (1,P) with h^{-1} f h lower triangular. Root choice: lexicographically larger.
Triangularization triangularize(const GroupElement& f);

struct PairNormalForm {
  GroupElement h, tf, tg;
};
PairNormalForm simultaneous_triangularize(const GroupElement& f, const GroupElement& g, double tol = 1e-9);

/// Conjugation by (xi1, xi2, xi3 + c xi1^p xi2^q), c = -eps/(a3 - a1^p a2^q).
PairNormalForm diagonalize_pair(const GroupElement& f, const GroupElement& g, double tol_sep = 1e-8,
                                double tol_comm = 1e-9);

/// Double element in the coordinates (xi1, xi2, xi1^{-p} xi3), where the group is C* x GL2.
struct Untwisted {
  Complex a1;
  Mat2 n;
};
Untwisted untwist(const GroupElement& f);
GroupElement twist(int p, Complex a1, const Mat2& n);

/// Lie algebra element. NonResonant/Single use (x1,x2,x3[,e]); Double uses x1 and the
/// untwisted 2x2 block y.
struct LieElement {
  ResonanceClass regime;
  Complex x1{0.0}, x2{0.0}, x3{0.0}, e{0.0};
  Mat2 y = Mat2::Zero();

  LieElement operator*(Complex s) const;
};

/// Operator distance from the identity in the untwisted presentation.
double distance_from_identity(const GroupElement& f);

GroupElement group_exp(const LieElement& X);
/// Principal logarithm; throws BranchDomain unless distance_from_identity(f) < 1.
LieElement group_log(const GroupElement& f);

int group_dim(const ResonanceClass& c);

} // namespace lvmkit

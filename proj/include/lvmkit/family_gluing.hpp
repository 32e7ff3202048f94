#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lvmkit/config_geometry.hpp"
#include "lvmkit/resonant_group.hpp"

namespace lvmkit {

/// A point of one of the parameter spaces of the glued family.
///   T:    A = [[a1,0,0],[0,a2,0],[0,eps,a3]] acting linearly, plus lambda
///   Tpq:  the same shape acting by (a1 x1, a2 x2, a3 x3 + eps x1^p x2^q), plus lambda
///   Sp:   A = [[a1,0,0],[0,a2,e2],[0,e1,a3]] with the twisted action of the Double regime
struct FamilyPoint {
  enum class Space { T, Tpq, Sp };
  Space space = Space::T;
  int p = 0, q = 0;
  Eigen::Matrix3cd A = Eigen::Matrix3cd::Identity();
  Eigen::Matrix3cd B = Eigen::Matrix3cd::Identity();
  Complex lambda{0.0};

  static FamilyPoint make_T(const Eigen::Matrix3cd& A, const Eigen::Matrix3cd& B, Complex lambda);
  static FamilyPoint make_Tpq(int p, int q, const Eigen::Matrix3cd& A, const Eigen::Matrix3cd& B, Complex lambda);
  static FamilyPoint make_Sp(int p, const Eigen::Matrix3cd& A, const Eigen::Matrix3cd& B);

  /// Throws InputError when a matrix leaves the zero pattern of its space or is singular.
  void validate_shape() const;
  std::string space_name() const;
};

/// Lower-triangular 3x3 of the T / Tpq shape.
Eigen::Matrix3cd lower_shape(Complex a1, Complex a2, Complex a3, Complex eps);

/// Image of xi under the action of (r, s) attached to the point's space.
Point3 family_act(const FamilyPoint& pt, int r, int s, const Point3& xi);

/// Roots of det(X L_{alpha,p} - M), sorted lexicographically.
std::array<Complex, 2> p_eigenvalues(Complex alpha, const Mat2& M, int p);

/// For an Sp point: (a2', a3', b2', b3') read off a common triangular form, lifted so that
/// a diagonal pair gives back its own diagonal entries (a3' = a1^p times the p-eigenvalue).
/// Labels are chosen with |a2'| >= |a3'|.
std::array<Complex, 4> lifted_eigenvalues(const FamilyPoint& pt);

struct Clause {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct MembershipReport {
  std::string condition; // "C", "K_pq" or "C_p"
  std::vector<Clause> clauses;
  bool satisfied = false;
  /// Whether the extra singular-locus equations (K_pq^S / C_p^S) hold.
  bool singular = false;
  int bound = 0;
  double tol = 0.0;
};

struct ConditionOptions {
  int bound = 16;
  double tol = 1e-9;
  /// Optional configuration whose holonomy must reproduce the eigenvalues.
  std::optional<Configuration> witness;
};

MembershipReport check_condition(const FamilyPoint& pt, const ConditionOptions& opt = {});

struct GluedPoint {
  FamilyPoint point;
  Point3 xi{};
};

/// T x V -> Sp x V.
GluedPoint glue_psi_p(const FamilyPoint& t, const Point3& xi, int p, double tol_den = 1e-12);

/// Clauses describing the image of glue_psi_p; throws NotInImage with the failing clause.
GluedPoint invert_psi_p(const FamilyPoint& s, const Point3& xi, double tol = 1e-9);

/// U_pq x V -> T x V (lambda passes through).
GluedPoint glue_phi_pq(const FamilyPoint& u, const Point3& xi, double tol_den = 1e-12);

/// T x V -> U_pq x V, the inverse of glue_phi_pq.
GluedPoint invert_phi_pq(const FamilyPoint& t, const Point3& xi, int p, int q, double tol_den = 1e-12);

/// Max-abs distance between the two matrices, lambda and points of two glued points.
double glued_distance(const GluedPoint& a, const GluedPoint& b);

} // namespace lvmkit

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lvmkit/config_geometry.hpp"
#include "lvmkit/newton.hpp"
#include "lvmkit/resonant_group.hpp"

namespace lvmkit {

struct NamedResidual {
  std::string name;
  Complex value;
};

struct VarietyResidual {
  std::vector<NamedResidual> equations;
  double max_abs = 0.0;
};

/// Defining equations of the commuting-pair variety:
///   Single: "commutation"  eps(b3 - b1^p b2^q) - delta(a3 - a1^p a2^q)
///   Double (blocks [[a2, e2], [e1, a3]] and [[b2, d2], [d1, b3]]):
///     "twisted-offdiag"  e1 d2 b1^p - d1 e2 a1^p
///     "lower-left"       e1 (b3 - b1^p b2) - d1 (a3 - a1^p a2)
///     "upper-right"      e2 (b2 - b1^-p b3) - d2 (a2 - a1^-p a3)
///   NonResonant: no equations.
VarietyResidual variety_residual(const GroupElement& f, const GroupElement& g);

/// Jacobian of the equations above with respect to (f.params(), g.params()).
CMat variety_jacobian(const GroupElement& f, const GroupElement& g);

struct TangentReport {
  int dimension = 0;
  double gap = 0.0;
  std::vector<double> singular_values;
  std::optional<std::string> warning; // "RankAmbiguous" when gap < 10
};

/// Kernel dimension of variety_jacobian, threshold 1e-8 max(sigma_max, scale).
/// gap = (smallest kept singular value) / (largest dropped one), floored at scale*eps.
TangentReport tangent_dimension(const GroupElement& f, const GroupElement& g);

/// Holonomy of a deformed structure: images of the three generators of Z^3, the third being
/// the image of the loop in the (C^2 \ 0) direction. base anchors branches for the
/// non-resonant projection.
struct StructureSpec {
  ResonanceClass regime;
  std::array<GroupElement, 3> rho;
  std::optional<Configuration> base;

  /// Throws InputError on regime mismatch, PreconditionError when generators do not commute.
  void validate(double tol = 1e-9) const;
  /// c_j = log(gamma_j)/(2 pi i) for the diagonal third generator.
  std::array<Complex, 3> branch_data() const;
};

struct PsiResult {
  std::array<GroupElement, 2> pair;
  /// w1-translation of the deck transformations lifting the first two generators.
  std::array<Complex, 2> shifts{};
  /// Lambda_4..Lambda_6 of the deformed configuration (non-resonant only).
  std::optional<std::array<std::vector<Complex>, 3>> tail;
  std::string dev_case; // "diagonal", "double", "generic", "degenerate"
  std::vector<std::string> warnings;
  int newton_iterations = 0;
};

/// Non-resonant projection: closed form anchored at the base configuration, polished by Newton.
PsiResult psi_nonresonant(const StructureSpec& spec);

struct PsiOptions {
  double tol_case = 1e-12;
};

/// Resonant projection (Single or Double).
PsiResult psi_resonant(const StructureSpec& spec, const PsiOptions& opt = {});

/// Dispatch on the regime.
PsiResult psi(const StructureSpec& spec);

/// Solve x exp(log(gamma) log(x) / (2 pi i)) = target by Newton from x = target.
Complex solve_twisted_root(Complex gamma, Complex target);

struct RankReport {
  int rank = 0;
  std::vector<double> singular_values;
};

/// Numerical rank of the derivative of rho -> (Lambda_4, Lambda_5, Lambda_6) at spec,
/// over the logarithms of the nine diagonal coefficients of the three generators (relative step h).
RankReport psi_jacobian_rank(const StructureSpec& spec, double h = 1e-6);

} // namespace lvmkit

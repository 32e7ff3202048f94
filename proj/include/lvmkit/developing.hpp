#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lvmkit/rep_variety.hpp"

namespace lvmkit {

/// Developing map built from the image of the third generator.
///   diagonal:   (e^{2 pi i w1 (1+c1)}, e^{2 pi i w1 c2} xi2, e^{2 pi i w1 c3} xi3)
///   double:     exp(w1 log gamma) . (e^{2 pi i w1}, xi2, xi3)
///   generic:    Single with c4 != gamma^p c1^q, the shear absorbed into xi3
///   degenerate: Single with c4 == gamma^p c1^q, a secular term w1 e^{2 pi i p w1} xi2^q
struct DevMap {
  ResonanceClass regime;
  std::string case_tag = "diagonal";
  GroupElement gamma;   // image of the third generator
  LieElement log_gamma; // used by the double case
  std::array<Complex, 3> c{}; // diagonal case: log(gamma_j) / (2 pi i)

  static DevMap canonical(const ResonanceClass& regime);
  static DevMap from_gamma(const GroupElement& gamma, const std::string& case_tag);
};

/// w = (w1, xi2, xi3) on the cover C x (C^2 \ 0). Throws InputError if (xi2, xi3) = 0.
Point3 dev_eval(const DevMap& d, const Point3& w);

/// Lift of a generator to the cover: w1 -> w1 + shift, (xi2, xi3) -> the fibre part of
/// lin applied at xi1 = e^{2 pi i w1}.
struct DeckTransform {
  Complex shift{0.0};
  GroupElement lin;

  Point3 apply(const Point3& w) const;
};

struct Structure {
  DevMap dev;
  std::array<DeckTransform, 3> deck;
  std::array<GroupElement, 3> holonomy;
  std::vector<std::string> warnings;
};

/// Developing map and deck lifts for a spec, through the appropriate projection.
Structure develop(const StructureSpec& spec);

/// Max over coordinates of |dev(deck_k w) - rho_k dev(w)| relative to that coordinate, k in {1,2,3}.
double equivariance_residual(const Structure& s, int k, const Point3& w);

struct StructureReport {
  bool pass = false;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  std::array<double, 3> per_generator{};
  bool complete = false;
  std::uint64_t seed = 0;
  int samples = 0;
  double tol = 0.0;
  std::optional<int> failing_generator;
  std::vector<std::string> warnings;
};

/// Seeded sample of the cover: w1 in [-1,1]^2, (xi2, xi3) on a sphere of radius in [0.5, 2].
std::vector<Point3> sample_cover(int samples, std::uint64_t seed);

StructureReport check_structure(const Structure& s, int samples, double tol, std::uint64_t seed);
StructureReport check_structure(const StructureSpec& spec, int samples, double tol, std::uint64_t seed);

} // namespace lvmkit

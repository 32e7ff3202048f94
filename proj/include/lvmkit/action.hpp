#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lvmkit/resonant_group.hpp"

namespace lvmkit {

/// A commuting pair (f, g); (r, s) acts as f^r g^s.
struct Pair {
  GroupElement f, g;
};

GroupElement word_element(const Pair& pr, int r, int s);

struct FixedPointWitness {
  int r = 0, s = 0;
  Point3 point{};
  double residual = 0.0; // |h(x) - x|_inf / |x|_inf
};

struct ActionCertificate {
  int window = 0;
  bool fixed_point_free = true;
  std::optional<FixedPointWitness> witness;
  int words_checked = 0;
};

/// Exhaustive over 0 < max(|r|,|s|) <= W in order of max(|r|,|s|). The eigenvalue conditions
/// are tested multiplicatively to tol; when they hold the fixed point is solved for.
ActionCertificate fixed_point_certificate(const Pair& pr, int window = 25, double tol = 1e-10);

/// Iterated images: [x, w_1 x, w_2 w_1 x, ...].
std::vector<Point3> orbit(const Pair& pr, const std::vector<std::pair<int, int>>& word, const Point3& x);

struct ProbeViolation {
  int r = 0, s = 0;
  Point3 point{}, image{};
};

struct ProbeReport {
  double radius = 100.0;
  int horizon = 20;
  int samples = 0;
  int words_checked = 0;
  std::vector<ProbeViolation> violations; // at most one per word
  /// "no violation found" or "violation found"; never a claim of properness.
  std::string verdict;
};

/// K = {1/R <= |xi1| <= R, 1/R <= |(xi2,xi3)| <= R}. For every (r,s) with
/// max(|r|,|s|) in [ceil(H/2), H], reports whether some sampled point of K lands in K.
ProbeReport properness_probe(const Pair& pr, double radius = 100.0, int horizon = 20, int samples = 64,
                             std::uint64_t seed = 0);

} // namespace lvmkit

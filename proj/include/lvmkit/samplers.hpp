#pragma once

#include "lvmkit/action.hpp"
#include "lvmkit/family_gluing.hpp"
#include "lvmkit/rep_variety.hpp"
#include "lvmkit/rng.hpp"

namespace lvmkit::sample {

/// Certified (2,6,4) configurations realising each regime:
/// NonResonant is the worked example; Double{0} repeats its fifth vector;
/// Single{0,2} moves the sixth vector to (-2-3i, -2-2i).
Configuration base_configuration(const ResonanceClass& regime);
bool has_base_configuration(const ResonanceClass& regime);

/// Diagonal generators of the canonical action of base_configuration.
Pair canonical_pair(const ResonanceClass& regime);

/// Element near the identity, off-diagonal parameters of size up to radius.
GroupElement near_identity(const ResonanceClass& regime, Rng& rng, double radius = 0.3);

/// Generic element: moduli in [0.5, 2], off-diagonal parameters up to 1.
GroupElement generic_element(const ResonanceClass& regime, Rng& rng);

/// Generic commuting pair, built in triangular form and conjugated by a random unipotent.
Pair commuting_pair(const ResonanceClass& regime, Rng& rng);

/// Commuting pair close to the canonical pair of base_configuration.
Pair near_canonical_pair(const ResonanceClass& regime, Rng& rng, double radius = 0.05);

/// Both generators of finite order with unit moduli; the action has fixed points.
Pair isometric_pair(const ResonanceClass& regime);

/// Structure with the canonical pair and a random near-identity third generator.
/// For Single, even draws put the third generator on the degenerate locus.
StructureSpec near_identity_structure(const ResonanceClass& regime, Rng& rng, int draw, double radius = 0.05);

/// Point of V with |xi1| and |(xi2, xi3)| in [0.5, 2].
Point3 point_in_V(Rng& rng);

/// T point satisfying the T relation and the modulus ordering, with |a1| in [0.95, 1.05]
/// and |a3/a2| <= 0.6, so its psi_p image has one admissible p-eigenvalue ordering for |p| <= 4.
FamilyPoint T_point(Rng& rng);

/// T_pq point satisfying its relation with a3 away from a1^p a2^q and from a2.
FamilyPoint Tpq_point(int p, int q, Rng& rng);

/// Eigen-data with moduli spread widely; every third draw is planted with a resonance.
HolonomyPair eigen_data(Rng& rng, int draw);

} // namespace lvmkit::sample

#pragma once

#include <string>

#include <json.hpp>

#include "lvmkit/action.hpp"
#include "lvmkit/config_geometry.hpp"
#include "lvmkit/developing.hpp"
#include "lvmkit/family_gluing.hpp"
#include "lvmkit/holonomy.hpp"
#include "lvmkit/rep_variety.hpp"
#include "lvmkit/resonance.hpp"

namespace lvmkit::io {

using Json = nlohmann::ordered_json;

/// Malformed document; the message starts with the location of the problem.
class ParseError : public InputError {
public:
  using InputError::InputError;
};

/// Parses text, turning syntax errors into ParseError with a byte offset.
Json parse_document(const std::string& text);
Json read_document(const std::string& path);

Json to_json(Complex z);
Complex complex_from(const Json& j, const std::string& where);

/// {"m": 2, "vectors": [[[re,im],[re,im]], ...]}
Json to_json(const Configuration& c);
Configuration configuration_from(const Json& j);

/// Flat list of six [re,im] pairs: alpha1..alpha3, beta1..beta3.
Json to_json(const HolonomyPair& h);
HolonomyPair holonomy_from(const Json& j);

/// {"kind": "non-resonant" | "single" | "double", "p": .., "q": ..}
Json to_json(const ResonanceClass& c);
ResonanceClass regime_from(const Json& j);

/// {"regime": .., "coeffs": [[re,im], ...]} with the ordering of GroupElement::params.
Json to_json(const GroupElement& g);
GroupElement group_element_from(const Json& j);
GroupElement group_element_from(const Json& j, const ResonanceClass& regime);

/// {"regime": .., "rho": [coeffs, coeffs, coeffs], "base": configuration (optional)}
Json to_json(const StructureSpec& s);
StructureSpec structure_spec_from(const Json& j);

/// {"space": "T" | "T_pq" | "S_p", "p", "q", "A": 9 pairs row-major, "B": .., "lambda": pair}
Json to_json(const FamilyPoint& pt);
FamilyPoint family_point_from(const Json& j);

Json to_json(const ConfigReport& r);
Json to_json(const ResonanceSearch& s, const ResonanceClass& regime);
Json to_json(const VarietyResidual& r);
Json to_json(const PsiResult& r);
Json to_json(const StructureReport& r);
Json to_json(const ActionCertificate& c);
Json to_json(const ProbeReport& r);
Json to_json(const MembershipReport& r);

} // namespace lvmkit::io

#pragma once

#include "tetdisp/elements.hpp"

#include <string>
#include <vector>

namespace tetdisp {

enum class Family { mass_lumped, sipdg };

/// Interior-penalty choice for the SIPDG family.
///   eigen_bound:      per-face sup of a boundary/energy Rayleigh quotient ("a" methods)
///   inscribed_sphere: p(p+2) / min d_e over the two face neighbours ("b" methods)
enum class PenaltyVariant { none, eigen_bound, inscribed_sphere };

struct MethodSpec {
  Family family = Family::mass_lumped;
  LumpedRuleName rule = LumpedRuleName::ML1;  // mass_lumped only
  int dg_degree = 1;                          // sipdg only
  PenaltyVariant penalty = PenaltyVariant::none;

  /// Polynomial degree p of the full space contained in the element.
  int degree() const;
  /// Lax-Wendroff stages; always equal to p.
  int stages() const { return degree(); }
  /// Short name such as "ML2" or "DG3a".
  std::string name() const;

  static MethodSpec mass_lumped(LumpedRuleName rule);
  static MethodSpec sipdg(int p, PenaltyVariant penalty);
};

/// Parses "ML1", "ML2", "ML3a", "ML3b", "DG1a" ... "DG3b" (case-sensitive).
MethodSpec parse_method(const std::string& name);

/// The ten analysed methods in table order:
/// DG1a DG1b ML1 DG2a DG2b ML2 DG3a DG3b ML3a ML3b.
const std::vector<MethodSpec>& all_methods();

/// "a" or "b" (or "none").
std::string to_string(PenaltyVariant v);
/// Accepts "a", "b", "6a", "6b", "eigen_bound", "inscribed_sphere", "none".
PenaltyVariant parse_penalty(const std::string& s);

}  // namespace tetdisp

#include "tetdisp/method.hpp"

#include <stdexcept>

namespace tetdisp {

int MethodSpec::degree() const {
  if (family == Family::sipdg) return dg_degree;
  switch (rule) {
    case LumpedRuleName::ML1: return 1;
    case LumpedRuleName::ML2: return 2;
    case LumpedRuleName::ML3a:
    case LumpedRuleName::ML3b: return 3;
  }
  return 1;
}

std::string MethodSpec::name() const {
  if (family == Family::mass_lumped) return to_string(rule);
  return "DG" + std::to_string(dg_degree) + (penalty == PenaltyVariant::eigen_bound ? "a" : "b");
}

MethodSpec MethodSpec::mass_lumped(LumpedRuleName rule) {
  MethodSpec m;
  m.family = Family::mass_lumped;
  m.rule = rule;
  return m;
}

MethodSpec MethodSpec::sipdg(int p, PenaltyVariant penalty) {
  if (p < 1 || p > 3) throw std::invalid_argument("SIPDG degree must be 1, 2 or 3");
  if (penalty == PenaltyVariant::none) throw std::invalid_argument("SIPDG needs a penalty variant");
  MethodSpec m;
  m.family = Family::sipdg;
  m.dg_degree = p;
  m.penalty = penalty;
  return m;
}

MethodSpec parse_method(const std::string& name) {
  if (name.rfind("ML", 0) == 0) return MethodSpec::mass_lumped(parse_rule_name(name));
  if (name.size() == 4 && name.rfind("DG", 0) == 0 && name[2] >= '1' && name[2] <= '3' &&
      (name[3] == 'a' || name[3] == 'b'))
    return MethodSpec::sipdg(name[2] - '0',
                             name[3] == 'a' ? PenaltyVariant::eigen_bound : PenaltyVariant::inscribed_sphere);
  throw std::invalid_argument("unknown method '" + name + "'");
}

const std::vector<MethodSpec>& all_methods() {
  static const std::vector<MethodSpec> methods = [] {
    std::vector<MethodSpec> v;
    for (const char* n : {"DG1a", "DG1b", "ML1", "DG2a", "DG2b", "ML2", "DG3a", "DG3b", "ML3a", "ML3b"})
      v.push_back(parse_method(n));
    return v;
  }();
  return methods;
}

std::string to_string(PenaltyVariant v) {
  switch (v) {
    case PenaltyVariant::none: return "none";
    case PenaltyVariant::eigen_bound: return "a";
    case PenaltyVariant::inscribed_sphere: return "b";
  }
  return "?";
}

}  // namespace tetdisp

namespace tetdisp {

PenaltyVariant parse_penalty(const std::string& s) {
  if (s == "a" || s == "6a" || s == "eigen_bound") return PenaltyVariant::eigen_bound;
  if (s == "b" || s == "6b" || s == "inscribed_sphere") return PenaltyVariant::inscribed_sphere;
  if (s == "none") return PenaltyVariant::none;
  throw std::invalid_argument("unknown penalty variant '" + s + "'");
}

}  // namespace tetdisp

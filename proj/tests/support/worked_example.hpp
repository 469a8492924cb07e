#pragma once

// Published 2005 coefficients and the covariate rows of three groups, used
// by the log-odds checks.

#include "mvmc/ergm.hpp"

namespace worked {

inline mvmc::ergm::Coefficients Theta2005() {
  return {{"nodecov.sum_weights", -0.0108},   {"absdiff.nonzero_features", -0.1574},
          {"absdiff.ratio", -4.4038},         {"match.modal_target", 0.1309},
          {"match.modal_tactic", 0.1175},     {"match.modal_weapon", -0.0216},
          {"match.region", 0.0394},           {"match.ideology", 0.1155}};
}

inline mvmc::ergm::GroupCovariates Group(std::string name, double sum, double nonzero,
                                         double ratio, std::string target, std::string tactic,
                                         std::string weapon, std::string region,
                                         std::string ideology) {
  mvmc::ergm::GroupCovariates c;
  c.group = std::move(name);
  c.sum_weights = sum;
  c.nonzero_features = nonzero;
  c.ratio = ratio;
  c.modal_target = std::move(target);
  c.modal_tactic = std::move(tactic);
  c.modal_weapon = std::move(weapon);
  c.region = std::move(region);
  c.ideology = std::move(ideology);
  return c;
}

inline mvmc::ergm::GroupCovariates Eln() {
  return Group("ELN", 21, 10, 0.471, "Private Citizens & Property", "Bombing/Explosion",
               "Explosives", "South America", "Left & Ethno");
}

inline mvmc::ergm::GroupCovariates Ji() {
  return Group("JI", 27, 7, 0.259, "Business", "Bombing/Explosion", "Explosives",
               "Southeast Asia", "Isl/Jihadism");
}

inline mvmc::ergm::GroupCovariates Ltte() {
  return Group("LTTE", 325, 23, 0.07, "Private Citizens & Property", "Armed Assault", "Firearms",
               "South Asia", "Left & Ethno");
}

}  // namespace worked

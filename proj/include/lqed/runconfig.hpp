#pragma once

#include <string>
#include <vector>

#include "lqed/evolve.hpp"

namespace lqed {

// A parsed run description. The file dialect is line-based structured text:
// [section] headers, key = value lines, blank lines and #-comments. Sections
// and keys outside the known set are rejected by name, except [meta], which
// manifests append and the parser skips so a manifest is itself a loadable
// config.
//
//   [bath]       dim, N (0 = pick automatically), J
//   [emitters]   g, delta, positions | preset (+ optional case)
//   [initial]    state = SingleExcited | PlusPair | MinusPair | FourB | SymmetricN
//   [evolution]  dt, t_max, snapshot_times, method (comma list), tolerance,
//                bin_width
//   [loss]       kappa, gamma_star
//   [output]     directory, formats
//
// Positions are "(x,y)" pairs (bare integers allowed in 1D). When a preset is
// named, its case supplies every field first and explicit keys in the file
// override it; positions and preset together are an error.
struct RunConfig {
  EvolveConfig evolve;
  std::vector<std::string> methods = {"splitstep"};
  double tolerance = 1e-3;
  double bin_width = 0.0;  // 0 = band width / 4096
  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv"};
  std::string preset_name;  // provenance; empty when positions were explicit
  std::string preset_case;

  static RunConfig from_file(const std::string& path);
  static RunConfig from_string(const std::string& text);

  // Fully explicit rendering (positions spelled out, auto-chosen N frozen)
  // that parses back to an identical RunConfig.
  std::string serialize() const;
};

std::string initial_tag_name(InitialTag tag);
InitialTag initial_tag_from_name(const std::string& name);

}  // namespace lqed

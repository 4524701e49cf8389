#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lqed/evolve.hpp"

namespace lqed {

// Checks that an initial-state tag is compatible with the emitter layout:
// pair tags need exactly two emitters, FourB needs the four-site square
// returned by four_qe_square, SymmetricN needs the diagonal chain (2j, 2j)
// for j = 1..N_e, and the 2D-only layouts reject 1D baths. Throws
// std::invalid_argument naming the violated rule.
void validate_initial_state(const BathModel& bath, const EmitterConfig& emitters,
                            InitialTag tag);

// Builds the normalized starting state for a run: emitter amplitudes
// (1), (1, +/-1)/sqrt(2), (1,-1,1,-1)/2, or uniform 1/sqrt(N_e) depending on
// the tag, with the bath in vacuum (momentum-space zeros).
SingleExcitationState build_initial_state(const BathModel& bath,
                                          const EmitterConfig& emitters,
                                          InitialTag tag);
SingleExcitationState build_initial_state(const EvolveConfig& config);

// The four-emitter square layout parametrized by the quarter-diagonal n:
// (2n,0), (0,2n), (2n,4n), (4n,2n). The order matters; the alternating-sign
// initial state assigns its signs in this order.
std::vector<Eigen::Vector2i> four_qe_square(int n);

// Normalizations (N_a, N_b) of the symmetric and alternating collective bath
// modes seen by the four-emitter square at quadrant momentum q:
//   N_{a,b} = 2 sqrt(1 + cos(4 n q_x) cos(4 n q_y) +/- cos(4 n q_x) +/- cos(4 n q_y)),
// satisfying |N_b|^2 = 16 sin^2(2 n q_x) sin^2(2 n q_y).
std::pair<double, double> mode_normalization(const Eigen::Vector2d& q, int n);

// A ready-to-run configuration together with the analytic numbers the run is
// expected to reproduce (keys are short identifiers such as "plateau" or
// "markov_rate"; cases with no closed-form target carry an empty map).
struct PresetCase {
  std::string label;
  EvolveConfig config;
  std::map<std::string, double> expectations;
};

struct Preset {
  std::string name;
  std::string description;
  std::vector<PresetCase> cases;
};

// Named parameter families used by the command-line tool and the acceptance
// tests. Lattice sizes are chosen automatically so emitted waves cannot wrap
// around within t_max. Unknown names throw std::invalid_argument.
Preset preset(const std::string& name);

// Lattice size rule behind that auto-scaling: next power of two above
// 4 J t_max plus a margin for the emitter extent, capped at 8192.
int auto_lattice_size(double t_max, double J, const EmitterConfig& emitters);

std::vector<std::string> preset_names();

}  // namespace lqed

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "lqed/bath.hpp"

namespace lqed {

using cplx = std::complex<double>;

struct EmitterConfig {
  double g = 0.1;
  double delta = 0.0;
  // offsets from the lattice center; 1D baths read the x component only
  std::vector<Eigen::Vector2i> positions{Eigen::Vector2i(0, 0)};
  int count() const { return static_cast<int>(positions.size()); }
};

enum class InitialTag { SingleExcited, PlusPair, MinusPair, FourB, SymmetricN };

struct SingleExcitationState {
  enum class Space { Position, Momentum };
  BathModel bath;
  Eigen::VectorXcd emitters;
  Eigen::VectorXcd bath_amps;  // length N (1D) or N*N row-major, index iy*N+ix
  Space space = Space::Momentum;

  double norm2() const;
  void to_position();
  void to_momentum();
};

struct EvolveConfig {
  BathModel bath;
  EmitterConfig emitters;
  InitialTag initial = InitialTag::SingleExcited;
  double dt = 0.05;
  double t_max = 100.0;
  std::vector<double> snapshot_times;
  double kappa = 0.0;       // bath-mode loss rate
  double gamma_star = 0.0;  // emitter loss rate
  bool strang = true;       // symmetric splitting; false keeps phase-then-swap
  bool use_fft_interaction = false;  // full FFT round trip instead of the
                                     // site-projection pass (same arithmetic)
  int record_every = 1;
  int wrap_checks = 8;
  bool strict_wraparound = false;

  void validate() const;
};

struct BathSnapshot {
  double t = 0.0;
  int dim = 1;
  int N = 0;
  Eigen::VectorXd position_density;
  Eigen::VectorXd momentum_density;
};

struct Trajectory {
  EvolveConfig config;
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> emitter_amps;
  Eigen::VectorXcd initial_emitters;
  std::vector<BathSnapshot> snapshots;
  std::vector<double> norms;  // total squared norm at each sample
  std::vector<std::string> warnings;
  bool wraparound_warned = false;
  double wraparound_time = -1.0;
  std::shared_ptr<SingleExcitationState> final_state;  // null for binned runs

  // overlap of the emitter sector with its initial configuration; the
  // tracked amplitude whose square modulus the CSV and rate fits use
  cplx tracked_amplitude(std::size_t i) const;
};

Trajectory split_step_evolve(const EvolveConfig& config);

// Same stepper from an explicit initial state; negative dt steps backwards,
// which the reversibility checks rely on.
Trajectory split_step_evolve(const EvolveConfig& config,
                             SingleExcitationState state);

// Single-emitter reduction: one collective mode per energy bin with coupling
// g*sqrt(bin mode count)/sqrt(lattice size).
Trajectory freq_binned_evolve(const EvolveConfig& config, double bin_width);

struct LossSummary {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> emitter_pops;
  std::vector<double> excitation_weight;  // total remaining excited weight
  std::vector<double> vacuum_weight;
};

LossSummary apply_loss(const Trajectory& lossless, double kappa,
                       double gamma_star);

double extract_decay_rate(const Trajectory& traj);

Eigen::VectorXd snapshot(const SingleExcitationState& state,
                         SingleExcitationState::Space space);

}  // namespace lqed

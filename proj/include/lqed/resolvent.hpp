#pragma once

#include <complex>
#include <vector>

#include "lqed/selfenergy.hpp"

namespace lqed {

// Exact emitter dynamics through the resolvent G(z) = 1/(z - delta - Sigma(z)):
// pole hunting on the analytically continued sheets, residues, and the
// vertical branch-cut detour integrals that together reconstruct C(t).

enum class PoleKind { LowerBoundState, UpperBoundState, Unstable };

enum class CutId { Lower, Middle, Upper };

struct PoleContribution {
  PoleKind kind;
  Sheet sheet;
  cplx z;
  cplx residue;
};

// One vertical branch cut at Re z = line(), descending into the lower half
// plane.  Construction samples the discontinuity of G across the cut once;
// value_at(t) then reduces to a damped sum over the cached samples.
class BranchCutContribution {
 public:
  // pole_on_line > 0 marks a resolvent pole sitting exactly on the cut at
  // z = line - i*pole_on_line; the quadrature then takes the principal value
  // with mirrored nodes and subtracts the pole's two-face model, leaving the
  // full residue to be booked in the pole list.
  BranchCutContribution(const SelfEnergy& se, double delta, CutId cut,
                        double pole_on_line = 0.0);

  cplx value_at(double t) const;

  CutId cut() const { return cut_; }
  double line() const { return line_; }

  struct Sample {
    double x;       // depth below the real axis
    double weight;  // quadrature weight (includes any tail mapping factor)
    cplx disc;      // G_right - G_left at line - i x
  };
  const std::vector<Sample>& samples() const { return samples_; }

 private:
  CutId cut_;
  double line_;
  std::vector<Sample> samples_;
};

struct DynamicsDecomposition {
  SelfEnergy model;
  double delta;
  std::vector<PoleContribution> poles;
  std::vector<BranchCutContribution> cuts;

  cplx pole_sum(double t) const;
  cplx cut_sum(double t) const;
  cplx amplitude(double t) const;  // pole_sum + cut_sum
};

// Real poles outside the band, bracketed on both sides of it.  The list holds
// zero, one, or two entries; disappearance at critical detunings shows up as
// an absent entry.
std::vector<PoleContribution> find_bound_states(const SelfEnergy& se,
                                                double delta);

// Complex poles of the continued resolvent in the lower half plane, found by
// Newton iteration on each relevant sheet.  A pole lying on the imaginary
// axis is reported once, with the mean of the residues seen from the two
// adjacent sheets.
std::vector<PoleContribution> find_unstable_poles(const SelfEnergy& se,
                                                  double delta);

DynamicsDecomposition decompose(const SelfEnergy& se, double delta);

cplx branch_cut_contribution(const SelfEnergy& se, double delta, CutId cut,
                             double t);

cplx amplitude(const SelfEnergy& se, double delta, double t);

struct MarkovRate {
  double lamb_shift;
  double rate;
  bool divergent;  // true where the retarded limit fails to converge
};

MarkovRate markov_rate(const SelfEnergy& se, double delta);

// Windowed Fourier inversion of G(E + i*eps) along the real axis.  Slow to
// construct but independent of the pole/cut decomposition, which makes it the
// consistency oracle of choice; it also covers emitter offsets for which no
// continued-sheet evaluation exists.
class FourierInversion {
 public:
  FourierInversion(const SelfEnergy& se, double delta);
  cplx amplitude(double t) const;
  double epsilon() const { return eps_; }

 private:
  double delta_;
  double eps_;
  std::vector<double> energy_;
  std::vector<cplx> gdiff_;  // G(E + i eps) - 1/(E + i eps - delta)
};

// Decay rate of the antisymmetric diagonal pair state in 2D, from the reduced
// pole condition on the imaginary axis.  Returns Gamma_sb = -2 Im z.
double subradiant_pole_2d(double g, double J, int n);

namespace closed_form {

// band-center non-Markovian single-emitter rate in 2D
double nonmarkov_rate_2d(double g, double J);

// bound-state energies near the 2D band edges, from the logarithmic DOS edge
double bound_state_energy_2d_lower(double delta, double g, double J);
double bound_state_energy_2d_upper(double delta, double g, double J);

// large-n asymptote of the diagonal-pair subradiant rate in 2D
double subradiant_rate_asymptote_2d(double g, double J, int n);

// residue of the four-emitter dark pole
double four_emitter_residue(double g, double J, int n);

// retardation-reduced residue of the 1D subradiant pair pole
double pair_residue_1d(double g, double J, double delta, int n12);

// detuning window (measured from the band edge) inside which the 1D
// antisymmetric pair keeps its lower bound state
double critical_detuning_1d(double g, double J, int n12);

}  // namespace closed_form

}  // namespace lqed

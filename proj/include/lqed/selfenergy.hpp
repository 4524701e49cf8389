#pragma once

#include <Eigen/Dense>
#include <complex>

#include "lqed/specfun.hpp"

namespace lqed {

// A self-energy evaluation together with the point it was taken at.
// For z approaching the real axis from above, real part = Lamb shift and
// -2 Im = decay rate.
struct SigmaValue {
  cplx z;
  Sheet sheet = Sheet::I;
  cplx value;

  double lamb_shift() const { return value.real(); }
  double decay_rate() const { return -2.0 * value.imag(); }
};

// Branch conventions for the closed forms: square roots are taken so the
// functions are analytic everywhere off the real band segment, matching the
// retarded lattice sum.  Evaluating exactly on the real axis inside the band
// follows the principal square root, which is the limit from above for
// E > 0 and from below for E < 0; use SelfEnergy::retarded for uniform
// upper-side limits.

cplx sigma_e_1d(cplx z, double g, double J, Sheet sheet = Sheet::I);
cplx sigma12_1d(cplx z, int n12, double g, double J, Sheet sheet = Sheet::I);

cplx sigma_e_2d(cplx z, double g, double J, Sheet sheet = Sheet::I);

// Crossed-emitter self-energy for a general lattice offset.  Closed forms
// cover (0,0), (1,0), (1,1) and the diagonal family (n,n) on every sheet;
// other offsets integrate the exact reduced kernel and support sheet I only.
cplx sigma12_2d(cplx z, Eigen::Vector2i n12, double g, double J,
                Sheet sheet = Sheet::I);

// Sigma_e +- Sigma_12 for the symmetric (+1) and antisymmetric (-1)
// two-emitter combinations.
cplx sigma_pm(cplx z, int n12, int sign, double g, double J,
              Sheet sheet = Sheet::I);
cplx sigma_pm(cplx z, Eigen::Vector2i n12, int sign, double g, double J,
              Sheet sheet = Sheet::I);

// Self-energy of the alternating four-emitter mode on the 2n-spaced square.
cplx sigma_four(cplx z, int n, double g, double J);

// Small-energy approximation of sigma12_2d just above the lower band edge,
// (g^2 / 4iJ) H0^(1)(|n12| sqrt(E/J)) with E the distance above the edge.
cplx sigma12_edge_hankel(double energy_above_edge, Eigen::Vector2i n12,
                         double g, double J);

// Emitter arrangement bound to its self-energy function.  This is the
// object the resolvent machinery works against.
class SelfEnergy {
 public:
  enum class Kind {
    Single1D,
    Pair1D,
    PlusMinus1D,
    Single2D,
    Pair2D,
    PlusMinus2D,
    Four2D
  };

  static SelfEnergy single_1d(double g, double J);
  static SelfEnergy pair_1d(int n12, double g, double J);
  static SelfEnergy plus_minus_1d(int n12, int sign, double g, double J);
  static SelfEnergy single_2d(double g, double J);
  static SelfEnergy pair_2d(Eigen::Vector2i n12, double g, double J);
  static SelfEnergy plus_minus_2d(Eigen::Vector2i n12, int sign, double g,
                                  double J);
  static SelfEnergy four_2d(int n, double g, double J);

  cplx value(cplx z, Sheet sheet = Sheet::I) const;
  cplx derivative(cplx z, Sheet sheet = Sheet::I) const;

  // Retarded limit at real energy, Richardson-extrapolated in the
  // regulator: 2 Sigma(E + i eps/2) - Sigma(E + i eps) with eps = 1e-6 J.
  SigmaValue retarded(double energy) const;

  Kind kind() const { return kind_; }
  int dim() const;
  double band_edge() const;
  double g() const { return g_; }
  double J() const { return J_; }
  Eigen::Vector2i offset() const { return offset_; }
  int sign() const { return sign_; }
  int scale() const { return scale_; }

 private:
  SelfEnergy(Kind k, double g, double J, Eigen::Vector2i offset, int sign,
             int scale);

  Kind kind_;
  double g_, J_;
  Eigen::Vector2i offset_;  // pair offset; x component used in 1D
  int sign_ = +1;           // +1 symmetric, -1 antisymmetric
  int scale_ = 1;           // four-emitter spacing parameter n
};

}  // namespace lqed

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lqed {

// Tight-binding bosonic bath on a 1D chain or 2D square lattice with
// periodic boundaries and dispersion w(k) = -2J * sum_i cos(k_i).
struct BathModel {
  int dim = 2;       // 1 or 2
  double J = 1.0;    // hopping, J > 0
  int N = 256;       // sites per axis, N >= 2

  static BathModel chain(int N, double J = 1.0);
  static BathModel square(int N, double J = 1.0);

  // half band width: 2J in 1D, 4J in 2D
  double band_edge() const { return 2.0 * dim * J; }
};

// Momentum with as many components as the bath dimension.
struct Momentum {
  int dim = 0;
  double kx = 0.0;
  double ky = 0.0;

  static Momentum one_d(double k) { return {1, k, 0.0}; }
  static Momentum two_d(double kx, double ky) { return {2, kx, ky}; }
};

double dispersion(const BathModel& bath, const Momentum& k);

// gradient of the dispersion; one entry per dimension
Eigen::VectorXd group_velocity(const BathModel& bath, const Momentum& k);

// Normalised density of states of the infinite lattice.  Returns 0 outside
// the band and +infinity at divergent points (1D band edges, 2D band
// centre); the 2D band edge value is the finite limit from inside.
double dos(const BathModel& bath, double energy);

// All N^dim grid momenta k_i = 2*pi*n_i/N with n_i in [-N/2, N/2), listed
// with each axis ascending and the last axis fastest.
std::vector<Momentum> momentum_grid(const BathModel& bath);

}  // namespace lqed

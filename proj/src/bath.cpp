#include "lqed/bath.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lqed/specfun.hpp"

namespace lqed {

namespace {

void validate(const BathModel& b) {
  if (b.dim != 1 && b.dim != 2)
    throw std::invalid_argument("bath dimension must be 1 or 2");
  if (!(b.J > 0)) throw std::invalid_argument("bath hopping J must be > 0");
  if (b.N < 2) throw std::invalid_argument("bath needs at least 2 sites per axis");
}

void check_dim(const BathModel& b, const Momentum& k) {
  if (k.dim != b.dim)
    throw std::invalid_argument("momentum dimension does not match bath");
}

}  // namespace

BathModel BathModel::chain(int N, double J) {
  BathModel b{1, J, N};
  validate(b);
  return b;
}

BathModel BathModel::square(int N, double J) {
  BathModel b{2, J, N};
  validate(b);
  return b;
}

double dispersion(const BathModel& bath, const Momentum& k) {
  validate(bath);
  check_dim(bath, k);
  double c = std::cos(k.kx);
  if (bath.dim == 2) c += std::cos(k.ky);
  return -2.0 * bath.J * c;
}

Eigen::VectorXd group_velocity(const BathModel& bath, const Momentum& k) {
  validate(bath);
  check_dim(bath, k);
  Eigen::VectorXd v(bath.dim);
  v(0) = 2.0 * bath.J * std::sin(k.kx);
  if (bath.dim == 2) v(1) = 2.0 * bath.J * std::sin(k.ky);
  return v;
}

double dos(const BathModel& bath, double energy) {
  validate(bath);
  const double edge = bath.band_edge();
  const double inf = std::numeric_limits<double>::infinity();
  if (std::fabs(energy) > edge) return 0.0;
  if (bath.dim == 1) {
    const double d = 4.0 * bath.J * bath.J - energy * energy;
    if (d <= 0.0) return inf;  // band edge, divergent from inside
    return 1.0 / (std::numbers::pi * std::sqrt(d));
  }
  if (energy == 0.0) return inf;  // van Hove singularity
  const double u = energy / (4.0 * bath.J);
  return elliptic_k(1.0 - u * u) /
         (2.0 * std::numbers::pi * std::numbers::pi * bath.J);
}

std::vector<Momentum> momentum_grid(const BathModel& bath) {
  validate(bath);
  const int N = bath.N;
  const double step = 2.0 * std::numbers::pi / N;
  std::vector<Momentum> grid;
  if (bath.dim == 1) {
    grid.reserve(N);
    for (int i = 0; i < N; ++i) grid.push_back(Momentum::one_d((i - N / 2) * step));
    return grid;
  }
  grid.reserve(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      grid.push_back(Momentum::two_d((i - N / 2) * step, (j - N / 2) * step));
  return grid;
}

}  // namespace lqed

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "lqed/bath.hpp"
#include "lqed/resolvent.hpp"
#include "lqed/scenarios.hpp"
#include "lqed/selfenergy.hpp"

using lqed::BathModel;
using lqed::cplx;
using lqed::Momentum;
using lqed::SelfEnergy;
using lqed::Sheet;

namespace {

constexpr double pi = 3.14159265358979323846;

// Brillouin-zone Riemann sum of g^2 exp(i k.n) / (z - w(k)).  Off the real
// axis the summand is smooth and periodic, so the sum converges to the
// infinite-lattice self-energy exponentially fast in N.
cplx lattice_sigma(const BathModel& bath, cplx z, Eigen::Vector2i n,
                   double g) {
  cplx acc = 0.0;
  const std::vector<Momentum> grid = lqed::momentum_grid(bath);
  for (const Momentum& k : grid) {
    const double phase = k.kx * n.x() + k.ky * n.y();
    acc += std::exp(cplx(0.0, phase)) / (z - lqed::dispersion(bath, k));
  }
  return g * g * acc / static_cast<double>(grid.size());
}

cplx lattice_sigma_four(const BathModel& bath, cplx z, int n, double g) {
  const std::vector<Eigen::Vector2i> pos = lqed::four_qe_square(n);
  const double s[4] = {0.5, -0.5, 0.5, -0.5};
  cplx acc = 0.0;
  const std::vector<Momentum> grid = lqed::momentum_grid(bath);
  for (const Momentum& k : grid) {
    cplx f = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double phase = k.kx * pos[j].x() + k.ky * pos[j].y();
      f += s[j] * std::exp(cplx(0.0, phase));
    }
    acc += std::norm(f) / (z - lqed::dispersion(bath, k));
  }
  return g * g * acc / static_cast<double>(grid.size());
}

}  // namespace

TEST_CASE("1D closed forms match the direct lattice sum") {
  const BathModel bath = BathModel::chain(65536, 1.0);
  const double g = 0.3;
  const std::vector<cplx> zs{{0.4, -0.3}, {-1.2, -0.5}, {1.9, -0.2},
                             {0.0, 0.35}};
  for (const cplx z : zs) {
    CHECK(std::abs(lqed::sigma_e_1d(z, g, 1.0) -
                   lattice_sigma(bath, z, {0, 0}, g)) < 1e-6);
    for (int n : {1, 2, 5, 42}) {
      CHECK(std::abs(lqed::sigma12_1d(z, n, g, 1.0) -
                     lattice_sigma(bath, z, {n, 0}, g)) < 1e-6);
    }
  }
}

TEST_CASE("2D closed forms and the quadrature fallback match the lattice sum") {
  const BathModel bath = BathModel::square(512, 1.0);
  const double g = 0.25;
  const std::vector<cplx> zs{{0.3, -0.4}, {-2.1, -0.5}, {3.0, -0.3}};
  for (const cplx z : zs) {
    CHECK(std::abs(lqed::sigma_e_2d(z, g, 1.0) -
                   lattice_sigma(bath, z, {0, 0}, g)) < 1e-6);
    for (Eigen::Vector2i n : {Eigen::Vector2i(1, 0), Eigen::Vector2i(1, 1),
                              Eigen::Vector2i(3, 3), Eigen::Vector2i(8, 8)}) {
      CHECK(std::abs(lqed::sigma12_2d(z, n, g, 1.0) -
                     lattice_sigma(bath, z, n, g)) < 1e-6);
    }
  }

  // offsets outside the closed-form families take the reduced-kernel path
  const cplx z(0.7, -0.45);
  for (Eigen::Vector2i n : {Eigen::Vector2i(2, 1), Eigen::Vector2i(4, 3)}) {
    CHECK(std::abs(lqed::sigma12_2d(z, n, g, 1.0) -
                   lattice_sigma(bath, z, n, g)) < 1e-6);
  }

  CHECK(std::abs(lqed::sigma12_2d(z, {30, 30}, g, 1.0) -
                 lattice_sigma(bath, z, {30, 30}, g)) < 1e-6);
}

TEST_CASE("four-emitter mode self-energy equals the projected mode sum") {
  const BathModel bath = BathModel::square(512, 1.0);
  const double g = 0.3;
  for (int n : {1, 2}) {
    for (const cplx z : {cplx(0.3, -0.4), cplx(-1.0, -0.5)}) {
      CHECK(std::abs(lqed::sigma_four(z, n, g, 1.0) -
                     lattice_sigma_four(bath, z, n, g)) < 1e-6);
    }
  }
}

TEST_CASE("symmetric and antisymmetric combinations are sums and differences") {
  const cplx z(0.5, -0.3);
  const double g = 0.2;
  CHECK(std::abs(lqed::sigma_pm(z, 3, +1, g, 1.0) -
                 (lqed::sigma_e_1d(z, g, 1.0) +
                  lqed::sigma12_1d(z, 3, g, 1.0))) < 1e-14);
  CHECK(std::abs(lqed::sigma_pm(z, 3, -1, g, 1.0) -
                 (lqed::sigma_e_1d(z, g, 1.0) -
                  lqed::sigma12_1d(z, 3, g, 1.0))) < 1e-14);
  const Eigen::Vector2i off(1, 1);
  CHECK(std::abs(lqed::sigma_pm(z, off, -1, g, 1.0) -
                 (lqed::sigma_e_2d(z, g, 1.0) -
                  lqed::sigma12_2d(z, off, g, 1.0))) < 1e-14);
}

TEST_CASE("odd symmetry in z holds for the symmetric-band lattice") {
  const cplx z(0.8, -0.35);
  CHECK(std::abs(lqed::sigma_e_1d(-z, 0.3, 1.0) +
                 lqed::sigma_e_1d(z, 0.3, 1.0)) < 1e-13);
  CHECK(std::abs(lqed::sigma_e_2d(-z, 0.3, 1.0) +
                 lqed::sigma_e_2d(z, 0.3, 1.0)) < 1e-13);
}

TEST_CASE("continued sheets join continuously across the band cut") {
  const double eta = 1e-8;
  const double g = 0.3;

  // continuation through the negative-energy half lands on sheet II
  for (double E : {-1.0, -0.4}) {
    CHECK(std::abs(lqed::sigma_e_1d(cplx(E, eta), g, 1.0, Sheet::I) -
                   lqed::sigma_e_1d(cplx(E, -eta), g, 1.0, Sheet::II)) < 1e-6);
    CHECK(std::abs(lqed::sigma12_1d(cplx(E, eta), 3, g, 1.0, Sheet::I) -
                   lqed::sigma12_1d(cplx(E, -eta), 3, g, 1.0, Sheet::II)) <
          1e-6);
    CHECK(std::abs(lqed::sigma_e_2d(cplx(E, eta), g, 1.0, Sheet::I) -
                   lqed::sigma_e_2d(cplx(E, -eta), g, 1.0, Sheet::II)) < 1e-6);
    CHECK(std::abs(
              lqed::sigma12_2d(cplx(E, eta), {2, 2}, g, 1.0, Sheet::I) -
              lqed::sigma12_2d(cplx(E, -eta), {2, 2}, g, 1.0, Sheet::II)) <
          1e-6);
  }

  // and through the positive half onto sheet III
  for (double E : {0.7, 1.6}) {
    CHECK(std::abs(lqed::sigma_e_1d(cplx(E, eta), g, 1.0, Sheet::I) -
                   lqed::sigma_e_1d(cplx(E, -eta), g, 1.0, Sheet::III)) <
          1e-6);
    CHECK(std::abs(lqed::sigma_e_2d(cplx(E, eta), g, 1.0, Sheet::I) -
                   lqed::sigma_e_2d(cplx(E, -eta), g, 1.0, Sheet::III)) <
          1e-6);
  }
}

TEST_CASE("retarded decay rate reduces to the golden-rule density of states") {
  const double g = 0.2;

  const SelfEnergy one_d = SelfEnergy::single_1d(g, 1.0);
  const BathModel chain = BathModel::chain(8, 1.0);
  for (double E : {0.0, 0.5, -1.3}) {
    const double rate = one_d.retarded(E).decay_rate();
    CHECK(rate == doctest::Approx(2.0 * pi * g * g *
                                  lqed::dos(chain, E)).epsilon(1e-5));
  }

  const SelfEnergy two_d = SelfEnergy::single_2d(g, 1.0);
  const BathModel square = BathModel::square(8, 1.0);
  for (double E : {-1.0, 1.8}) {
    const double rate = two_d.retarded(E).decay_rate();
    CHECK(rate == doctest::Approx(2.0 * pi * g * g *
                                  lqed::dos(square, E)).epsilon(1e-5));
  }

  // inside the 1D band the retarded self-energy is purely imaginary
  CHECK(std::fabs(one_d.retarded(0.7).lamb_shift()) < 1e-6);
}

TEST_CASE("band-center phase relations of the 1D pair") {
  const cplx z0(0.0, 1e-8);
  const double g = 0.1;
  const cplx se = lqed::sigma_e_1d(z0, g, 1.0);
  const cplx i(0.0, 1.0);
  cplx expect = 1.0;
  for (int n = 1; n <= 4; ++n) {
    expect *= i;
    const cplx ratio = lqed::sigma12_1d(z0, n, g, 1.0) / se;
    CHECK(std::abs(ratio - expect) < 1e-6);
  }

  // n = 42 makes the symmetric combination exactly dark at band center
  CHECK(std::abs(lqed::sigma_pm(z0, 42, +1, g, 1.0)) < 1e-6);
}

TEST_CASE("four-emitter mode decouples at band center") {
  CHECK(std::abs(lqed::sigma_four(cplx(0.0, 1e-8), 2, 0.3, 1.0)) < 1e-5);
}

TEST_CASE("edge Hankel approximation tracks the full crossed self-energy") {
  const double g = 0.2;
  const double E = 0.01;
  const Eigen::Vector2i n(5, 5);
  const cplx full =
      lqed::sigma12_2d(cplx(-4.0 + E, 1e-9), n, g, 1.0, Sheet::I);
  const cplx approx = lqed::sigma12_edge_hankel(E, n, g, 1.0);
  CHECK(std::abs(full - approx) < 0.05 * std::abs(full));
}

TEST_CASE("critical pair detuning agrees with the edge limit of the "
          "antisymmetric self-energy") {
  for (auto [g, n] : std::vector<std::pair<double, int>>{{0.3, 4}, {0.1, 42}}) {
    const double eps = 1e-6;
    auto edge_val = [&](double e) {
      return -lqed::sigma_pm(cplx(-2.0 - e, 0.0), n, -1, g, 1.0).real();
    };
    const double limit = 2.0 * edge_val(0.25 * eps) - edge_val(eps);
    const double window = lqed::closed_form::critical_detuning_1d(g, 1.0, n);
    CHECK(std::fabs(std::fabs(limit) - window) < 1e-5 * window);
  }
}

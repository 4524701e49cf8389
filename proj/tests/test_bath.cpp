#include <doctest.h>

#include <cmath>
#include <vector>

#include "lqed/bath.hpp"
#include "lqed/quadrature.hpp"

using lqed::BathModel;
using lqed::Momentum;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("dispersion spans [-2dJ, 2dJ] with the expected special values") {
  const BathModel chain = BathModel::chain(64, 0.7);
  CHECK(lqed::dispersion(chain, Momentum::one_d(0.0)) ==
        doctest::Approx(-1.4));
  CHECK(lqed::dispersion(chain, Momentum::one_d(pi)) == doctest::Approx(1.4));
  CHECK(lqed::dispersion(chain, Momentum::one_d(0.5 * pi)) ==
        doctest::Approx(0.0));
  CHECK(chain.band_edge() == doctest::Approx(1.4));

  const BathModel square = BathModel::square(64, 1.0);
  CHECK(lqed::dispersion(square, Momentum::two_d(0.0, 0.0)) ==
        doctest::Approx(-4.0));
  CHECK(lqed::dispersion(square, Momentum::two_d(pi, pi)) ==
        doctest::Approx(4.0));
  CHECK(lqed::dispersion(square, Momentum::two_d(pi, 0.0)) ==
        doctest::Approx(0.0));
  CHECK(square.band_edge() == doctest::Approx(4.0));
}

TEST_CASE("group velocity is the dispersion gradient") {
  const BathModel chain = BathModel::chain(64, 1.0);
  const Eigen::VectorXd v1 = lqed::group_velocity(chain,
                                                  Momentum::one_d(0.5 * pi));
  REQUIRE(v1.size() == 1);
  CHECK(v1(0) == doctest::Approx(2.0));

  const BathModel square = BathModel::square(64, 0.5);
  const Eigen::VectorXd v2 =
      lqed::group_velocity(square, Momentum::two_d(0.5 * pi, -0.25 * pi));
  REQUIRE(v2.size() == 2);
  CHECK(v2(0) == doctest::Approx(1.0));
  CHECK(v2(1) == doctest::Approx(2.0 * 0.5 * std::sin(-0.25 * pi)));

  const Eigen::VectorXd v0 = lqed::group_velocity(square,
                                                  Momentum::two_d(0.0, 0.0));
  CHECK(v0.norm() == doctest::Approx(0.0));
}

TEST_CASE("1D density of states has inverse-sqrt edges and unit weight") {
  const double J = 1.3;
  const BathModel chain = BathModel::chain(64, J);

  CHECK(lqed::dos(chain, 0.0) == doctest::Approx(1.0 / (2.0 * pi * J)));
  const double e = 1.1;
  CHECK(lqed::dos(chain, e) ==
        doctest::Approx(1.0 / (pi * std::sqrt(4.0 * J * J - e * e))));
  CHECK(lqed::dos(chain, e) == doctest::Approx(lqed::dos(chain, -e)));

  CHECK(lqed::dos(chain, 2.0 * J + 1e-9) == 0.0);
  CHECK(lqed::dos(chain, -2.0 * J - 1e-9) == 0.0);
  CHECK(std::isinf(lqed::dos(chain, 2.0 * J)));

  const double weight = lqed::quad::integrate(
      [&](double x) { return lqed::dos(chain, x); }, -2.0 * J, 2.0 * J);
  CHECK(std::fabs(weight - 1.0) < 1e-8);
}

TEST_CASE("2D density of states matches the 1D self-convolution") {
  const double J = 1.0;
  const BathModel chain = BathModel::chain(64, J);
  const BathModel square = BathModel::square(64, J);

  // stacking the two axes convolves their chain spectra
  auto conv = [&](double E) {
    const double lo = std::max(-2.0 * J, E - 2.0 * J);
    const double hi = std::min(2.0 * J, E + 2.0 * J);
    lqed::quad::Options opt;
    opt.abs_tol = 1e-11;
    opt.rel_tol = 1e-11;
    return lqed::quad::integrate(
        [&](double x) { return lqed::dos(chain, x) * lqed::dos(chain, E - x); },
        lo, hi, opt);
  };

  for (double E : {0.6, 1.0, 2.5, 3.6, -1.7, -3.2}) {
    CHECK(lqed::dos(square, E) == doctest::Approx(conv(E)).epsilon(1e-6));
  }

  CHECK(lqed::dos(square, 1.2) == doctest::Approx(lqed::dos(square, -1.2)));
  CHECK(std::isinf(lqed::dos(square, 0.0)));
  CHECK(lqed::dos(square, 4.0) == doctest::Approx(1.0 / (4.0 * pi * J)));
  CHECK(lqed::dos(square, 4.0 + 1e-9) == 0.0);
}

TEST_CASE("momentum grid enumerates k = 2 pi n / N with the last axis fastest") {
  const BathModel chain = BathModel::chain(4);
  const std::vector<Momentum> g1 = lqed::momentum_grid(chain);
  REQUIRE(g1.size() == 4);
  CHECK(g1[0].kx == doctest::Approx(-pi));
  CHECK(g1[1].kx == doctest::Approx(-0.5 * pi));
  CHECK(g1[2].kx == doctest::Approx(0.0));
  CHECK(g1[3].kx == doctest::Approx(0.5 * pi));
  for (const Momentum& k : g1) CHECK(k.dim == 1);

  const BathModel square = BathModel::square(2);
  const std::vector<Momentum> g2 = lqed::momentum_grid(square);
  REQUIRE(g2.size() == 4);
  CHECK(g2[0].kx == doctest::Approx(-pi));
  CHECK(g2[0].ky == doctest::Approx(-pi));
  CHECK(g2[1].kx == doctest::Approx(-pi));
  CHECK(g2[1].ky == doctest::Approx(0.0));
  CHECK(g2[2].kx == doctest::Approx(0.0));
  CHECK(g2[2].ky == doctest::Approx(-pi));
  CHECK(g2[3].kx == doctest::Approx(0.0));
  CHECK(g2[3].ky == doctest::Approx(0.0));

  // the grid average of the dispersion vanishes for any N
  const BathModel sq8 = BathModel::square(8, 0.9);
  double mean = 0.0;
  for (const Momentum& k : lqed::momentum_grid(sq8))
    mean += lqed::dispersion(sq8, k);
  CHECK(std::fabs(mean) < 1e-12);
}

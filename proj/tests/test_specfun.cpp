#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lqed/quadrature.hpp"
#include "lqed/specfun.hpp"

using lqed::cplx;
using lqed::Sheet;

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double euler_gamma = 0.5772156649015329;

cplx k_by_quadrature(cplx m) {
  return lqed::quad::integrate(
      [m](double phi) {
        const double s = std::sin(phi);
        return 1.0 / std::sqrt(1.0 - m * s * s);
      },
      0.0, 0.5 * pi);
}

cplx e_by_quadrature(cplx m) {
  return lqed::quad::integrate(
      [m](double phi) {
        const double s = std::sin(phi);
        return std::sqrt(1.0 - m * s * s);
      },
      0.0, 0.5 * pi);
}

}  // namespace

TEST_CASE("real complete elliptic integrals reproduce reference values") {
  CHECK(lqed::elliptic_k(0.0) == doctest::Approx(0.5 * pi).epsilon(1e-14));
  CHECK(lqed::elliptic_e(0.0) == doctest::Approx(0.5 * pi).epsilon(1e-14));
  CHECK(lqed::elliptic_e(1.0) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK(lqed::elliptic_k(0.5) ==
        doctest::Approx(1.8540746773013719).epsilon(1e-14));
  CHECK(lqed::elliptic_e(0.5) ==
        doctest::Approx(1.3506438810476755).epsilon(1e-14));
  CHECK(lqed::elliptic_k(0.64) ==
        doctest::Approx(1.9953027776647294).epsilon(1e-14));

  CHECK(lqed::elliptic_k(-3.0) == doctest::Approx(
      k_by_quadrature(cplx(-3.0, 0.0)).real()).epsilon(1e-12));
}

TEST_CASE("Legendre relation holds across the parameter range") {
  for (double m : {0.05, 0.2, 0.44, 0.5, 0.64, 0.9, 0.99}) {
    const double lhs = lqed::elliptic_e(m) * lqed::elliptic_k(1.0 - m) +
                       lqed::elliptic_e(1.0 - m) * lqed::elliptic_k(m) -
                       lqed::elliptic_k(m) * lqed::elliptic_k(1.0 - m);
    CHECK(std::fabs(lhs - 0.5 * pi) < 1e-10);
  }
}

TEST_CASE("complex elliptic integrals agree with direct quadrature") {
  const std::vector<cplx> points{{0.3, 0.4},  {-2.0, 1.0}, {2.0, 2.0},
                                 {0.9, -0.2}, {-30.0, 2.0}, {1.0, 1e-3}};
  for (const cplx m : points) {
    CHECK(std::abs(lqed::elliptic_k(m) - k_by_quadrature(m)) < 1e-10);
    CHECK(std::abs(lqed::elliptic_e(m) - e_by_quadrature(m)) < 1e-10);
  }
}

TEST_CASE("principal branch is conjugate-symmetric and cut on [1, inf)") {
  const cplx m(2.5, 1e-9);
  CHECK(std::abs(lqed::elliptic_k(std::conj(m)) -
                 std::conj(lqed::elliptic_k(m))) < 1e-12);
  // the jump across the cut is nonzero
  CHECK(std::abs(lqed::elliptic_k(m) - lqed::elliptic_k(std::conj(m))) > 0.1);
  CHECK_THROWS_AS((void)lqed::elliptic_k(cplx(2.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS((void)lqed::elliptic_e(cplx(3.0, 0.0)), std::domain_error);
}

TEST_CASE("derivatives satisfy the first-order elliptic identities") {
  const std::vector<cplx> points{{0.3, 0.2}, {-1.5, 0.7}, {0.8, -0.4}};
  for (const cplx m : points) {
    const cplx k = lqed::elliptic_k(m);
    const cplx e = lqed::elliptic_e(m);
    const cplx dk = lqed::elliptic_k_deriv(m);
    const cplx de = lqed::elliptic_e_deriv(m);
    CHECK(std::abs(de - (e - k) / (2.0 * m)) < 1e-12);
    CHECK(std::abs(dk - (e - (1.0 - m) * k) / (2.0 * m * (1.0 - m))) < 1e-12);
  }
}

TEST_CASE("sheet combinations add the expected imaginary-period jumps") {
  const cplx m(0.3, 0.1);
  const cplx k = lqed::elliptic_k(m);
  const cplx kc = lqed::elliptic_k(1.0 - m);
  const cplx e = lqed::elliptic_e(m);
  const cplx ec = lqed::elliptic_e(1.0 - m);
  const cplx i2(0.0, 2.0);

  CHECK(std::abs(lqed::elliptic_k_sheet(m, Sheet::I) - k) < 1e-14);
  CHECK(std::abs(lqed::elliptic_k_sheet(m, Sheet::II) - (k + i2 * kc)) <
        1e-13);
  CHECK(std::abs(lqed::elliptic_k_sheet(m, Sheet::III) - (k - i2 * kc)) <
        1e-13);
  CHECK(std::abs(lqed::elliptic_e_sheet(m, Sheet::II) -
                 (e + i2 * (kc - ec))) < 1e-13);
  CHECK(std::abs(lqed::elliptic_e_sheet(m, Sheet::III) -
                 (e - i2 * (kc - ec))) < 1e-13);

  // sheet derivative equals the finite-difference slope along the sheet
  const cplx h(1e-6, 0.0);
  const cplx fd = (lqed::elliptic_k_sheet(m + h, Sheet::II) -
                   lqed::elliptic_k_sheet(m - h, Sheet::II)) /
                  (2.0 * h);
  CHECK(std::abs(lqed::elliptic_k_sheet_deriv(m, Sheet::II) - fd) < 1e-7);
}

TEST_CASE("lambert_w0 inverts w exp(w) over its domain") {
  const std::vector<double> xs{-0.36, -0.2, -1e-8, 1e-8, 0.5,
                               1.0,   2.718281828459045, 10.0, 1e3, 1e8};
  for (double x : xs) {
    const double w = lqed::lambert_w0(x);
    CHECK(std::fabs(w * std::exp(w) - x) <= 1e-12 * std::max(1.0, std::fabs(x)));
  }
  CHECK(lqed::lambert_w0(0.0) == 0.0);
  CHECK(lqed::lambert_w0(1.0) ==
        doctest::Approx(0.5671432904097838).epsilon(1e-13));
  CHECK(lqed::lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(lqed::lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-5));
  CHECK_THROWS_AS((void)lqed::lambert_w0(-0.4), std::domain_error);
}

TEST_CASE("bessel_j0 matches its integral representation") {
  CHECK(lqed::bessel_j0(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(lqed::bessel_j0(2.404825557695773)) < 1e-12);

  for (double x : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    const double oracle = lqed::quad::integrate(
        [x](double th) { return std::cos(x * std::sin(th)); }, 0.0, pi) / pi;
    CHECK(lqed::bessel_j0(x) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("bessel_y0 reproduces reference values and the small-x logarithm") {
  CHECK(lqed::bessel_y0(1.0) ==
        doctest::Approx(0.08825696421567696).epsilon(1e-12));
  CHECK(lqed::bessel_y0(2.0) ==
        doctest::Approx(0.5103756726497451).epsilon(1e-12));

  const double x = 1e-4;
  const double lead = (2.0 / pi) * (std::log(0.5 * x) + euler_gamma);
  CHECK(lqed::bessel_y0(x) == doctest::Approx(lead).epsilon(1e-7));
}

TEST_CASE("hankel1_0 combines J0 and Y0 and obeys the far-field asymptote") {
  const double x = 3.7;
  const cplx h = lqed::hankel1_0(x);
  CHECK(h.real() == doctest::Approx(lqed::bessel_j0(x)).epsilon(1e-14));
  CHECK(h.imag() == doctest::Approx(lqed::bessel_y0(x)).epsilon(1e-14));

  const double far = 50.0;
  const cplx asym = std::sqrt(2.0 / (pi * far)) *
                    std::exp(cplx(0.0, far - 0.25 * pi));
  CHECK(std::abs(lqed::hankel1_0(far) - asym) < 5e-3 * std::abs(asym));
}

#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "lqed/quadrature.hpp"

using lqed::quad::Options;
using lqed::quad::integrate;
using lqed::quad::integrate_split;
using lqed::quad::integrate_to_infinity;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("smooth real integrands converge to machine-level accuracy") {
  const double s = integrate([](double x) { return std::sin(x); }, 0.0, pi);
  CHECK(std::fabs(s - 2.0) < 1e-12);

  const double p = integrate([](double x) { return 4.0 / (1.0 + x * x); },
                             0.0, 1.0);
  CHECK(std::fabs(p - pi) < 1e-12);

  const double g = integrate([](double x) { return std::exp(-x * x); },
                             -6.0, 6.0);
  CHECK(std::fabs(g - std::sqrt(pi)) < 1e-12);
}

TEST_CASE("complex-valued integrands are handled natively") {
  using cplx = std::complex<double>;
  const cplx v = integrate(
      [](double x) { return std::exp(cplx(0.0, x)); }, 0.0, 1.0);
  const cplx exact(std::sin(1.0), 1.0 - std::cos(1.0));
  CHECK(std::abs(v - exact) < 1e-12);
}

TEST_CASE("adaptive refinement resolves integrable endpoint singularities") {
  const double l = integrate([](double x) { return -std::log(x); }, 0.0, 1.0);
  CHECK(std::fabs(l - 1.0) < 1e-9);

  const double r = integrate([](double x) { return 1.0 / std::sqrt(x); },
                             0.0, 1.0);
  CHECK(std::fabs(r - 2.0) < 1e-8);
}

TEST_CASE("integrate_split places interval boundaries on discontinuities") {
  auto step = [](double x) { return x < 0.5 ? 1.0 : 2.0; };
  const double v = integrate_split(step, 0.0, 1.0, {0.5});
  CHECK(std::fabs(v - 1.5) < 1e-12);

  // splits outside the range are ignored
  const double w = integrate_split([](double x) { return x; }, 0.0, 1.0,
                                   {-3.0, 0.25, 7.0});
  CHECK(std::fabs(w - 0.5) < 1e-12);
}

TEST_CASE("integrate_to_infinity matches known tail integrals") {
  const double a = integrate_to_infinity(
      [](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0);
  CHECK(std::fabs(a - 0.5 * pi) < 1e-10);

  const double b = integrate_to_infinity(
      [](double x) { return 1.0 / (x * x); }, 1.0, 10.0);
  CHECK(std::fabs(b - 1.0) < 1e-10);

  const double c = integrate_to_infinity(
      [](double x) { return std::exp(-x); }, 0.0, 5.0);
  CHECK(std::fabs(c - 1.0) < 1e-10);
}

TEST_CASE("exhausting the refinement budget raises with the error bound") {
  Options opt;
  opt.max_depth = 3;
  bool threw = false;
  try {
    integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opt);
  } catch (const std::runtime_error& e) {
    threw = true;
    CHECK(std::string(e.what()).find("quadrature did not converge") !=
          std::string::npos);
  }
  CHECK(threw);
}

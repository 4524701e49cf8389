#include "lqed/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lqed/quadrature.hpp"

namespace lqed {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = 0.577215664901532860606512;

bool on_real_cut(cplx m) {
  return m.imag() == 0.0 && m.real() >= 1.0;
}

// Arithmetic-geometric mean of (1, sqrt(1-m)), tracking the c_n sum that
// turns K into E.  The square root at each step takes the branch closest to
// the running arithmetic mean, which keeps the iteration on the principal
// branch for every m off the cut [1, inf).
struct AgmOutcome {
  cplx mean;
  cplx csum;  // sum of 2^(n-1) c_n^2 including the c_0 term m/2
};

AgmOutcome complex_agm(cplx m) {
  cplx a = 1.0, b = std::sqrt(1.0 - m);
  cplx sum = 0.5 * m;
  double pow2 = 0.5;
  for (int it = 0; it < 60 && std::abs(a - b) > 4e-16 * std::abs(a); ++it) {
    const cplx c = 0.5 * (a - b);
    const cplx an = 0.5 * (a + b);
    cplx bn = std::sqrt(a * b);
    if (std::abs(an - bn) > std::abs(an + bn)) bn = -bn;
    a = an;
    b = bn;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  return {a, sum};
}

}  // namespace

double elliptic_k(double m) {
  if (m >= 1.0)
    throw std::domain_error("elliptic_k: parameter must satisfy m < 1");
  double a = 1.0, b = std::sqrt(1.0 - m);
  for (int it = 0; it < 40 && std::fabs(a - b) > 4e-16 * std::fabs(a); ++it) {
    double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return pi / (2.0 * a);
}

double elliptic_e(double m) {
  if (m > 1.0)
    throw std::domain_error("elliptic_e: parameter must satisfy m <= 1");
  if (m == 1.0) return 1.0;
  double a = 1.0, b = std::sqrt(1.0 - m);
  double sum = 0.5 * m;  // 2^(n-1) c_n^2 starting from c_0^2 = m
  double pow2 = 0.5;
  for (int it = 0; it < 40 && std::fabs(a - b) > 4e-16 * std::fabs(a); ++it) {
    double c = 0.5 * (a - b);
    double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  return pi / (2.0 * a) * (1.0 - sum);
}

cplx elliptic_k(cplx m) {
  if (on_real_cut(m))
    throw std::domain_error("elliptic_k: parameter on the branch cut [1,inf)");
  if (m.imag() == 0.0) return cplx(elliptic_k(m.real()), 0.0);
  return pi / (2.0 * complex_agm(m).mean);
}

cplx elliptic_e(cplx m) {
  if (on_real_cut(m))
    throw std::domain_error("elliptic_e: parameter on the branch cut [1,inf)");
  if (m.imag() == 0.0) return cplx(elliptic_e(m.real()), 0.0);
  const AgmOutcome agm = complex_agm(m);
  return pi / (2.0 * agm.mean) * (1.0 - agm.csum);
}

cplx elliptic_k_deriv(cplx m) {
  if (std::abs(m) < 1e-6) {
    // K'(m) = (pi/2)(1/4 + 9 m/32 + 75 m^2/256 + ...)
    return (pi / 2.0) * (0.25 + m * (9.0 / 32.0 + m * (75.0 / 256.0)));
  }
  cplx K = elliptic_k(m), E = elliptic_e(m);
  return (E - (1.0 - m) * K) / (2.0 * m * (1.0 - m));
}

cplx elliptic_e_deriv(cplx m) {
  if (std::abs(m) < 1e-6) {
    // E'(m) = -(pi/2)(1/4 + 3 m/32 + 15 m^2/256 + ...)
    return -(pi / 2.0) * (0.25 + m * (3.0 / 32.0 + m * (15.0 / 256.0)));
  }
  cplx K = elliptic_k(m), E = elliptic_e(m);
  return (E - K) / (2.0 * m);
}

cplx elliptic_k_sheet(cplx m, Sheet sheet) {
  if (sheet == Sheet::I) return elliptic_k(m);
  cplx jump = 2.0 * cplx(0.0, 1.0) * elliptic_k(1.0 - m);
  return sheet == Sheet::II ? elliptic_k(m) + jump : elliptic_k(m) - jump;
}

cplx elliptic_e_sheet(cplx m, Sheet sheet) {
  if (sheet == Sheet::I) return elliptic_e(m);
  cplx jump =
      2.0 * cplx(0.0, 1.0) * (elliptic_k(1.0 - m) - elliptic_e(1.0 - m));
  return sheet == Sheet::II ? elliptic_e(m) + jump : elliptic_e(m) - jump;
}

cplx elliptic_k_sheet_deriv(cplx m, Sheet sheet) {
  if (sheet == Sheet::I) return elliptic_k_deriv(m);
  cplx jump = -2.0 * cplx(0.0, 1.0) * elliptic_k_deriv(1.0 - m);
  return sheet == Sheet::II ? elliptic_k_deriv(m) + jump
                            : elliptic_k_deriv(m) - jump;
}

cplx elliptic_e_sheet_deriv(cplx m, Sheet sheet) {
  if (sheet == Sheet::I) return elliptic_e_deriv(m);
  cplx jump = -2.0 * cplx(0.0, 1.0) *
              (elliptic_k_deriv(1.0 - m) - elliptic_e_deriv(1.0 - m));
  return sheet == Sheet::II ? elliptic_e_deriv(m) + jump
                            : elliptic_e_deriv(m) - jump;
}

double lambert_w0(double x) {
  const double min_x = -1.0 / std::numbers::e;
  if (x < min_x)
    throw std::domain_error("lambert_w0: argument below -1/e");
  if (x == 0.0) return 0.0;
  double w;
  if (x < -0.25) {
    double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
  } else if (x < 3.0) {
    w = x / (1.0 + x);
  } else {
    double l1 = std::log(x), l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  for (int it = 0; it < 64; ++it) {
    double ew = std::exp(w);
    double f = w * ew - x;
    double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * (w + 1.0));
    double dw = f / denom;
    w -= dw;
    if (std::fabs(dw) < 1e-15 * (1.0 + std::fabs(w))) break;
  }
  return w;
}

namespace {

// Power series below the crossover, Hankel asymptotics above.  The
// asymptotic coefficients are the mu = 0 values of the standard expansion;
// the first omitted term is below 1e-9 relative at the crossover.
constexpr double bessel_crossover = 12.0;

double j0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 40; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

double y0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 0.0, harmonic = 0.0;
  for (int k = 1; k <= 40; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    sum += -term * harmonic;
    if (std::fabs(term) * harmonic < 1e-18) break;
  }
  return (2.0 / pi) * ((std::log(0.5 * x) + euler_gamma) * j0_series(x) + sum);
}

void j0y0_asymptotic(double x, double* j0, double* y0) {
  const double ix2 = 1.0 / (x * x);
  const double p = 1.0 +
                   ix2 * (-9.0 / 128.0 +
                          ix2 * (3675.0 / 32768.0 -
                                 ix2 * 2401245.0 / 4194304.0));
  const double q =
      (1.0 / x) *
      (-0.125 + ix2 * (75.0 / 1024.0 - ix2 * 59535.0 / 262144.0));
  const double chi = x - 0.25 * pi;
  const double amp = std::sqrt(2.0 / (pi * x));
  *j0 = amp * (p * std::cos(chi) - q * std::sin(chi));
  *y0 = amp * (p * std::sin(chi) + q * std::cos(chi));
}

}  // namespace

double bessel_j0(double x) {
  x = std::fabs(x);
  if (x <= bessel_crossover) return j0_series(x);
  double j0, y0;
  j0y0_asymptotic(x, &j0, &y0);
  return j0;
}

double bessel_y0(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_y0: requires x > 0");
  if (x <= bessel_crossover) return y0_series(x);
  double j0, y0;
  j0y0_asymptotic(x, &j0, &y0);
  return y0;
}

cplx hankel1_0(double x) {
  if (!(x > 0.0)) throw std::domain_error("hankel1_0: requires x > 0");
  return cplx(bessel_j0(x), bessel_y0(x));
}

}  // namespace lqed

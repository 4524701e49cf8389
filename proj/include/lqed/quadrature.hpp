#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lqed::quad {

// Adaptive Gauss-Kronrod integration on a real interval for real- or
// complex-valued integrands.  The 7/15 point pair is the QUADPACK dqk15 rule.

namespace detail {

inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class T>
double abs_of(const T& v) {
  if constexpr (std::is_same_v<T, double>) return std::fabs(v);
  else return std::abs(v);
}

template <class F>
auto gk15(F&& f, double a, double b, double* err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  using R = decltype(f(c));
  R fc = f(c);
  R res_g = wg[3] * fc;
  R res_k = wgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    R f1 = f(c - h * xgk[j]);
    R f2 = f(c + h * xgk[j]);
    res_k += wgk[j] * (f1 + f2);
    if (j % 2 == 1) res_g += wg[j / 2] * (f1 + f2);
  }
  double raw = abs_of(res_k - res_g) * std::fabs(h);
  *err = std::min(raw, std::pow(200.0 * raw, 1.5));
  return res_k * h;
}

}  // namespace detail

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 48;
  std::size_t max_intervals = 200000;
};

// Integrates f over [a,b] by bisection-refined Gauss-Kronrod.  Throws
// std::runtime_error with the achieved error bound when the interval budget
// is exhausted before the tolerance is met.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {}) {
  using R = decltype(f(0.5 * (a + b)));
  struct Seg {
    double a, b, err;
    R val;
    int depth;
  };
  double e0;
  R v0 = detail::gk15(f, a, b, &e0);
  std::vector<Seg> segs{{a, b, e0, v0, 0}};
  R total = v0;
  double total_err = e0;
  auto tol = [&](double scale) {
    return std::max(opt.abs_tol, opt.rel_tol * scale);
  };
  while (total_err > tol(detail::abs_of(total))) {
    // split the segment with the largest error estimate
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (segs[i].err > segs[worst].err) worst = i;
    Seg s = segs[worst];
    if (s.depth >= opt.max_depth || segs.size() >= opt.max_intervals) {
      throw std::runtime_error(
          "quadrature did not converge: achieved error bound " +
          std::to_string(total_err) + " on [" + std::to_string(a) + "," +
          std::to_string(b) + "]");
    }
    double m = 0.5 * (s.a + s.b);
    double e1, e2;
    R v1 = detail::gk15(f, s.a, m, &e1);
    R v2 = detail::gk15(f, m, s.b, &e2);
    total += v1 + v2 - s.val;
    total_err += e1 + e2 - s.err;
    segs[worst] = {s.a, m, e1, v1, s.depth + 1};
    segs.push_back({m, s.b, e2, v2, s.depth + 1});
    if (total_err < 0) total_err = 0;
  }
  return total;
}

// Integrates over [a,b] after splitting at the given interior points.
template <class F>
auto integrate_split(F&& f, double a, double b,
                     const std::vector<double>& splits,
                     const Options& opt = {}) {
  std::vector<double> pts{a};
  for (double s : splits)
    if (s > a && s < b) pts.push_back(s);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  using R = decltype(f(0.5 * (a + b)));
  R total{};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += integrate(f, pts[i], pts[i + 1], opt);
  return total;
}

// Integrates f over [a, +inf) as a finite part plus a 1/x-mapped tail.
// The integrand must decay at least like 1/x^2.
template <class F>
auto integrate_to_infinity(F&& f, double a, double cutover,
                           const Options& opt = {}) {
  auto head = integrate(f, a, cutover, opt);
  auto tail = integrate(
      [&](double u) { return f(cutover / u) * (cutover / (u * u)); }, 1e-12,
      1.0, opt);
  return head + tail;
}

}  // namespace lqed::quad

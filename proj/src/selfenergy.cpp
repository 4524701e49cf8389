#include "lqed/selfenergy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lqed/quadrature.hpp"

namespace lqed {

namespace {

constexpr double pi = std::numbers::pi;
using cplxl = std::complex<long double>;

// Lattice propagator of a 1D chain with hopping amplitude a,
// G1(z, a, m) = (1/2pi) int dk exp(ikm) / (z + 2a cos k).
// Contour integration leaves the residue of the root of a y^2 + z y + a
// inside the unit circle; the roots multiply to 1, so the inside root is
// obtained stably as the reciprocal of the larger one.
template <class C>
struct Kernel1D {
  C y_in;    // root inside the unit circle
  C s;       // a (y_in - y_out); squares to z^2 - 4a^2
};

template <class C>
Kernel1D<C> kernel_1d(C z, double a) {
  C d = sqrt(z * z - C(4.0 * a * a));
  // choose the sign making -z - d the larger-magnitude numerator
  if (std::norm(-z - d) < std::norm(-z + d)) d = -d;
  C y_big = (-z - d) / C(2.0 * a);
  C y_in = C(1.0) / y_big;
  C s = C(a) * (y_in - y_big);
  return {y_in, s};
}

template <class C>
C g1(C z, double a, int m, bool second_sheet = false) {
  m = std::abs(m);
  if (std::fabs(a) < 1e-300) {
    if (m == 0) return C(1.0) / z;
    return C(0.0);
  }
  auto ker = kernel_1d(z, a);
  if (second_sheet) {
    C y_out = C(1.0) / ker.y_in;
    C pw = C(1.0);
    for (int i = 0; i < m; ++i) pw *= y_out;
    return pw / (-ker.s);
  }
  C pw = C(1.0);
  for (int i = 0; i < m; ++i) pw *= ker.y_in;
  return pw / ker.s;
}

bool second_sheet_1d(Sheet sheet) { return sheet != Sheet::I; }

void require_coupling(double g, double J) {
  if (g < 0) throw std::invalid_argument("coupling g must be >= 0");
  if (!(J > 0)) throw std::invalid_argument("hopping J must be > 0");
}

// ---- 2D closed forms ------------------------------------------------------

// The bracket (2/m - 1)K(m) - (2/m)E(m) cancels to O(m) as m -> 0, so deep
// evaluations on the physical sheet switch to its Maclaurin series.
constexpr double small_m_switch = 0.03;

cplx bracket_series(cplx m, cplx* dbdm = nullptr) {
  cplx B = 0.0, Bp = 0.0, mp = 1.0;
  double a = 0.25;
  for (int k = 1; k <= 10; ++k) {
    const double r = (2.0 * k + 1.0) / (2.0 * k + 2.0);
    const double a_next = a * r * r;
    const double Bk = 2.0 * a_next * (2.0 * k + 2.0) / (2.0 * k + 1.0) - a;
    B += Bk * mp * m;
    Bp += static_cast<double>(k) * Bk * mp;
    mp *= m;
    a = a_next;
  }
  if (dbdm) *dbdm = 0.5 * pi * Bp;
  return 0.5 * pi * B;
}

cplx sigma12_2d_11(cplx z, double g, double J, Sheet sheet) {
  cplx m = 16.0 * J * J / (z * z);
  if (sheet == Sheet::I && std::abs(m) < small_m_switch)
    return (2.0 * g * g / (pi * z)) * bracket_series(m);
  cplx K = elliptic_k_sheet(m, sheet);
  cplx E = elliptic_e_sheet(m, sheet);
  return (2.0 * g * g / (pi * z)) * ((2.0 / m - 1.0) * K - (2.0 / m) * E);
}

cplx sigma12_2d_11_deriv(cplx z, double g, double J, Sheet sheet) {
  cplx m = 16.0 * J * J / (z * z);
  if (sheet == Sheet::I && std::abs(m) < small_m_switch) {
    cplx dB;
    cplx B = bracket_series(m, &dB);
    return (2.0 * g * g / (pi * z * z)) * (-2.0 * m * dB - B);
  }
  cplx K = elliptic_k_sheet(m, sheet);
  cplx E = elliptic_e_sheet(m, sheet);
  cplx Kp = elliptic_k_sheet_deriv(m, sheet);
  cplx Ep = elliptic_e_sheet_deriv(m, sheet);
  cplx A = (2.0 / m - 1.0) * K - (2.0 / m) * E;
  cplx Ap = -2.0 * K / (m * m) + (2.0 / m - 1.0) * Kp + 2.0 * E / (m * m) -
            (2.0 / m) * Ep;
  // dm/dz = -2m/z
  return -(2.0 * g * g / (pi * z * z)) * (A + 2.0 * m * Ap);
}

// Diagonal recursion in n for offsets (n,n), run in two precisions; the
// disagreement serves as the instability estimate.
template <class C>
C diag_recurse(C z, double J, C s0, C s1, int n) {
  C a = s0, b = s1;
  const C m_half = z * z / C(8.0 * J * J) - C(1.0);
  for (int k = 1; k < n; ++k) {
    C c1 = C(4.0 * k / (2.0 * k + 1.0)) * m_half;
    C c2 = C((2.0 * k - 1.0) / (2.0 * k + 1.0));
    C nxt = c1 * b - c2 * a;
    a = b;
    b = nxt;
  }
  return b;
}

cplx sigma12_quad_general(cplx z, int nbar_x, int nbar_y, double g, double J);

// On the physical sheet the crossed propagator is the exponentially dying
// solution of the recursion, so seed rounding grows by |m_half|^(n-1).  This
// estimates that amplified noise against the single-emitter scale g^2/|z|.
bool diag_recursion_safe(cplx z, int n, double g, double J, cplx s0, cplx s1) {
  const double amp = std::abs(z * z / (8.0 * J * J) - 1.0);
  const double la = std::log(amp + 1e-300);
  const double ln_noise =
      std::log(1e-16) + std::max(std::log(std::abs(s0) + 1e-300) + (n - 2) * la,
                                 std::log(std::abs(s1) + 1e-300) + (n - 1) * la);
  const double ln_scale = std::log(1e-14 * g * g / std::abs(z) + 1e-300);
  return ln_noise < ln_scale;
}

// leading lattice moment of the crossed propagator for offset (n,n)
cplx diag_moment(cplx z, int n, double g, double J) {
  const double ln_mag = std::log(g * g + 1e-300) + std::lgamma(2.0 * n + 1.0) -
                        2.0 * std::lgamma(n + 1.0) + 2.0 * n * std::log(J) -
                        (2.0 * n + 1.0) * std::log(std::abs(z));
  if (ln_mag < -690.0) return 0.0;
  return std::exp(ln_mag) *
         std::exp(cplx(0.0, -(2.0 * n + 1.0) * std::arg(z)));
}

cplx sigma12_2d_diag(cplx z, int n, double g, double J, Sheet sheet) {
  cplx s0 = sigma_e_2d(z, g, J, sheet);
  if (n == 0) return s0;
  cplx s1 = sigma12_2d_11(z, g, J, sheet);
  if (n == 1) return s1;
  if (sheet == Sheet::I && !diag_recursion_safe(z, n, g, J, s0, s1)) {
    if (std::abs(16.0 * J * J / (z * z)) < small_m_switch)
      return diag_moment(z, n, g, J);
    return sigma12_quad_general(z, 2 * n, 0, g, J);
  }
  cplx vd = diag_recurse(z, J, s0, s1, n);
  cplxl vl = diag_recurse(cplxl(z), J, cplxl(s0), cplxl(s1), n);
  cplx v(static_cast<double>(vl.real()), static_cast<double>(vl.imag()));
  double err = std::abs(vd - v);
  if (err > 1e-8 * std::max(1.0, std::abs(v))) {
    if (sheet == Sheet::I) return sigma12_quad_general(z, 2 * n, 0, g, J);
    throw std::runtime_error(
        "diagonal self-energy recursion lost precision on a continued sheet");
  }
  return v;
}

// value and z-derivative propagated together through the recursion
std::pair<cplx, cplx> sigma12_2d_diag_with_deriv(cplx z, int n, double g,
                                                 double J, Sheet sheet) {
  cplx s0 = sigma_e_2d(z, g, J, sheet);
  cplx d0 = SelfEnergy::single_2d(g, J).derivative(z, sheet);
  if (n == 0) return {s0, d0};
  cplx s1 = sigma12_2d_11(z, g, J, sheet);
  cplx d1 = sigma12_2d_11_deriv(z, g, J, sheet);
  if (n == 1) return {s1, d1};
  if (sheet == Sheet::I && !diag_recursion_safe(z, n, g, J, s0, s1)) {
    if (std::abs(16.0 * J * J / (z * z)) < small_m_switch) {
      cplx v = diag_moment(z, n, g, J);
      return {v, -(2.0 * n + 1.0) * v / z};
    }
    const double h = 1e-6 * (std::abs(z) + 1.0);
    cplx v = sigma12_quad_general(z, 2 * n, 0, g, J);
    cplx vp = (sigma12_quad_general(z + h, 2 * n, 0, g, J) -
               sigma12_quad_general(z - h, 2 * n, 0, g, J)) /
              (2.0 * h);
    return {v, vp};
  }
  cplxl a = cplxl(s0), b = cplxl(s1), da = cplxl(d0), db = cplxl(d1);
  const cplxl zl(z);
  const cplxl m_half = zl * zl / cplxl(8.0 * J * J) - cplxl(1.0L);
  const cplxl m_half_d = zl / cplxl(4.0 * J * J);
  for (int k = 1; k < n; ++k) {
    cplxl f = cplxl(4.0L * k / (2.0L * k + 1.0L));
    cplxl c2 = cplxl((2.0L * k - 1.0L) / (2.0L * k + 1.0L));
    cplxl nxt = f * m_half * b - c2 * a;
    cplxl dnxt = f * (m_half_d * b + m_half * db) - c2 * da;
    a = b;
    b = nxt;
    da = db;
    db = dnxt;
  }
  return {cplx(static_cast<double>(b.real()), static_cast<double>(b.imag())),
          cplx(static_cast<double>(db.real()), static_cast<double>(db.imag()))};
}

// Reduced integral for a general offset: with nbar = (nx + ny, nx - ny) the
// Brillouin-zone integral factorises into a 1D chain propagator per qx.
// Sheet I only.
cplx sigma12_quad_general(cplx z, int nbar_x, int nbar_y, double g, double J) {
  auto f = [=](double qx) {
    return std::cos(qx * nbar_x) * g1(z, 2.0 * J * std::cos(qx), nbar_y);
  };
  std::vector<double> splits;
  double c = std::fabs(z.real()) / (4.0 * J);
  if (c < 1.0) {
    splits.push_back(std::acos(c));
    splits.push_back(pi - std::acos(c));
  }
  int oscillations = std::max({8, 2 * std::abs(nbar_x), 2 * std::abs(nbar_y)});
  for (int i = 1; i < oscillations; ++i)
    splits.push_back(pi * i / oscillations);
  quad::Options opt;
  opt.abs_tol = 1e-11;
  opt.rel_tol = 1e-11;
  cplx integral = quad::integrate_split(f, 0.0, pi, splits, opt);
  return (g * g / pi) * integral;
}

std::pair<int, int> canonical_offset(Eigen::Vector2i n12) {
  int a = std::abs(n12.x());
  int b = std::abs(n12.y());
  if (a < b) std::swap(a, b);
  return {a, b};
}

}  // namespace

// ---- public free functions ------------------------------------------------

cplx sigma_e_1d(cplx z, double g, double J, Sheet sheet) {
  require_coupling(g, J);
  return g * g * g1(z, J, 0, second_sheet_1d(sheet));
}

cplx sigma12_1d(cplx z, int n12, double g, double J, Sheet sheet) {
  require_coupling(g, J);
  return g * g * g1(z, J, n12, second_sheet_1d(sheet));
}

cplx sigma_e_2d(cplx z, double g, double J, Sheet sheet) {
  require_coupling(g, J);
  if (z == 0.0)
    throw std::domain_error("sigma_e_2d diverges logarithmically at z = 0");
  cplx m = 16.0 * J * J / (z * z);
  return (2.0 * g * g / (pi * z)) * elliptic_k_sheet(m, sheet);
}

cplx sigma12_2d(cplx z, Eigen::Vector2i n12, double g, double J, Sheet sheet) {
  require_coupling(g, J);
  auto [a, b] = canonical_offset(n12);
  if (a == 0 && b == 0) return sigma_e_2d(z, g, J, sheet);
  if (a == 1 && b == 0) {
    // lattice identity: z G(0) + 4J G(1,0) = 1, scaled by g^2
    return (g * g - z * sigma_e_2d(z, g, J, sheet)) / (4.0 * J);
  }
  if (a == 1 && b == 1) return sigma12_2d_11(z, g, J, sheet);
  if (a == b) return sigma12_2d_diag(z, a, g, J, sheet);
  if (sheet != Sheet::I)
    throw std::invalid_argument(
        "sigma12_2d: continued sheets are only available for offsets "
        "(1,0), (1,1) and the diagonal family (n,n)");
  return sigma12_quad_general(z, a + b, a - b, g, J);
}

cplx sigma_pm(cplx z, int n12, int sign, double g, double J, Sheet sheet) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("sigma_pm: sign must be +1 or -1");
  if (n12 == 0) throw std::invalid_argument("sigma_pm: offset must be nonzero");
  return sigma_e_1d(z, g, J, sheet) +
         static_cast<double>(sign) * sigma12_1d(z, n12, g, J, sheet);
}

cplx sigma_pm(cplx z, Eigen::Vector2i n12, int sign, double g, double J,
              Sheet sheet) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("sigma_pm: sign must be +1 or -1");
  if (n12.x() == 0 && n12.y() == 0)
    throw std::invalid_argument("sigma_pm: offset must be nonzero");
  return sigma_e_2d(z, g, J, sheet) +
         static_cast<double>(sign) * sigma12_2d(z, n12, g, J, sheet);
}

cplx sigma_four(cplx z, int n, double g, double J) {
  require_coupling(g, J);
  if (n < 1) throw std::invalid_argument("sigma_four: spacing n must be >= 1");
  if (z == 0.0) return 0.0;  // the alternating mode decouples exactly at 0
  auto f = [=](double qx) {
    double si = std::sin(2.0 * n * qx);
    double a = 2.0 * J * std::cos(qx);
    return si * si * (g1(z, a, 0) - g1(z, a, 4 * n));
  };
  std::vector<double> splits;
  double c = std::fabs(z.real()) / (4.0 * J);
  if (c < 1.0) {
    splits.push_back(std::acos(c));
    splits.push_back(pi - std::acos(c));
  }
  int chunks = std::max(16, 8 * n);
  for (int i = 1; i < chunks; ++i) splits.push_back(pi * i / chunks);
  quad::Options opt;
  opt.abs_tol = 1e-11;
  opt.rel_tol = 1e-11;
  cplx integral = quad::integrate_split(f, 0.0, pi, splits, opt);
  return (2.0 * g * g / pi) * integral;
}

cplx sigma12_edge_hankel(double energy_above_edge, Eigen::Vector2i n12,
                         double g, double J) {
  require_coupling(g, J);
  if (!(energy_above_edge > 0))
    throw std::domain_error("sigma12_edge_hankel: energy must be above the edge");
  double dist = n12.cast<double>().norm();
  if (dist < 1.0)
    throw std::invalid_argument("sigma12_edge_hankel: needs |n12| >= 1");
  cplx h = hankel1_0(dist * std::sqrt(energy_above_edge / J));
  return g * g / (4.0 * cplx(0.0, 1.0) * J) * h;
}

// ---- SelfEnergy -----------------------------------------------------------

SelfEnergy::SelfEnergy(Kind k, double g, double J, Eigen::Vector2i offset,
                       int sign, int scale)
    : kind_(k), g_(g), J_(J), offset_(offset), sign_(sign), scale_(scale) {
  require_coupling(g, J);
}

SelfEnergy SelfEnergy::single_1d(double g, double J) {
  return {Kind::Single1D, g, J, {0, 0}, +1, 1};
}
SelfEnergy SelfEnergy::pair_1d(int n12, double g, double J) {
  if (n12 == 0) throw std::invalid_argument("pair offset must be nonzero");
  return {Kind::Pair1D, g, J, {n12, 0}, +1, 1};
}
SelfEnergy SelfEnergy::plus_minus_1d(int n12, int sign, double g, double J) {
  if (n12 == 0) throw std::invalid_argument("pair offset must be nonzero");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("sign must be +1 or -1");
  return {Kind::PlusMinus1D, g, J, {n12, 0}, sign, 1};
}
SelfEnergy SelfEnergy::single_2d(double g, double J) {
  return {Kind::Single2D, g, J, {0, 0}, +1, 1};
}
SelfEnergy SelfEnergy::pair_2d(Eigen::Vector2i n12, double g, double J) {
  if (n12.x() == 0 && n12.y() == 0)
    throw std::invalid_argument("pair offset must be nonzero");
  return {Kind::Pair2D, g, J, n12, +1, 1};
}
SelfEnergy SelfEnergy::plus_minus_2d(Eigen::Vector2i n12, int sign, double g,
                                     double J) {
  if (n12.x() == 0 && n12.y() == 0)
    throw std::invalid_argument("pair offset must be nonzero");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("sign must be +1 or -1");
  return {Kind::PlusMinus2D, g, J, n12, sign, 1};
}
SelfEnergy SelfEnergy::four_2d(int n, double g, double J) {
  if (n < 1) throw std::invalid_argument("four-emitter spacing must be >= 1");
  return {Kind::Four2D, g, J, {0, 0}, +1, n};
}

int SelfEnergy::dim() const {
  switch (kind_) {
    case Kind::Single1D:
    case Kind::Pair1D:
    case Kind::PlusMinus1D:
      return 1;
    default:
      return 2;
  }
}

double SelfEnergy::band_edge() const { return 2.0 * dim() * J_; }

cplx SelfEnergy::value(cplx z, Sheet sheet) const {
  switch (kind_) {
    case Kind::Single1D:
      return sigma_e_1d(z, g_, J_, sheet);
    case Kind::Pair1D:
      return sigma12_1d(z, offset_.x(), g_, J_, sheet);
    case Kind::PlusMinus1D:
      return sigma_pm(z, offset_.x(), sign_, g_, J_, sheet);
    case Kind::Single2D:
      return sigma_e_2d(z, g_, J_, sheet);
    case Kind::Pair2D:
      return sigma12_2d(z, offset_, g_, J_, sheet);
    case Kind::PlusMinus2D:
      return sigma_pm(z, offset_, sign_, g_, J_, sheet);
    case Kind::Four2D:
      return sigma_four(z, scale_, g_, J_);
  }
  throw std::logic_error("unknown self-energy kind");
}

cplx SelfEnergy::derivative(cplx z, Sheet sheet) const {
  const bool flip = second_sheet_1d(sheet);
  switch (kind_) {
    case Kind::Single1D: {
      auto ker = kernel_1d(z, J_);
      cplx s = flip ? -ker.s : ker.s;
      return -g_ * g_ * z / (s * s * s);
    }
    case Kind::Pair1D:
    case Kind::PlusMinus1D: {
      auto ker = kernel_1d(z, J_);
      cplx s = flip ? -ker.s : ker.s;
      cplx y = flip ? 1.0 / ker.y_in : ker.y_in;
      int m = std::abs(offset_.x());
      cplx pw = std::pow(y, m);
      cplx d12 = -g_ * g_ * pw * (static_cast<double>(m) + z / s) / (s * s);
      if (kind_ == Kind::Pair1D) return d12;
      cplx de = -g_ * g_ * z / (s * s * s);
      return de + static_cast<double>(sign_) * d12;
    }
    case Kind::Single2D: {
      cplx m = 16.0 * J_ * J_ / (z * z);
      cplx K = elliptic_k_sheet(m, sheet);
      cplx Kp = elliptic_k_sheet_deriv(m, sheet);
      return -(2.0 * g_ * g_ / (pi * z * z)) * (K + 2.0 * m * Kp);
    }
    case Kind::Pair2D:
    case Kind::PlusMinus2D: {
      auto [a, b] = canonical_offset(offset_);
      cplx d12;
      if (a == 1 && b == 1) {
        d12 = sigma12_2d_11_deriv(z, g_, J_, sheet);
      } else if (a == 1 && b == 0) {
        cplx se = sigma_e_2d(z, g_, J_, sheet);
        cplx dse = SelfEnergy::single_2d(g_, J_).derivative(z, sheet);
        d12 = -(se + z * dse) / (4.0 * J_);
      } else if (a == b) {
        d12 = sigma12_2d_diag_with_deriv(z, a, g_, J_, sheet).second;
      } else {
        double h = 1e-6 * J_ * std::max(1.0, std::abs(z));
        d12 = (sigma12_2d(z + h, offset_, g_, J_, sheet) -
               sigma12_2d(z - h, offset_, g_, J_, sheet)) /
              (2.0 * h);
      }
      if (kind_ == Kind::Pair2D) return d12;
      cplx de = SelfEnergy::single_2d(g_, J_).derivative(z, sheet);
      return de + static_cast<double>(sign_) * d12;
    }
    case Kind::Four2D: {
      double h = 1e-6 * J_ * std::max(1.0, std::abs(z));
      return (sigma_four(z + h, scale_, g_, J_) -
              sigma_four(z - h, scale_, g_, J_)) /
             (2.0 * h);
    }
  }
  throw std::logic_error("unknown self-energy kind");
}

SigmaValue SelfEnergy::retarded(double energy) const {
  const double eps = 1e-6 * J_;
  cplx coarse = value(cplx(energy, eps));
  cplx fine = value(cplx(energy, 0.5 * eps));
  return {cplx(energy, 0.0), Sheet::I, 2.0 * fine - coarse};
}

}  // namespace lqed

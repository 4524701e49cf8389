#include "lqed/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lqed/quadrature.hpp"

namespace lqed {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = 0.57721566490153286060651209;

struct CutGeometry {
  double line;
  Sheet left;
  Sheet right;
};

CutGeometry cut_geometry(const SelfEnergy& se, CutId cut) {
  const double edge = se.band_edge();
  if (se.dim() == 1) {
    switch (cut) {
      case CutId::Lower:
        return {-edge, Sheet::I, Sheet::II};
      case CutId::Upper:
        return {edge, Sheet::II, Sheet::I};
      case CutId::Middle:
        throw std::invalid_argument("a 1D bath has no middle branch cut");
    }
  }
  switch (cut) {
    case CutId::Lower:
      return {-edge, Sheet::I, Sheet::II};
    case CutId::Middle:
      return {0.0, Sheet::II, Sheet::III};
    case CutId::Upper:
      return {edge, Sheet::III, Sheet::I};
  }
  throw std::logic_error("unknown cut");
}

cplx resolvent_of(const SelfEnergy& se, double delta, cplx z, Sheet sheet) {
  const cplx sigma = se.value(z, sheet);
  // continued self-energies grow exponentially deep below the band; once
  // they overflow the propagator is zero to double precision
  if (!std::isfinite(sigma.real()) || !std::isfinite(sigma.imag())) return 0.0;
  return 1.0 / (z - delta - sigma);
}

// Whether the kind supports evaluation on continued sheets (needed for cuts
// and therefore for the full decomposition).
bool continued_sheets_available(const SelfEnergy& se) {
  using K = SelfEnergy::Kind;
  switch (se.kind()) {
    case K::Single1D:
    case K::Pair1D:
    case K::PlusMinus1D:
    case K::Single2D:
      return true;
    case K::Pair2D:
    case K::PlusMinus2D: {
      int a = std::abs(se.offset().x());
      int b = std::abs(se.offset().y());
      if (a < b) std::swap(a, b);
      return a == b || (a == 1 && b <= 1);
    }
    case K::Four2D:
      return false;
  }
  return false;
}

using Sample = BranchCutContribution::Sample;

// One Gauss-Kronrod pass that records its nodes.  Accepted panels append
// their 15 (x, weight, value) triples to `out`.
template <class F>
void sample_panel(F&& f, double a, double b, int depth, double tol,
                  std::vector<Sample>& out) {
  if (out.size() > 2000000)
    throw std::runtime_error("branch-cut sampling exceeded its node budget");
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double xs[15], ws[15];
  cplx fs[15];
  xs[0] = c;
  ws[0] = quad::detail::wgk[7] * h;
  fs[0] = f(c);
  cplx res_k = quad::detail::wgk[7] * fs[0];
  cplx res_g = quad::detail::wg[3] * fs[0];
  int idx = 1;
  for (int j = 0; j < 7; ++j) {
    const double x1 = c - h * quad::detail::xgk[j];
    const double x2 = c + h * quad::detail::xgk[j];
    const cplx f1 = f(x1);
    const cplx f2 = f(x2);
    res_k += quad::detail::wgk[j] * (f1 + f2);
    if (j % 2 == 1) res_g += quad::detail::wg[j / 2] * (f1 + f2);
    xs[idx] = x1;
    ws[idx] = quad::detail::wgk[j] * h;
    fs[idx] = f1;
    ++idx;
    xs[idx] = x2;
    ws[idx] = quad::detail::wgk[j] * h;
    fs[idx] = f2;
    ++idx;
  }
  const double raw = std::abs(res_k - res_g) * std::fabs(h);
  const double err = std::min(raw, std::pow(200.0 * raw, 1.5));
  if (err <= tol || depth >= 42 || (b - a) <= 1e-13 * (std::fabs(a) + 1.0)) {
    for (int i = 0; i < 15; ++i) out.push_back({xs[i], ws[i], fs[i]});
    return;
  }
  sample_panel(f, a, c, depth + 1, tol, out);
  sample_panel(f, c, b, depth + 1, tol, out);
}

// Mirrored panels around a principal-value point x0: nodes come in pairs
// x0 +- u with equal weights, so the pole part cancels inside value_at sums.
template <class F>
void sample_panel_pv(F&& f, double x0, double ua, double ub, int depth,
                     double tol, std::vector<Sample>& out) {
  if (out.size() > 2000000)
    throw std::runtime_error("branch-cut sampling exceeded its node budget");
  const double c = 0.5 * (ua + ub);
  const double h = 0.5 * (ub - ua);
  double us[15], ws[15];
  cplx fp[15], fm[15];
  us[0] = c;
  ws[0] = quad::detail::wgk[7] * h;
  fp[0] = f(x0 + c);
  fm[0] = f(x0 - c);
  cplx res_k = quad::detail::wgk[7] * (fp[0] + fm[0]);
  cplx res_g = quad::detail::wg[3] * (fp[0] + fm[0]);
  int idx = 1;
  for (int j = 0; j < 7; ++j) {
    for (double sgn : {-1.0, 1.0}) {
      const double u = c + sgn * h * quad::detail::xgk[j];
      const cplx vp = f(x0 + u);
      const cplx vm = f(x0 - u);
      res_k += quad::detail::wgk[j] * (vp + vm);
      if (j % 2 == 1) res_g += quad::detail::wg[j / 2] * (vp + vm);
      us[idx] = u;
      ws[idx] = quad::detail::wgk[j] * h;
      fp[idx] = vp;
      fm[idx] = vm;
      ++idx;
    }
  }
  const double raw = std::abs(res_k - res_g) * std::fabs(h);
  const double err = std::min(raw, std::pow(200.0 * raw, 1.5));
  if (err <= tol || depth >= 42 || (ub - ua) <= 1e-13 * (std::fabs(ua) + 1.0)) {
    for (int i = 0; i < 15; ++i) {
      out.push_back({x0 + us[i], ws[i], fp[i]});
      out.push_back({x0 - us[i], ws[i], fm[i]});
    }
    return;
  }
  sample_panel_pv(f, x0, ua, c, depth + 1, tol, out);
  sample_panel_pv(f, x0, c, ub, depth + 1, tol, out);
}

std::vector<double> doubling_boundaries(double first, double last) {
  std::vector<double> v{0.0, first};
  while (v.back() < last) v.push_back(std::min(last, 2.0 * v.back()));
  return v;
}

double bisect_monotone(const std::function<double(double)>& F, double lo,
                       double hi, double flo) {
  // F(lo) and F(hi) have opposite signs; F is monotone increasing in z - Sigma
  for (int i = 0; i < 200 && hi - lo > 1e-16 * (std::fabs(lo) + 1.0); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = F(mid);
    if ((fm <= 0) == (flo <= 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct NewtonOutcome {
  cplx z;
  double residual;
  bool converged;
};

NewtonOutcome newton_pole(const SelfEnergy& se, double delta, cplx z0,
                          Sheet sheet, double tol) {
  const double J = se.J();
  const double edge = se.band_edge();
  cplx z = z0;
  NewtonOutcome best{z0, std::numeric_limits<double>::infinity(), false};
  for (int iter = 0; iter < 80; ++iter) {
    if (z.imag() > -1e-13 * J && z.imag() < 1e-13 * J &&
        std::fabs(z.real()) < edge) {
      z = cplx(z.real(), -1e-13 * J);  // keep off the in-band real segment
    }
    if (se.dim() == 2 && std::fabs(z.real()) < 1e-13 * J) {
      // the imaginary axis is the seam between the two continued sheets
      z = cplx((sheet == Sheet::III ? 1e-13 : -1e-13) * J, z.imag());
    }
    if (std::abs(z) > 100.0 * J || !std::isfinite(z.real()) ||
        !std::isfinite(z.imag()))
      break;
    const cplx F = z - delta - se.value(z, sheet);
    const double res = std::abs(F);
    if (res < best.residual) best = {z, res, false};
    if (res < tol) {
      best.converged = true;
      return best;
    }
    const cplx Fp = 1.0 - se.derivative(z, sheet);
    if (std::abs(Fp) < 1e-14) break;
    z -= F / Fp;
  }
  return best;
}

bool uses_quadrature_sigma(const SelfEnergy& se) {
  using K = SelfEnergy::Kind;
  return se.kind() == K::Four2D ||
         ((se.kind() == K::Pair2D || se.kind() == K::PlusMinus2D) &&
          !continued_sheets_available(se));
}

}  // namespace

// ---- branch cuts -----------------------------------------------------------

BranchCutContribution::BranchCutContribution(const SelfEnergy& se, double delta,
                                             CutId cut, double pole_on_line)
    : cut_(cut) {
  const CutGeometry geom = cut_geometry(se, cut);
  line_ = geom.line;
  const double J = se.J();
  const double eta = (cut == CutId::Middle) ? 1e-8 * J : 0.0;

  // A pole on the cut line leaks into both face limits as a Lorentzian of
  // width eta.  Its residue is booked in the pole list, so the face model is
  // subtracted here to keep the cut integral pole-free.
  cplx pole_res = 0.0;
  if (pole_on_line > 1e-12 * J && eta > 0.0) {
    const cplx z0(line_, -pole_on_line);
    const cplx dr = se.derivative(z0 + cplx(eta, 0.0), geom.right);
    const cplx dl = se.derivative(z0 - cplx(eta, 0.0), geom.left);
    pole_res = 0.5 * (1.0 / (1.0 - dr) + 1.0 / (1.0 - dl));
  }
  auto disc = [&](double x) -> cplx {
    const cplx zr(line_ + eta, -x);
    const cplx zl(line_ - eta, -x);
    cplx d = resolvent_of(se, delta, zr, geom.right) -
             resolvent_of(se, delta, zl, geom.left);
    if (pole_res != 0.0) {
      const double v = x - pole_on_line;
      d -= pole_res * (1.0 / cplx(eta, -v) - 1.0 / cplx(-eta, -v));
    }
    return d;
  };
  const double X0 = 40.0 * J;
  const double tol = 3e-12;
  samples_.reserve(1024);

  if (pole_on_line > 1e-12 * J && pole_on_line < X0) {
    const double x0 = pole_on_line;
    const double span = std::min({x0, X0 - x0, 2.0 * J});
    // region below the mirrored window
    if (x0 - span > 1e-300) {
      const auto below = doubling_boundaries(
          std::min(1e-7 * J, 0.5 * (x0 - span)), x0 - span);
      for (std::size_t i = 0; i + 1 < below.size(); ++i)
        sample_panel(disc, below[i], below[i + 1], 0, tol, samples_);
    }
    // mirrored principal-value window around x0
    const double u_min = 1e-9 * std::max(x0, 1e-3 * J);
    std::vector<double> ub{u_min};
    while (ub.back() < span) ub.push_back(std::min(span, 2.0 * ub.back()));
    for (std::size_t i = 0; i + 1 < ub.size(); ++i)
      sample_panel_pv(disc, x0, ub[i], ub[i + 1], 0, tol, samples_);
    // region above the mirrored window
    double b = x0 + span;
    while (b < X0) {
      const double nxt = std::min(X0, x0 + 2.0 * (b - x0));
      sample_panel(disc, b, nxt, 0, tol, samples_);
      b = nxt;
    }
  } else {
    const auto bounds = doubling_boundaries(1e-7 * J, X0);
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
      sample_panel(disc, bounds[i], bounds[i + 1], 0, tol, samples_);
  }

  // mapped tail x = X0/u for the remainder up to infinity
  auto tail = [&](double u) -> cplx { return disc(X0 / u) * (X0 / (u * u)); };
  std::vector<Sample> tail_samples;
  std::vector<double> ub{1.0 / 4096.0};
  while (ub.back() < 1.0) ub.push_back(std::min(1.0, 2.0 * ub.back()));
  sample_panel(tail, 0.0, ub.front(), 0, tol, tail_samples);
  for (std::size_t i = 0; i + 1 < ub.size(); ++i)
    sample_panel(tail, ub[i], ub[i + 1], 0, tol, tail_samples);
  for (const auto& s : tail_samples) {
    const double x = X0 / s.x;
    const double w = s.weight * X0 / (s.x * s.x);
    samples_.push_back({x, w, s.disc * (s.x * s.x) / X0});
  }
}

cplx BranchCutContribution::value_at(double t) const {
  if (t < 0) throw std::invalid_argument("branch cut evaluation needs t >= 0");
  cplx acc = 0.0;
  for (const auto& s : samples_) acc += s.weight * s.disc * std::exp(-s.x * t);
  return (1.0 / (2.0 * pi)) * std::exp(cplx(0.0, -line_ * t)) * acc;
}

// ---- poles -----------------------------------------------------------------

std::vector<PoleContribution> find_bound_states(const SelfEnergy& se,
                                                double delta) {
  std::vector<PoleContribution> out;
  const double J = se.J();
  const double edge = se.band_edge();
  auto sigma_real = [&](double E) { return se.value(cplx(E, 0.0)).real(); };
  auto F = [&](double E) { return E - delta - sigma_real(E); };

  auto polish_and_pack = [&](double lo, double hi, double flo, PoleKind kind) {
    double E = bisect_monotone(F, lo, hi, flo);
    // one complex-step evaluation per Newton iteration gives both Sigma and
    // its derivative through the imaginary part
    const double h = 1e-20;
    for (int i = 0; i < 6; ++i) {
      const cplx v = se.value(cplx(E, h));
      const double f = E - delta - v.real();
      const double fp = 1.0 - v.imag() / h;
      if (fp == 0.0) break;
      const double En = E - f / fp;
      if (En <= lo || En >= hi) break;
      E = En;
    }
    const cplx v = se.value(cplx(E, h));
    const double sp = v.imag() / h;
    out.push_back({kind, Sheet::I, cplx(E, 0.0), cplx(1.0 / (1.0 - sp), 0.0)});
  };

  // below the band: F is increasing with F(-inf) = -inf, so a root exists
  // exactly when F just outside the edge is positive
  {
    const double b = -edge - 1e-12 * J;
    const double fb = F(b);
    if (fb > 0) {
      double step = std::max(J, std::fabs(delta + edge));
      double a = b - step;
      double fa = F(a);
      int guard = 0;
      while (fa > 0 && guard++ < 80) {
        step *= 2;
        a -= step;
        fa = F(a);
      }
      if (fa <= 0) polish_and_pack(a, b, fa, PoleKind::LowerBoundState);
    }
  }
  // above the band, mirrored
  {
    const double a = edge + 1e-12 * J;
    const double fa = F(a);
    if (fa < 0) {
      double step = std::max(J, std::fabs(delta - edge));
      double b = a + step;
      double fb = F(b);
      int guard = 0;
      while (fb < 0 && guard++ < 80) {
        step *= 2;
        b += step;
        fb = F(b);
      }
      if (fb >= 0) polish_and_pack(a, b, fa, PoleKind::UpperBoundState);
    }
  }
  return out;
}

std::vector<PoleContribution> find_unstable_poles(const SelfEnergy& se,
                                                  double delta) {
  if (se.kind() != SelfEnergy::Kind::Four2D && !continued_sheets_available(se))
    throw std::invalid_argument(
        "unstable poles live on continued sheets, which are unavailable for "
        "this emitter offset");
  const double J = se.J();
  const double g = se.g();
  const double edge = se.band_edge();
  const double im_floor = 1e-8 * J;
  const double tol =
      uses_quadrature_sigma(se) ? 2e-11 * J : 5e-13 * std::max(J, 0.1 * edge);

  std::vector<std::pair<cplx, Sheet>> seeds;
  const MarkovRate mk = markov_rate(se, delta);
  if (!mk.divergent) {
    const cplx z0(delta + mk.lamb_shift, -std::max(0.5 * mk.rate, im_floor));
    seeds.push_back({z0, Sheet::II});
    if (se.dim() == 2) seeds.push_back({z0, Sheet::III});
  }
  if (se.dim() == 2 && g > 0) {
    const double gb = closed_form::nonmarkov_rate_2d(g, J);
    const double re0 = g * g / (4.0 * J);
    const double im0 = std::max(0.5 * gb, im_floor);
    seeds.push_back({cplx(-re0, -im0), Sheet::II});
    seeds.push_back({cplx(re0, -im0), Sheet::III});
  }
  if (seeds.empty()) {
    seeds.push_back(
        {cplx(delta, -std::max(0.1 * g * g / J, im_floor)), Sheet::II});
    if (se.dim() == 2)
      seeds.push_back(
          {cplx(delta, -std::max(0.1 * g * g / J, im_floor)), Sheet::III});
  }

  // separated emitters carry a ladder of retardation resonances spread
  // across the band width on the continued sheets
  const int span = [&] {
    switch (se.kind()) {
      case SelfEnergy::Kind::Pair1D:
      case SelfEnergy::Kind::PlusMinus1D:
        return std::abs(se.offset().x());
      case SelfEnergy::Kind::Pair2D:
      case SelfEnergy::Kind::PlusMinus2D:
        return std::abs(se.offset().x()) + std::abs(se.offset().y());
      default:
        return 0;
    }
  }();
  for (int j = 1; j < span; ++j) {
    const double E = -edge * std::cos(pi * j / span);
    for (double d : {0.04, 0.15, 0.5, 1.2}) {
      const cplx z0(E, -d * J);
      if (se.dim() == 1)
        seeds.push_back({z0, Sheet::II});
      else
        seeds.push_back({z0, E < 0.0 ? Sheet::II : Sheet::III});
    }
  }

  // antibound-type companions can sit far below the axis
  if (se.kind() != SelfEnergy::Kind::Four2D) {
    for (double d : {0.3, 0.8, 2.0, 4.0, 7.0, 12.0, 20.0, 40.0}) {
      for (double re : {0.0, delta}) {
        seeds.push_back({cplx(re, -d * J), Sheet::II});
        if (se.dim() == 2) seeds.push_back({cplx(re, -d * J), Sheet::III});
      }
    }
    for (double fe : {-0.6, -0.3, 0.3, 0.6}) {
      for (double d : {2.0, 5.0}) {
        const cplx z0(fe * edge, -d * J);
        seeds.push_back({z0, Sheet::II});
        if (se.dim() == 2) seeds.push_back({z0, Sheet::III});
      }
    }
  }

  std::vector<PoleContribution> roots;
  auto in_region = [&](cplx z, Sheet sheet) {
    if (z.imag() > 1e-12 * J) return false;
    const double re = z.real();
    if (se.dim() == 1) return std::fabs(re) < edge - 1e-12 * J;
    if (sheet == Sheet::II)
      return re > -edge + 1e-12 * J && re <= 1e-9 * J;
    return re >= -1e-9 * J && re < edge - 1e-12 * J;
  };
  for (const auto& [z0, sheet] : seeds) {
    const auto r = newton_pole(se, delta, z0, sheet, tol);
    if (!r.converged || !in_region(r.z, sheet)) continue;
    const cplx res = 1.0 / (1.0 - se.derivative(r.z, sheet));
    bool dup = false;
    for (const auto& p : roots)
      if (p.sheet == sheet && std::abs(p.z - r.z) < 1e-8 * J) dup = true;
    if (!dup) roots.push_back({PoleKind::Unstable, sheet, r.z, res});
  }

  // a pole on the imaginary axis is seen from both continued sheets; merge it
  // into one contribution carrying the mean residue
  std::vector<PoleContribution> merged;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    PoleContribution p = roots[i];
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      if (roots[j].sheet != p.sheet && std::abs(roots[j].z - p.z) < 1e-8 * J) {
        p.residue = 0.5 * (p.residue + roots[j].residue);
        used[j] = true;
      }
    }
    merged.push_back(p);
  }
  std::sort(merged.begin(), merged.end(),
            [](const PoleContribution& a, const PoleContribution& b) {
              return a.z.real() < b.z.real();
            });
  return merged;
}

// ---- decomposition ---------------------------------------------------------

DynamicsDecomposition decompose(const SelfEnergy& se, double delta) {
  if (!continued_sheets_available(se))
    throw std::invalid_argument(
        "decompose needs continued-sheet evaluations; this emitter "
        "configuration only supports pole extraction and Fourier inversion");
  DynamicsDecomposition d{se, delta, {}, {}};
  d.poles = find_bound_states(se, delta);
  auto ups = find_unstable_poles(se, delta);
  d.poles.insert(d.poles.end(), ups.begin(), ups.end());

  // the shallowest axis pole dominates the middle-cut dynamics; deeper ones
  // have face spikes too narrow for the sampler to see
  double middle_pole = 0.0;
  for (const auto& p : ups)
    if (std::fabs(p.z.real()) < 1e-9 * se.J() && -p.z.imag() > 0 &&
        (middle_pole == 0.0 || -p.z.imag() < middle_pole))
      middle_pole = -p.z.imag();

  d.cuts.emplace_back(se, delta, CutId::Lower);
  if (se.dim() == 2) d.cuts.emplace_back(se, delta, CutId::Middle, middle_pole);
  d.cuts.emplace_back(se, delta, CutId::Upper);
  return d;
}

cplx DynamicsDecomposition::pole_sum(double t) const {
  cplx acc = 0.0;
  for (const auto& p : poles)
    acc += p.residue * std::exp(cplx(0.0, -t) * p.z);
  return acc;
}

cplx DynamicsDecomposition::cut_sum(double t) const {
  cplx acc = 0.0;
  for (const auto& c : cuts) acc += c.value_at(t);
  return acc;
}

cplx DynamicsDecomposition::amplitude(double t) const {
  return pole_sum(t) + cut_sum(t);
}

cplx branch_cut_contribution(const SelfEnergy& se, double delta, CutId cut,
                             double t) {
  double middle_pole = 0.0;
  if (cut == CutId::Middle) {
    for (const auto& p : find_unstable_poles(se, delta))
      if (std::fabs(p.z.real()) < 1e-9 * se.J() && -p.z.imag() > 0 &&
          (middle_pole == 0.0 || -p.z.imag() < middle_pole))
        middle_pole = -p.z.imag();
  }
  return BranchCutContribution(se, delta, cut, middle_pole).value_at(t);
}

cplx amplitude(const SelfEnergy& se, double delta, double t) {
  return decompose(se, delta).amplitude(t);
}

// ---- Markov limit ----------------------------------------------------------

MarkovRate markov_rate(const SelfEnergy& se, double delta) {
  const double J = se.J();
  const double e1 = 1e-5 * J;
  const cplx v1 = se.value(cplx(delta, e1));
  const cplx v2 = se.value(cplx(delta, 0.5 * e1));
  const cplx v3 = se.value(cplx(delta, 0.25 * e1));
  const cplx r1 = 2.0 * v2 - v1;
  const cplx r2 = 2.0 * v3 - v2;
  // Richardson extrapolants stall at a finite gap when the retarded limit
  // diverges (logarithmically at a van Hove point, like 1/sqrt at a 1D edge)
  const double gap = std::abs(r2 - r1);
  const bool divergent =
      gap > 0.02 * (std::abs(r1) + std::abs(r2)) + 1e-12 * J;
  const double lamb = r2.real();
  if (divergent)
    return {lamb, std::numeric_limits<double>::infinity(), true};
  return {lamb, std::max(0.0, -2.0 * r2.imag()), false};
}

// ---- Fourier-inversion oracle ----------------------------------------------

FourierInversion::FourierInversion(const SelfEnergy& se, double delta)
    : delta_(delta) {
  const double J = se.J();
  const double edge = se.band_edge();
  eps_ = 1e-3 * J;

  double lo_core = std::min(-edge, delta) - 1.0 * J;
  double hi_core = std::max(edge, delta) + 1.0 * J;
  for (const auto& p : find_bound_states(se, delta)) {
    lo_core = std::min(lo_core, p.z.real() - 1.0 * J);
    hi_core = std::max(hi_core, p.z.real() + 1.0 * J);
  }
  const double e_max = std::max({30.0 * J, std::fabs(delta) + 15.0 * J,
                                 std::fabs(lo_core) + 10.0 * J,
                                 std::fabs(hi_core) + 10.0 * J});
  const double h_fine = 8e-5 * J;
  const double h_coarse = 5e-3 * J;

  auto append_range = [&](double lo, double hi, double h) {
    const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
    const double step = (hi - lo) / n;
    for (int i = 0; i < n; ++i) energy_.push_back(lo + i * step);
  };
  append_range(-e_max, lo_core, h_coarse);
  append_range(lo_core, hi_core, h_fine);
  append_range(hi_core, e_max, h_coarse);
  energy_.push_back(e_max);

  gdiff_.resize(energy_.size());
  for (std::size_t i = 0; i < energy_.size(); ++i) {
    const cplx z(energy_[i], eps_);
    gdiff_[i] = resolvent_of(se, delta, z, Sheet::I) - 1.0 / (z - delta);
  }
}

cplx FourierInversion::amplitude(double t) const {
  if (t < 0) throw std::invalid_argument("amplitude needs t >= 0");
  // per interval with f linear in u: integral = h e^{-i E_j t}
  //   [f_j (A - B) + f_{j+1} B],  A = int_0^1 e^{-i th u} du,
  //   B = int_0^1 u e^{-i th u} du
  cplx acc = 0.0;
  double h_cached = -1.0;
  cplx A{}, B{};
  cplx phase = std::exp(cplx(0.0, -energy_.front() * t));
  for (std::size_t j = 0; j + 1 < energy_.size(); ++j) {
    const double h = energy_[j + 1] - energy_[j];
    if (std::fabs(h - h_cached) > 1e-12 * (h + 1e-300)) {
      h_cached = h;
      const double th = h * t;
      if (std::fabs(th) < 1e-3) {
        const cplx i_th(0.0, th);
        A = 1.0 - i_th / 2.0 - th * th / 6.0 + i_th * th * th / 24.0;
        B = 0.5 - i_th / 3.0 - th * th / 8.0 + i_th * th * th / 30.0;
      } else {
        const cplx e = std::exp(cplx(0.0, -th));
        const cplx i_th(0.0, th);
        A = (1.0 - e) / i_th;
        B = (A - e) / i_th;
      }
    }
    if ((j & 4095) == 0) phase = std::exp(cplx(0.0, -energy_[j] * t));
    acc += h * phase * (gdiff_[j] * (A - B) + gdiff_[j + 1] * B);
    phase *= std::exp(cplx(0.0, -h * t));
  }
  const cplx free_part = std::exp(cplx(0.0, -delta_ * t));
  return free_part + std::exp(eps_ * t) * cplx(0.0, 1.0 / (2.0 * pi)) * acc;
}

// ---- subradiant pole and closed forms --------------------------------------

double subradiant_pole_2d(double g, double J, int n) {
  if (!(g > 0) || !(J > 0)) throw std::invalid_argument("need g, J > 0");
  if (n < 1) throw std::invalid_argument("need n >= 1");
  const double target = 8.0 * pi * (J / g) * (J / g);
  auto reduced_integral = [&](double y) {
    auto f = [&](double q) {
      const double s = std::sin(2.0 * n * q);
      const double c = std::cos(q);
      return s * s / (y * std::sqrt(y * y + c * c));
    };
    std::vector<double> splits;
    const int chunks = 4 * n;
    for (int i = 1; i < chunks; ++i) splits.push_back(pi * i / chunks);
    quad::Options opt;
    opt.abs_tol = 1e-9 * target;
    opt.rel_tol = 1e-11;
    return quad::integrate_split(f, 0.0, pi, splits, opt);
  };
  double y0 = closed_form::subradiant_rate_asymptote_2d(g, J, n) / (8.0 * J);
  y0 = std::max(y0, 1e-12);
  double lo = y0, hi = y0;
  int guard = 0;
  while (reduced_integral(hi) > target && guard++ < 80) hi *= 2.0;
  guard = 0;
  while (reduced_integral(lo) < target && guard++ < 80) lo *= 0.5;
  for (int i = 0; i < 160 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (reduced_integral(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 8.0 * J * 0.5 * (lo + hi);
}

namespace closed_form {

double nonmarkov_rate_2d(double g, double J) {
  if (!(g > 0) || !(J > 0)) throw std::domain_error("need g, J > 0");
  return (g * g / (pi * J)) * lambert_w0(32.0 * pi * J * J / (g * g));
}

double bound_state_energy_2d_lower(double delta, double g, double J) {
  if (!(g > 0) || !(J > 0)) throw std::domain_error("need g, J > 0");
  const double beta = g * g / (4.0 * pi * J);
  const double log_arg = std::log(32.0 * J / beta) - (delta + 4.0 * J) / beta;
  double w;
  if (log_arg > 690.0) {
    const double l2 = std::log(log_arg);
    w = log_arg - l2 + l2 / log_arg;
  } else {
    w = lambert_w0(std::exp(log_arg));
  }
  return -4.0 * J - beta * w;
}

double bound_state_energy_2d_upper(double delta, double g, double J) {
  return -bound_state_energy_2d_lower(-delta, g, J);
}

double subradiant_rate_asymptote_2d(double g, double J, int n) {
  if (n < 1) throw std::domain_error("need n >= 1");
  return (g * g / (pi * J)) * (euler_gamma + std::log(8.0 * n));
}

double four_emitter_residue(double g, double J, int n) {
  const double r = g * g * n * n / (J * J);
  return 1.0 / (1.0 + r);
}

double pair_residue_1d(double g, double J, double delta, int n12) {
  const double v2 = 4.0 * J * J - delta * delta;
  if (v2 <= 0) throw std::domain_error("detuning must lie inside the band");
  return 1.0 / (1.0 + std::abs(n12) * g * g / v2);
}

double critical_detuning_1d(double g, double J, int n12) {
  return g * g * std::abs(n12) / (2.0 * J);
}

}  // namespace closed_form

}  // namespace lqed

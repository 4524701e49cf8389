#include "lqed/evolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "lqed/fft.hpp"
#include "lqed/quadrature.hpp"
#include "lqed/scenarios.hpp"

namespace lqed {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr int max_projected_emitters = 64;

int effective_site(int N, int off) {
  int s = N / 2 + off;
  s %= N;
  if (s < 0) s += N;
  return s;
}

void check_config(const EvolveConfig& c, bool allow_reverse) {
  const int N = c.bath.N;
  if (N < 2 || (N & (N - 1)) != 0)
    throw std::invalid_argument("lattice size N must be a power of two");
  if (!std::isfinite(c.dt) || c.dt == 0.0)
    throw std::invalid_argument("dt must be nonzero");
  if (!allow_reverse && c.dt < 0)
    throw std::invalid_argument("dt must be positive");
  if (!(c.t_max >= 0) || !std::isfinite(c.t_max))
    throw std::invalid_argument("t_max must be nonnegative");
  if (c.kappa < 0 || c.gamma_star < 0)
    throw std::invalid_argument("loss rates must be nonnegative");
  if (c.record_every < 1)
    throw std::invalid_argument("record_every must be at least 1");
  if (c.wrap_checks < 0)
    throw std::invalid_argument("wrap_checks must be nonnegative");
  if (c.emitters.count() < 1)
    throw std::invalid_argument("at least one emitter is required");
  if (!(c.emitters.g >= 0))
    throw std::invalid_argument("coupling g must be nonnegative");
  std::set<std::pair<int, int>> seen;
  for (const auto& p : c.emitters.positions) {
    if (c.bath.dim == 1 && p.y() != 0)
      throw std::invalid_argument("1D emitter positions use the x component only");
    if (std::abs(p.x()) >= N / 2 || (c.bath.dim == 2 && std::abs(p.y()) >= N / 2))
      throw std::invalid_argument("emitter position falls outside the lattice");
    const int sx = effective_site(N, p.x());
    const int sy = c.bath.dim == 2 ? effective_site(N, p.y()) : 0;
    if (!seen.insert({sx, sy}).second)
      throw std::invalid_argument("emitter positions must be distinct");
  }
}

// One sweep over the momentum grid: add the per-emitter point sources, apply
// the separable phase tables, and accumulate the next site amplitudes plus
// the squared norm, all in a single pass.
double fused_pass(cplx* C, int nx, int ny, const cplx* px, const cplx* py,
                  const std::vector<Eigen::VectorXcd>& ex,
                  const std::vector<Eigen::VectorXcd>& ey, const cplx* src,
                  cplx* acc, int E) {
  double nrm = 0.0;
  std::array<cplx, max_projected_emitters> accl{};
  for (int iy = 0; iy < ny; ++iy) {
    const cplx pyv = py[iy];
    std::array<cplx, max_projected_emitters> rowsrc, rowacc;
    for (int e = 0; e < E; ++e) {
      rowsrc[e] = src ? src[e] * std::conj(ey[e](iy)) : cplx(0.0);
      rowacc[e] = cplx(0.0);
    }
    cplx* row = C + std::size_t(iy) * nx;
    if (E == 1) {
      const cplx* exd = ex[0].data();
      const cplx rs = rowsrc[0];
      cplx ra(0.0);
      if (src) {
        for (int ix = 0; ix < nx; ++ix) {
          const cplx v = (row[ix] + rs * std::conj(exd[ix])) * (px[ix] * pyv);
          row[ix] = v;
          nrm += std::norm(v);
          ra += exd[ix] * v;
        }
      } else {
        for (int ix = 0; ix < nx; ++ix) {
          const cplx v = row[ix] * (px[ix] * pyv);
          row[ix] = v;
          nrm += std::norm(v);
          ra += exd[ix] * v;
        }
      }
      rowacc[0] = ra;
    } else {
      for (int ix = 0; ix < nx; ++ix) {
        cplx v = row[ix];
        if (src)
          for (int e = 0; e < E; ++e)
            v += rowsrc[e] * std::conj(ex[e](ix));
        v *= px[ix] * pyv;
        row[ix] = v;
        nrm += std::norm(v);
        for (int e = 0; e < E; ++e) rowacc[e] += ex[e](ix) * v;
      }
    }
    for (int e = 0; e < E; ++e) accl[e] += ey[e](iy) * rowacc[e];
  }
  for (int e = 0; e < E; ++e) acc[e] = accl[e];
  return nrm;
}

void apply_separable(Eigen::VectorXcd& grid, int nx, int ny, const cplx* px,
                     const cplx* py) {
  for (int iy = 0; iy < ny; ++iy) {
    cplx* row = grid.data() + std::size_t(iy) * nx;
    const cplx pyv = py[iy];
    for (int ix = 0; ix < nx; ++ix) row[ix] *= px[ix] * pyv;
  }
}

double patch_population(const Eigen::VectorXcd& pos, int nx, int ny, int cx,
                        int cy) {
  double total = 0.0;
  for (int dy = -5; dy <= 5; ++dy) {
    if (ny == 1 && dy != 0) continue;
    const int iy = ((cy + dy) % ny + ny) % ny;
    for (int dx = -5; dx <= 5; ++dx) {
      const int ix = ((cx + dx) % nx + nx) % nx;
      total += std::norm(pos(std::size_t(iy) * nx + ix));
    }
  }
  return total;
}

struct PhaseTables {
  Eigen::VectorXcd fx, fy, hx, hy, ihx, ihy, ifx, ify, ones;
};

PhaseTables build_tables(const EvolveConfig& cfg, int nx, int ny, double dte) {
  PhaseTables t;
  const double J = cfg.bath.J;
  auto fill = [&](Eigen::VectorXcd& v, int n, double step, bool with_loss) {
    v.resize(n);
    for (int i = 0; i < n; ++i) {
      const double w = 2.0 * J * std::cos(two_pi * i / n);
      const double damp = with_loss ? -0.5 * cfg.kappa * step : 0.0;
      v(i) = std::exp(cplx(damp, w * step));
    }
  };
  fill(t.fx, nx, dte, true);
  fill(t.hx, nx, 0.5 * dte, true);
  if (ny > 1) {
    fill(t.fy, ny, dte, false);
    fill(t.hy, ny, 0.5 * dte, false);
  } else {
    t.fy = Eigen::VectorXcd::Ones(1);
    t.hy = Eigen::VectorXcd::Ones(1);
  }
  t.ihx = t.hx.cwiseInverse();
  t.ihy = t.hy.cwiseInverse();
  t.ifx = t.fx.cwiseInverse();
  t.ify = t.fy.cwiseInverse();
  t.ones = Eigen::VectorXcd::Ones(std::max(nx, ny));
  return t;
}

Trajectory evolve_impl(const EvolveConfig& cfg, SingleExcitationState state,
                       bool allow_reverse) {
  check_config(cfg, allow_reverse);
  const int dim = cfg.bath.dim;
  const int N = cfg.bath.N;
  const int nx = N;
  const int ny = dim == 2 ? N : 1;
  const std::size_t M = std::size_t(nx) * ny;
  const int E = cfg.emitters.count();
  const double sqrt_m = std::sqrt(double(M));

  if (state.emitters.size() != E)
    throw std::invalid_argument("state emitter count does not match config");
  if (static_cast<std::size_t>(state.bath_amps.size()) != M)
    throw std::invalid_argument("state grid does not match the bath");
  state.to_momentum();

  const long long S =
      std::max<long long>(1, std::llround(std::fabs(cfg.t_max / cfg.dt)));
  const double dte = (cfg.dt < 0 ? -1.0 : 1.0) * cfg.t_max / double(S);

  const PhaseTables tab = build_tables(cfg, nx, ny, dte);
  const cplx eph_f =
      std::exp(cplx(-0.5 * cfg.gamma_star * dte, -cfg.emitters.delta * dte));
  const cplx eph_h = std::exp(
      cplx(-0.25 * cfg.gamma_star * dte, -0.5 * cfg.emitters.delta * dte));
  const double theta = cfg.emitters.g * dte;
  const double rc = std::cos(theta);
  const double rs = std::sin(theta);

  std::vector<int> sx(E), sy(E);
  std::vector<Eigen::VectorXcd> ex(E), ey(E);
  for (int e = 0; e < E; ++e) {
    sx[e] = effective_site(N, cfg.emitters.positions[e].x());
    sy[e] = dim == 2 ? effective_site(N, cfg.emitters.positions[e].y()) : 0;
    ex[e].resize(nx);
    for (int i = 0; i < nx; ++i)
      ex[e](i) = std::exp(cplx(0.0, two_pi * i * sx[e] / double(nx)));
    if (ny > 1) {
      ey[e].resize(ny);
      for (int i = 0; i < ny; ++i)
        ey[e](i) = std::exp(cplx(0.0, two_pi * i * sy[e] / double(ny)));
    } else {
      ey[e] = Eigen::VectorXcd::Ones(1);
    }
  }

  const bool literal = cfg.use_fft_interaction || E > max_projected_emitters;
  const bool strang = cfg.strang;

  Trajectory traj;
  traj.config = cfg;
  traj.initial_emitters = state.emitters;

  std::set<long long> snap_steps;
  for (double ts : cfg.snapshot_times) {
    long long k = std::llround(std::fabs(ts) / std::fabs(dte));
    snap_steps.insert(std::clamp<long long>(k, 0, S));
  }
  std::set<long long> wrap_steps;
  for (int k = 1; k <= cfg.wrap_checks; ++k)
    wrap_steps.insert(std::max<long long>(1, (S * k) / cfg.wrap_checks));

  auto record = [&](double t, const Eigen::VectorXcd& ce, double norm2) {
    traj.times.push_back(t);
    traj.emitter_amps.push_back(ce);
    traj.norms.push_back(norm2);
  };

  auto fft_to_position = [&](Eigen::VectorXcd& g) {
    if (dim == 2)
      fft::inverse_2d(g, N);
    else
      fft::inverse_1d(g);
  };

  // true momentum-space state given the in-flight buffer and the tables of
  // the pass that just ran
  auto true_momentum = [&](long long n) {
    Eigen::VectorXcd scratch = state.bath_amps;
    if (n < S) {
      if (strang)
        apply_separable(scratch, nx, ny, tab.ihx.data(), tab.ihy.data());
      else
        apply_separable(scratch, nx, ny, tab.ifx.data(), tab.ify.data());
    }
    return scratch;
  };

  auto take_snapshot = [&](double t, const Eigen::VectorXcd& momentum) {
    BathSnapshot snap;
    snap.t = t;
    snap.dim = dim;
    snap.N = N;
    snap.momentum_density = momentum.cwiseAbs2();
    Eigen::VectorXcd pos = momentum;
    fft_to_position(pos);
    snap.position_density = pos.cwiseAbs2();
    traj.snapshots.push_back(std::move(snap));
  };

  auto check_wraparound = [&](double t, const Eigen::VectorXcd& momentum) {
    if (traj.wraparound_warned) return;
    Eigen::VectorXcd pos = momentum;
    fft_to_position(pos);
    double worst = 0.0;
    for (int e = 0; e < E; ++e) {
      const int h = N / 2;
      worst = std::max(worst,
                       patch_population(pos, nx, ny, sx[e] + h, sy[e]));
      if (dim == 2) {
        worst = std::max(worst,
                         patch_population(pos, nx, ny, sx[e], sy[e] + h));
        worst = std::max(
            worst, patch_population(pos, nx, ny, sx[e] + h, sy[e] + h));
      }
    }
    if (worst > 1e-4) {
      traj.wraparound_warned = true;
      traj.wraparound_time = t;
      traj.warnings.push_back(
          "finite-size wraparound: population " + std::to_string(worst) +
          " near an emitter boundary image at t=" + std::to_string(t));
      if (cfg.strict_wraparound)
        throw std::runtime_error(traj.warnings.back());
    }
  };

  record(0.0, state.emitters, state.norm2());
  if (snap_steps.count(0)) take_snapshot(0.0, state.bath_amps);

  Eigen::VectorXcd ce = state.emitters;
  std::vector<cplx> acc(E, cplx(0.0));
  std::vector<cplx> src(E, cplx(0.0));

  // leading phase segment
  if (literal) {
    if (strang) {
      apply_separable(state.bath_amps, nx, ny, tab.hx.data(), tab.hy.data());
      ce *= eph_h;
    } else {
      apply_separable(state.bath_amps, nx, ny, tab.fx.data(), tab.fy.data());
      ce *= eph_f;
    }
  } else {
    fused_pass(state.bath_amps.data(), nx, ny,
               strang ? tab.hx.data() : tab.fx.data(),
               strang ? tab.hy.data() : tab.fy.data(), ex, ey, nullptr,
               acc.data(), E);
    ce *= strang ? eph_h : eph_f;
  }

  const double kappa_half = std::exp(cfg.kappa * dte * 0.5);
  const double kappa_full = std::exp(cfg.kappa * dte);

  for (long long n = 1; n <= S; ++n) {
    double bathsq;
    if (literal) {
      fft_to_position(state.bath_amps);
      for (int e = 0; e < E; ++e) {
        const std::size_t idx = std::size_t(sy[e]) * nx + sx[e];
        const cplx cn = state.bath_amps(idx);
        const cplx ce_new = rc * ce(e) - cplx(0.0, rs) * cn;
        state.bath_amps(idx) = -cplx(0.0, rs) * ce(e) + rc * cn;
        ce(e) = ce_new;
      }
      if (dim == 2)
        fft::forward_2d(state.bath_amps, N);
      else
        fft::forward_1d(state.bath_amps);
      const bool last = n == S;
      const cplx* px = last ? (strang ? tab.hx.data() : tab.ones.data())
                            : tab.fx.data();
      const cplx* py = last ? (strang ? tab.hy.data() : tab.ones.data())
                            : tab.fy.data();
      apply_separable(state.bath_amps, nx, ny, px, py);
      bathsq = state.bath_amps.squaredNorm();
    } else {
      for (int e = 0; e < E; ++e) {
        const cplx cn = acc[e] / sqrt_m;
        const cplx ce_new = rc * ce(e) - cplx(0.0, rs) * cn;
        const cplx cn_new = -cplx(0.0, rs) * ce(e) + rc * cn;
        ce(e) = ce_new;
        src[e] = (cn_new - cn) / sqrt_m;
      }
      const bool last = n == S;
      const cplx* px = last ? (strang ? tab.hx.data() : tab.ones.data())
                            : tab.fx.data();
      const cplx* py = last ? (strang ? tab.hy.data() : tab.ones.data())
                            : tab.fy.data();
      bathsq = fused_pass(state.bath_amps.data(), nx, ny, px, py, ex, ey,
                          src.data(), acc.data(), E);
    }

    const bool last = n == S;
    // undo the damping the overshooting phase tables already applied so the
    // recorded norms refer to the state at exactly t_n
    const double corr = last ? 1.0 : (strang ? kappa_half : kappa_full);
    const cplx rec_factor = strang ? eph_h : cplx(1.0);

    const bool want_record = (n % cfg.record_every == 0) || last;
    if (want_record) {
      const Eigen::VectorXcd rec_ce = ce * rec_factor;
      record(n * dte, rec_ce, bathsq * corr + rec_ce.squaredNorm());
    }

    if (snap_steps.count(n) || wrap_steps.count(n)) {
      const Eigen::VectorXcd truem = last ? state.bath_amps : true_momentum(n);
      if (snap_steps.count(n)) take_snapshot(n * dte, truem);
      if (wrap_steps.count(n)) check_wraparound(n * dte, truem);
    }

    ce *= last ? (strang ? eph_h : cplx(1.0)) : eph_f;
  }

  state.emitters = ce;
  state.space = SingleExcitationState::Space::Momentum;
  traj.final_state = std::make_shared<SingleExcitationState>(std::move(state));
  return traj;
}

}  // namespace

double SingleExcitationState::norm2() const {
  return emitters.squaredNorm() + bath_amps.squaredNorm();
}

void SingleExcitationState::to_position() {
  if (space == Space::Position) return;
  if (bath.dim == 2)
    fft::inverse_2d(bath_amps, bath.N);
  else
    fft::inverse_1d(bath_amps);
  space = Space::Position;
}

void SingleExcitationState::to_momentum() {
  if (space == Space::Momentum) return;
  if (bath.dim == 2)
    fft::forward_2d(bath_amps, bath.N);
  else
    fft::forward_1d(bath_amps);
  space = Space::Momentum;
}

void EvolveConfig::validate() const { check_config(*this, false); }

cplx Trajectory::tracked_amplitude(std::size_t i) const {
  return initial_emitters.dot(emitter_amps.at(i));
}

Trajectory split_step_evolve(const EvolveConfig& config) {
  check_config(config, false);
  return evolve_impl(config, build_initial_state(config), false);
}

Trajectory split_step_evolve(const EvolveConfig& config,
                             SingleExcitationState state) {
  return evolve_impl(config, std::move(state), true);
}

Trajectory freq_binned_evolve(const EvolveConfig& config, double bin_width) {
  check_config(config, false);
  if (config.emitters.count() != 1)
    throw std::invalid_argument("frequency binning supports a single emitter");
  if (!(bin_width > 0))
    throw std::invalid_argument("bin width must be positive");
  const double edge = config.bath.band_edge();
  const long long B = std::llround(2.0 * edge / bin_width);
  if (B < 1 || std::fabs(B * bin_width - 2.0 * edge) > 1e-9 * edge)
    throw std::invalid_argument("bin width must divide the band evenly");

  Trajectory traj;
  traj.config = config;

  // per-bin mode counts from the density of states; the lattice-size factors
  // cancel between the count and the single-mode coupling
  std::vector<double> omega, coupling;
  quad::Options opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-10;
  auto density = [&](double w) { return dos(config.bath, w); };
  for (long long b = 0; b < B; ++b) {
    const double lo = -edge + b * bin_width;
    const double hi = lo + bin_width;
    double weight;
    if (lo < 0.0 && hi > 0.0 && config.bath.dim == 2) {
      weight = quad::integrate(density, lo, -1e-12, opt) +
               quad::integrate(density, 1e-12, hi, opt);
    } else {
      weight = quad::integrate(density, lo, hi, opt);
    }
    if (weight <= 0) continue;
    omega.push_back(lo + 0.5 * bin_width);
    coupling.push_back(config.emitters.g * std::sqrt(weight));
  }
  const int nb = static_cast<int>(omega.size());
  double gtot2 = 0.0;
  for (double gb : coupling) gtot2 += gb * gb;
  const double gtot = std::sqrt(gtot2);

  const double d_at = config.bath.dim == 2 && config.emitters.delta == 0.0
                          ? std::numeric_limits<double>::infinity()
                          : dos(config.bath, config.emitters.delta);
  if (std::isfinite(d_at) && d_at > 0) {
    const double gamma_rel =
        two_pi * config.emitters.g * config.emitters.g * d_at;
    if (bin_width > gamma_rel / 10.0)
      traj.warnings.push_back(
          "bin width exceeds a tenth of the relaxation rate; binned dynamics "
          "may be underresolved");
  }

  const long long S =
      std::max<long long>(1, std::llround(std::fabs(config.t_max / config.dt)));
  const double dte = config.t_max / double(S);
  const double theta = gtot * dte;
  const double rc = std::cos(theta);
  const double rs = std::sin(theta);
  const cplx eph_f = std::exp(
      cplx(-0.5 * config.gamma_star * dte, -config.emitters.delta * dte));
  const cplx eph_h = std::exp(
      cplx(-0.25 * config.gamma_star * dte, -0.5 * config.emitters.delta * dte));
  Eigen::VectorXcd ph_f(nb), ph_h(nb);
  for (int b = 0; b < nb; ++b) {
    ph_f(b) = std::exp(cplx(-0.5 * config.kappa * dte, -omega[b] * dte));
    ph_h(b) = std::exp(cplx(-0.25 * config.kappa * dte, -0.5 * omega[b] * dte));
  }

  Eigen::VectorXcd bins = Eigen::VectorXcd::Zero(nb);
  cplx ce(1.0, 0.0);
  traj.initial_emitters = Eigen::VectorXcd::Ones(1);

  auto record = [&](double t, cplx amp, double norm2) {
    traj.times.push_back(t);
    Eigen::VectorXcd v(1);
    v(0) = amp;
    traj.emitter_amps.push_back(v);
    traj.norms.push_back(norm2);
  };
  record(0.0, ce, 1.0);

  const bool strang = config.strang;
  bins = (strang ? ph_h : ph_f).cwiseProduct(bins);
  ce *= strang ? eph_h : eph_f;

  for (long long n = 1; n <= S; ++n) {
    cplx beta(0.0);
    for (int b = 0; b < nb; ++b) beta += (coupling[b] / gtot) * bins(b);
    const cplx ce_new = rc * ce - cplx(0.0, rs) * beta;
    const cplx beta_new = -cplx(0.0, rs) * ce + rc * beta;
    const cplx dbeta = beta_new - beta;
    for (int b = 0; b < nb; ++b) bins(b) += (coupling[b] / gtot) * dbeta;
    ce = ce_new;

    const bool last = n == S;
    if (last) {
      if (strang) bins = ph_h.cwiseProduct(bins);
    } else {
      bins = ph_f.cwiseProduct(bins);
    }
    const double corr =
        last ? 1.0
             : std::exp(config.kappa * dte * (strang ? 0.5 : 1.0));
    const cplx rec = ce * (strang ? eph_h : cplx(1.0));
    if (n % config.record_every == 0 || last)
      record(n * dte, rec, bins.squaredNorm() * corr + std::norm(rec));
    ce *= last ? (strang ? eph_h : cplx(1.0)) : eph_f;
  }
  return traj;
}

LossSummary apply_loss(const Trajectory& lossless, double kappa,
                       double gamma_star) {
  if (kappa < 0 || gamma_star < 0)
    throw std::invalid_argument("loss rates must be nonnegative");
  LossSummary out;
  if (kappa == gamma_star) {
    // uniform loss commutes with the lossless dynamics
    out.times = lossless.times;
    for (std::size_t i = 0; i < lossless.times.size(); ++i) {
      const double scale = std::exp(-kappa * lossless.times[i]);
      out.emitter_pops.push_back(scale *
                                 lossless.emitter_amps[i].cwiseAbs2());
      const double w = scale * lossless.norms[i];
      out.excitation_weight.push_back(w);
      out.vacuum_weight.push_back(1.0 - w);
    }
    return out;
  }
  EvolveConfig cfg = lossless.config;
  cfg.kappa = kappa;
  cfg.gamma_star = gamma_star;
  const Trajectory damped = split_step_evolve(cfg);
  out.times = damped.times;
  for (std::size_t i = 0; i < damped.times.size(); ++i) {
    out.emitter_pops.push_back(damped.emitter_amps[i].cwiseAbs2());
    out.excitation_weight.push_back(damped.norms[i]);
    out.vacuum_weight.push_back(1.0 - damped.norms[i]);
  }
  return out;
}

double extract_decay_rate(const Trajectory& traj) {
  const double target = std::exp(-1.0);
  if (traj.times.size() < 2)
    throw std::runtime_error("trajectory too short for a rate estimate");
  double prev = std::norm(traj.tracked_amplitude(0));
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    const double cur = std::norm(traj.tracked_amplitude(i));
    if (prev > target && cur <= target) {
      const double t0 = traj.times[i - 1];
      const double t1 = traj.times[i];
      const double frac = (prev - target) / (prev - cur);
      const double tstar = t0 + frac * (t1 - t0);
      return 1.0 / tstar;
    }
    prev = cur;
  }
  throw std::runtime_error("population never crossed 1/e");
}

Eigen::VectorXd snapshot(const SingleExcitationState& state,
                         SingleExcitationState::Space space) {
  SingleExcitationState copy = state;
  if (space == SingleExcitationState::Space::Position)
    copy.to_position();
  else
    copy.to_momentum();
  return copy.bath_amps.cwiseAbs2();
}

}  // namespace lqed

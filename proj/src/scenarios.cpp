#include "lqed/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqed/resolvent.hpp"

namespace lqed {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("initial state: " + msg);
}

void require_2d(const BathModel& bath, const char* what) {
  if (bath.dim != 2) fail(std::string(what) + " requires a 2D bath");
}

void check_four_square(const std::vector<Eigen::Vector2i>& pos) {
  if (pos[0].y() != 0 || pos[0].x() < 2 || pos[0].x() % 2 != 0)
    fail("FourB placement must match the four-site square layout");
  const int n = pos[0].x() / 2;
  const auto want = four_qe_square(n);
  for (int j = 0; j < 4; ++j)
    if (pos[j] != want[j])
      fail("FourB emitter " + std::to_string(j + 1) +
           " is not at its square-layout position");
}

void check_diagonal_chain(const std::vector<Eigen::Vector2i>& pos) {
  for (int j = 0; j < static_cast<int>(pos.size()); ++j) {
    const int c = 2 * (j + 1);
    if (pos[j].x() != c || pos[j].y() != c)
      fail("SymmetricN emitter " + std::to_string(j + 1) + " must sit at (" +
           std::to_string(c) + "," + std::to_string(c) + ")");
  }
}

EvolveConfig make_config(int dim, double g, double delta,
                         std::vector<Eigen::Vector2i> positions, InitialTag tag,
                         double dt, double t_max) {
  EvolveConfig cfg;
  cfg.bath.dim = dim;
  cfg.bath.J = 1.0;
  cfg.emitters.g = g;
  cfg.emitters.delta = delta;
  cfg.emitters.positions = std::move(positions);
  cfg.initial = tag;
  cfg.dt = dt;
  cfg.t_max = t_max;
  cfg.bath.N = auto_lattice_size(t_max, cfg.bath.J, cfg.emitters);
  return cfg;
}

std::vector<Eigen::Vector2i> diagonal_chain(int count) {
  std::vector<Eigen::Vector2i> pos;
  pos.reserve(count);
  for (int j = 1; j <= count; ++j) pos.emplace_back(2 * j, 2 * j);
  return pos;
}

std::string num(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

void validate_initial_state(const BathModel& bath, const EmitterConfig& emitters,
                            InitialTag tag) {
  const int count = emitters.count();
  switch (tag) {
    case InitialTag::SingleExcited:
      if (count != 1) fail("SingleExcited requires exactly one emitter");
      break;
    case InitialTag::PlusPair:
    case InitialTag::MinusPair:
      if (count != 2) fail("pair states require exactly two emitters");
      break;
    case InitialTag::FourB:
      if (count != 4) fail("FourB requires exactly four emitters");
      require_2d(bath, "FourB");
      check_four_square(emitters.positions);
      break;
    case InitialTag::SymmetricN:
      require_2d(bath, "SymmetricN");
      check_diagonal_chain(emitters.positions);
      break;
  }
}

SingleExcitationState build_initial_state(const BathModel& bath,
                                          const EmitterConfig& emitters,
                                          InitialTag tag) {
  validate_initial_state(bath, emitters, tag);
  const int count = emitters.count();

  SingleExcitationState state;
  state.bath = bath;
  state.space = SingleExcitationState::Space::Momentum;
  const long sites = bath.dim == 2 ? static_cast<long>(bath.N) * bath.N : bath.N;
  state.bath_amps = Eigen::VectorXcd::Zero(sites);

  state.emitters = Eigen::VectorXcd::Zero(count);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (tag) {
    case InitialTag::SingleExcited:
      state.emitters(0) = 1.0;
      break;
    case InitialTag::PlusPair:
      state.emitters(0) = inv_sqrt2;
      state.emitters(1) = inv_sqrt2;
      break;
    case InitialTag::MinusPair:
      state.emitters(0) = inv_sqrt2;
      state.emitters(1) = -inv_sqrt2;
      break;
    case InitialTag::FourB:
      for (int j = 0; j < 4; ++j) state.emitters(j) = (j % 2 == 0) ? 0.5 : -0.5;
      break;
    case InitialTag::SymmetricN:
      state.emitters.setConstant(1.0 / std::sqrt(static_cast<double>(count)));
      break;
  }
  return state;
}

SingleExcitationState build_initial_state(const EvolveConfig& config) {
  return build_initial_state(config.bath, config.emitters, config.initial);
}

std::vector<Eigen::Vector2i> four_qe_square(int n) {
  if (n < 1) throw std::invalid_argument("four_qe_square: n must be >= 1");
  return {Eigen::Vector2i(2 * n, 0), Eigen::Vector2i(0, 2 * n),
          Eigen::Vector2i(2 * n, 4 * n), Eigen::Vector2i(4 * n, 2 * n)};
}

std::pair<double, double> mode_normalization(const Eigen::Vector2d& q, int n) {
  const double cx = std::cos(4.0 * n * q.x());
  const double cy = std::cos(4.0 * n * q.y());
  const double a2 = std::max(0.0, 1.0 + cx * cy + cx + cy);
  const double b2 = std::max(0.0, 1.0 + cx * cy - cx - cy);
  return {2.0 * std::sqrt(a2), 2.0 * std::sqrt(b2)};
}

Preset preset(const std::string& name) {
  Preset p;
  p.name = name;

  if (name == "fig2") {
    p.description =
        "single emitter on a chain, strong coupling: full decay at band "
        "center versus a persistent fraction at the lower band edge";
    for (double delta : {0.0, -2.0}) {
      PresetCase c;
      c.label = "delta=" + num(delta);
      c.config = make_config(1, 0.4, delta, {{0, 0}}, InitialTag::SingleExcited,
                             0.05, 200.0);
      if (delta == 0.0) c.expectations["markov_rate"] = 0.4 * 0.4;
      p.cases.push_back(std::move(c));
    }
    return p;
  }

  if (name == "fig4") {
    p.description =
        "emitter pair on a chain at band center, spacing 42: the symmetric "
        "state stops decaying at the retardation-reduced plateau";
    PresetCase c;
    c.label = "n12=42";
    c.config = make_config(1, 0.1, 0.0, {{0, 0}, {42, 0}}, InitialTag::PlusPair,
                           0.05, 300.0);
    const double r = closed_form::pair_residue_1d(0.1, 1.0, 0.0, 42);
    c.expectations["plateau"] = r * r;
    p.cases.push_back(std::move(c));
    return p;
  }

  if (name == "fig5") {
    p.description =
        "single emitter at the center of a square-lattice band: "
        "logarithmically enhanced decay, one damped oscillation, then a "
        "subexponential tail";
    for (double g : {0.1, 0.2, 0.3}) {
      PresetCase c;
      c.label = "g=" + num(g);
      c.config = make_config(2, g, 0.0, {{0, 0}}, InitialTag::SingleExcited,
                             0.1, 1000.0);
      c.expectations["nonmarkov_rate"] = closed_form::nonmarkov_rate_2d(g, 1.0);
      p.cases.push_back(std::move(c));
    }
    return p;
  }

  if (name == "fig7") {
    p.description =
        "emitter pair on the square-lattice diagonal at band center: the "
        "antisymmetric state decays slower the closer the pair";
    for (int n : {2, 4, 6, 8, 10}) {
      PresetCase c;
      c.label = "n=" + std::to_string(n);
      c.config = make_config(2, 0.1, 0.0, {{0, 0}, {n, n}}, InitialTag::MinusPair,
                             0.1, 400.0);
      p.cases.push_back(std::move(c));
    }
    return p;
  }

  if (name == "fig9") {
    p.description =
        "four emitters on the square layout at band center, alternating-sign "
        "state: decay freezes at the retardation plateau";
    for (int n = 1; n <= 8; ++n) {
      PresetCase c;
      c.label = "n=" + std::to_string(n);
      c.config = make_config(2, 0.05, 0.0, four_qe_square(n), InitialTag::FourB,
                             0.1, 150.0 + 50.0 * n);
      const double r = closed_form::four_emitter_residue(0.05, 1.0, n);
      c.expectations["plateau"] = r * r;
      p.cases.push_back(std::move(c));
    }
    return p;
  }

  if (name == "fig10") {
    p.description =
        "diagonal chains of 1 to 15 emitters in the symmetric state: "
        "collective decay rate grows with emitter number and saturates";
    for (double g : {0.05, 0.075, 0.1}) {
      for (int ne = 1; ne <= 15; ++ne) {
        PresetCase c;
        c.label = "g=" + num(g) + ",Ne=" + std::to_string(ne);
        c.config = make_config(2, g, 0.0, diagonal_chain(ne),
                               InitialTag::SymmetricN, 0.1, 60.0);
        c.expectations["single_rate"] = closed_form::nonmarkov_rate_2d(g, 1.0);
        p.cases.push_back(std::move(c));
      }
    }
    return p;
  }

  if (name == "fig11b") {
    p.description =
        "four-emitter alternating-sign state with lossy bath modes: the "
        "plateau drains at kappa times the bath fraction of the dressed state";
    const double g = 0.1;
    const double r = closed_form::four_emitter_residue(g, 1.0, 1);
    for (double kappa : {0.01, 0.03, 0.1}) {
      PresetCase c;
      c.label = "kappa=" + num(kappa);
      c.config = make_config(2, g, 0.0, four_qe_square(1), InitialTag::FourB,
                             0.1, 1000.0);
      c.config.kappa = kappa;
      c.expectations["loss_timescale"] = 1.0 / ((1.0 - r * r) * kappa);
      p.cases.push_back(std::move(c));
    }
    return p;
  }

  throw std::invalid_argument("unknown preset \"" + name + "\"");
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig4", "fig5", "fig7", "fig9", "fig10", "fig11b"};
}

// Emitted waves travel at most 4J sites per unit time, so keeping N above
// 4 J t_max plus a margin covering the emitter extent stops them from
// wrapping back onto the emitters within the run.
int auto_lattice_size(double t_max, double J, const EmitterConfig& em) {
  int max_off = 0;
  for (const auto& p : em.positions)
    max_off = std::max({max_off, std::abs(p.x()), std::abs(p.y())});
  const double need = 4.0 * J * t_max + 2.0 * (max_off + 8);
  int n = 64;
  while (n < need && n < 8192) n *= 2;
  return n;
}

}  // namespace lqed

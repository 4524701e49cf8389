#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lqed/bath.hpp"
#include "lqed/resolvent.hpp"
#include "lqed/selfenergy.hpp"

using namespace lqed;

namespace {

constexpr double tau = 6.283185307179586;

cplx resolvent_at(const SelfEnergy& se, double delta, cplx z, Sheet sheet) {
  return 1.0 / (z - delta - se.value(z, sheet));
}

// independent residue oracle: 64-point trapezoidal contour integral of G
// around the pole, exponentially accurate for an analytic integrand
cplx contour_residue(const SelfEnergy& se, double delta, cplx z0, Sheet sheet,
                     double r) {
  cplx acc = 0.0;
  for (int k = 0; k < 64; ++k) {
    const cplx ph = std::exp(cplx(0.0, tau * k / 64.0));
    acc += resolvent_at(se, delta, z0 + r * ph, sheet) * ph;
  }
  return acc * (r / 64.0);
}

const PoleContribution* find_kind(const std::vector<PoleContribution>& ps,
                                  PoleKind kind) {
  for (const auto& p : ps)
    if (p.kind == kind) return &p;
  return nullptr;
}

}  // namespace

TEST_CASE("decomposition reconstructs unit amplitude at t = 0") {
  struct Case {
    SelfEnergy se;
    double delta;
    double tol;
  };
  const std::vector<Case> grid = {
      {SelfEnergy::single_1d(0.3, 1.0), -3.0, 1e-8},
      {SelfEnergy::single_1d(0.3, 1.0), 0.0, 1e-8},
      {SelfEnergy::single_1d(0.3, 1.0), 1.2, 1e-8},
      {SelfEnergy::plus_minus_1d(4, -1, 0.3, 1.0), 0.0, 1e-8},
      {SelfEnergy::plus_minus_1d(4, +1, 0.3, 1.0), 0.3, 1e-8},
      {SelfEnergy::pair_1d(3, 0.2, 1.0), 0.0, 1e-8},
      {SelfEnergy::plus_minus_1d(42, +1, 0.1, 1.0), 0.0, 1e-8},
      {SelfEnergy::single_2d(0.1, 1.0), 0.0, 1e-6},
      {SelfEnergy::single_2d(0.1, 1.0), -1.0, 1e-6},
      {SelfEnergy::single_2d(0.1, 1.0), 2.1, 1e-6},
      {SelfEnergy::plus_minus_2d({1, 1}, -1, 0.1, 1.0), 0.0, 1e-6},
      {SelfEnergy::plus_minus_2d({1, 0}, -1, 0.1, 1.0), 0.5, 1e-6},
      {SelfEnergy::plus_minus_2d({3, 3}, -1, 0.05, 1.0), 0.0, 1e-5},
      {SelfEnergy::plus_minus_2d({3, 3}, +1, 0.05, 1.0), 0.0, 1e-5},
      {SelfEnergy::plus_minus_2d({8, 8}, -1, 0.05, 1.0), 0.0, 1e-5},
  };
  for (const auto& c : grid) {
    CAPTURE(c.delta);
    auto d = decompose(c.se, c.delta);
    CHECK(std::abs(d.amplitude(0.0) - 1.0) < c.tol);
  }
}

TEST_CASE("every reported pole satisfies its sheet's pole condition") {
  const std::vector<std::pair<SelfEnergy, double>> cases = {
      {SelfEnergy::single_1d(0.3, 1.0), 0.0},
      {SelfEnergy::plus_minus_1d(42, +1, 0.1, 1.0), 0.0},
      {SelfEnergy::single_2d(0.1, 1.0), 0.3},
      {SelfEnergy::plus_minus_2d({3, 3}, -1, 0.05, 1.0), 0.0},
  };
  for (const auto& [se, delta] : cases) {
    auto d = decompose(se, delta);
    CHECK(!d.poles.empty());
    for (const auto& p : d.poles) {
      CAPTURE(p.z.real());
      CAPTURE(p.z.imag());
      const cplx f = p.z - delta - se.value(p.z, p.sheet);
      CHECK(std::abs(f) < 1e-9);
    }
  }
}

TEST_CASE("pole residues match an independent contour integral") {
  {
    auto se = SelfEnergy::single_1d(0.3, 1.0);
    auto bs = find_bound_states(se, 0.0);
    auto lbs = find_kind(bs, PoleKind::LowerBoundState);
    REQUIRE(lbs != nullptr);
    const cplx oracle = contour_residue(se, 0.0, lbs->z, Sheet::I, 2e-4);
    CHECK(std::abs(oracle - lbs->residue) < 1e-6 * std::abs(lbs->residue));
  }
  {
    auto se = SelfEnergy::single_2d(0.1, 1.0);
    auto ups = find_unstable_poles(se, 0.3);
    REQUIRE(ups.size() == 1);
    const cplx oracle =
        contour_residue(se, 0.3, ups[0].z, ups[0].sheet, 3e-3);
    CHECK(std::abs(oracle - ups[0].residue) < 1e-6 * std::abs(oracle));
  }
  {
    auto se = SelfEnergy::plus_minus_1d(42, +1, 0.1, 1.0);
    auto ups = find_unstable_poles(se, 0.0);
    const PoleContribution* dark = nullptr;
    const PoleContribution* ladder = nullptr;
    for (const auto& p : ups) {
      if (std::abs(p.z) < 1e-6) dark = &p;
      if (std::abs(p.z - cplx(-0.1887, -0.1881)) < 0.01) ladder = &p;
    }
    REQUIRE(dark != nullptr);
    REQUIRE(ladder != nullptr);
    const cplx dark_oracle = contour_residue(se, 0.0, dark->z, Sheet::II, 0.05);
    CHECK(std::abs(dark_oracle - dark->residue) < 1e-7);
    const cplx ladder_oracle =
        contour_residue(se, 0.0, ladder->z, Sheet::II, 0.02);
    CHECK(std::abs(ladder_oracle - ladder->residue) <
          1e-6 * std::abs(ladder_oracle));
  }
}

TEST_CASE("bound states sit symmetrically for symmetric detuning") {
  {
    auto bs = find_bound_states(SelfEnergy::single_1d(0.3, 1.0), 0.0);
    REQUIRE(bs.size() == 2);
    auto lbs = find_kind(bs, PoleKind::LowerBoundState);
    auto ubs = find_kind(bs, PoleKind::UpperBoundState);
    REQUIRE(lbs != nullptr);
    REQUIRE(ubs != nullptr);
    CHECK(lbs->z.real() == doctest::Approx(-ubs->z.real()).epsilon(1e-12));
    CHECK(lbs->residue.real() ==
          doctest::Approx(ubs->residue.real()).epsilon(1e-10));
    // exact quartic root for the band-center bound-state energy
    const double e_exact = -std::sqrt(2.0 + std::sqrt(4.0 + std::pow(0.3, 4)));
    CHECK(lbs->z.real() == doctest::Approx(e_exact).epsilon(1e-10));
  }
  {
    auto bs = find_bound_states(SelfEnergy::plus_minus_1d(42, +1, 0.1, 1.0), 0.0);
    REQUIRE(bs.size() == 2);
    for (const auto& p : bs) {
      CHECK(std::abs(p.z.real()) == doctest::Approx(2.000020829).epsilon(1e-8));
      CHECK(p.residue.real() ==
            doctest::Approx(1.916670122e-05).epsilon(1e-6));
    }
  }
}

TEST_CASE("2D band-edge bound states follow the logarithmic closed form") {
  struct Pt {
    double g, delta;
  };
  for (const Pt& c : {Pt{0.8, -4.0}, Pt{0.5, -3.9}, Pt{1.0, -4.0}}) {
    CAPTURE(c.g);
    auto bs = find_bound_states(SelfEnergy::single_2d(c.g, 1.0), c.delta);
    auto lbs = find_kind(bs, PoleKind::LowerBoundState);
    REQUIRE(lbs != nullptr);
    const double cf = closed_form::bound_state_energy_2d_lower(c.delta, c.g, 1.0);
    const double depth = std::fabs(lbs->z.real() + 4.0);
    CHECK(std::fabs(cf - lbs->z.real()) < 0.10 * depth);
  }
  // mirror symmetry of the two edge formulas at band center
  const double lo = closed_form::bound_state_energy_2d_lower(0.0, 0.6, 1.0);
  const double hi = closed_form::bound_state_energy_2d_upper(0.0, 0.6, 1.0);
  CHECK(lo == doctest::Approx(-hi).epsilon(1e-12));
}

TEST_CASE("1D pair keeps its lower bound state only inside the critical window") {
  const double w = closed_form::critical_detuning_1d(0.3, 1.0, 4);
  CHECK(w == doctest::Approx(0.18).epsilon(1e-6));
  auto se = SelfEnergy::plus_minus_1d(4, -1, 0.3, 1.0);
  auto inside = find_bound_states(se, -2.0 + 0.8 * w);
  auto outside = find_bound_states(se, -2.0 + 1.2 * w);
  int in_count = 0, out_count = 0;
  for (const auto& p : inside) in_count += p.kind == PoleKind::LowerBoundState;
  for (const auto& p : outside) out_count += p.kind == PoleKind::LowerBoundState;
  CHECK(in_count == 1);
  CHECK(out_count == 0);
}

TEST_CASE("band-center 2D emitter splits into a mirror pair of unstable poles") {
  auto ups = find_unstable_poles(SelfEnergy::single_2d(0.1, 1.0), 0.0);
  REQUIRE(ups.size() == 2);
  CHECK(ups[0].z.real() == doctest::Approx(-ups[1].z.real()).epsilon(1e-8));
  CHECK(ups[0].z.imag() == doctest::Approx(ups[1].z.imag()).epsilon(1e-8));
  CHECK(std::abs(ups[0].residue - std::conj(ups[1].residue)) < 1e-8);
  CHECK(std::abs(ups[0].z.real()) ==
        doctest::Approx(0.0044130801).epsilon(1e-6));
  CHECK(std::abs(ups[0].residue) ==
        doctest::Approx(0.89107586).epsilon(1e-6));
  const double rate = -2.0 * ups[0].z.imag();
  const double markov_like = closed_form::nonmarkov_rate_2d(0.1, 1.0);
  CHECK(std::fabs(rate - markov_like) < 0.03 * markov_like);

  auto shifted = find_unstable_poles(SelfEnergy::single_2d(0.1, 1.0), 0.3);
  REQUIRE(shifted.size() == 1);
  CHECK(shifted[0].z.real() == doctest::Approx(0.3025366).epsilon(1e-5));
  CHECK(shifted[0].z.imag() == doctest::Approx(-0.0063220716).epsilon(1e-5));
}

TEST_CASE("retardation ladder plus dark pole rebuild the symmetric pair") {
  auto se = SelfEnergy::plus_minus_1d(42, +1, 0.1, 1.0);
  auto d = decompose(se, 0.0);
  CHECK(d.poles.size() == 21);
  CHECK(d.cuts.size() == 2);

  const PoleContribution* dark = nullptr;
  for (const auto& p : d.poles)
    if (std::abs(p.z) < 1e-6) dark = &p;
  REQUIRE(dark != nullptr);
  const double cf = closed_form::pair_residue_1d(0.1, 1.0, 0.0, 42);
  CHECK(dark->residue.real() == doctest::Approx(cf).epsilon(1e-9));
  CHECK(cf == doctest::Approx(0.9049773756).epsilon(1e-9));

  // ladder resonances come in conjugate-mirror pairs across the axis
  int mirrored = 0;
  for (const auto& p : d.poles) {
    if (p.kind != PoleKind::Unstable || std::abs(p.z) < 1e-6) continue;
    for (const auto& q : d.poles)
      if (std::abs(q.z - cplx(-p.z.real(), p.z.imag())) < 1e-9 &&
          std::abs(q.residue - std::conj(p.residue)) < 1e-8)
        ++mirrored;
  }
  CHECK(mirrored == 18);

  const double plateau = std::norm(d.amplitude(300.0));
  CHECK(plateau == doctest::Approx(0.818756).epsilon(1e-3));
  CHECK(std::fabs(plateau - cf * cf) < 5e-4);
}

TEST_CASE("four-emitter dark pole carries the closed-form residue") {
  for (double g : {0.05, 0.3}) {
    for (int n : {1, 2}) {
      CAPTURE(g);
      CAPTURE(n);
      auto ups = find_unstable_poles(SelfEnergy::four_2d(n, g, 1.0), 0.0);
      REQUIRE(ups.size() == 1);
      CHECK(std::abs(ups[0].z) < 1e-6);
      const double cf = closed_form::four_emitter_residue(g, 1.0, n);
      CHECK(std::abs(ups[0].residue.real() - cf) < 1e-5 * cf);
      CHECK(std::abs(ups[0].residue.imag()) < 1e-7);
    }
  }
}

TEST_CASE("golden-rule rates and their breakdown points") {
  {
    auto mr = markov_rate(SelfEnergy::single_1d(0.2, 1.0), 0.0);
    CHECK(!mr.divergent);
    CHECK(mr.rate == doctest::Approx(0.04).epsilon(1e-4));
    CHECK(std::fabs(mr.lamb_shift) < 1e-6);
  }
  {
    auto mr = markov_rate(SelfEnergy::single_1d(0.2, 1.0), 1.0);
    CHECK(mr.rate == doctest::Approx(2.0 * 0.04 / std::sqrt(3.0)).epsilon(1e-4));
  }
  CHECK(markov_rate(SelfEnergy::single_1d(0.2, 1.0), 2.0).divergent);
  CHECK(markov_rate(SelfEnergy::single_1d(0.2, 1.0), -2.0).divergent);
  CHECK(markov_rate(SelfEnergy::single_2d(0.2, 1.0), 0.0).divergent);
  {
    auto mr = markov_rate(SelfEnergy::single_2d(0.2, 1.0), 1.5);
    CHECK(!mr.divergent);
    const double golden = tau * 0.04 * dos(BathModel::square(64), 1.5);
    CHECK(mr.rate == doctest::Approx(golden).epsilon(1e-4));
  }
}

TEST_CASE("decomposition agrees with windowed Fourier inversion") {
  struct Case {
    SelfEnergy se;
    double delta;
    double tol;
  };
  const std::vector<Case> cases = {
      {SelfEnergy::single_1d(0.3, 1.0), 0.7, 5e-6},
      {SelfEnergy::single_2d(0.1, 1.0), 0.0, 1e-5},
      {SelfEnergy::plus_minus_2d({3, 3}, -1, 0.05, 1.0), 0.0, 1e-5},
  };
  for (const auto& c : cases) {
    CAPTURE(c.delta);
    auto d = decompose(c.se, c.delta);
    FourierInversion fi(c.se, c.delta);
    for (double t : {2.0, 10.0, 40.0}) {
      CAPTURE(t);
      CHECK(std::abs(d.amplitude(t) - fi.amplitude(t)) < c.tol);
    }
  }
}

TEST_CASE("diagonal pair subradiant rate approaches its asymptote") {
  const double exact = subradiant_pole_2d(0.01, 1.0, 256);
  const double asym = closed_form::subradiant_rate_asymptote_2d(0.01, 1.0, 256);
  CHECK(std::fabs(asym - exact) < 2e-3 * exact);
  CHECK(exact == doctest::Approx(0.0002610324).epsilon(1e-6));
  CHECK(subradiant_pole_2d(0.01, 1.0, 64) < exact);
  CHECK_THROWS_AS(subradiant_pole_2d(0.0, 1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(subradiant_pole_2d(0.01, 1.0, 0), std::invalid_argument);
}

TEST_CASE("wide diagonal pair grows deep retardation resonances") {
  auto d = decompose(SelfEnergy::plus_minus_2d({8, 8}, -1, 0.05, 1.0), 0.0);
  REQUIRE(d.poles.size() == 4);
  for (const auto& p : d.poles) {
    CHECK(-p.z.imag() > 2.2);
    CHECK(-p.z.imag() < 2.7);
    bool has_mirror = false;
    for (const auto& q : d.poles)
      if (std::abs(q.z - cplx(-p.z.real(), p.z.imag())) < 1e-9)
        has_mirror = true;
    CHECK(has_mirror);
  }
}

TEST_CASE("configurations without continued sheets are rejected by decompose") {
  CHECK_THROWS_AS(decompose(SelfEnergy::four_2d(1, 0.05, 1.0), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(decompose(SelfEnergy::pair_2d({2, 1}, 0.05, 1.0), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      BranchCutContribution(SelfEnergy::single_1d(0.1, 1.0), 0.0, CutId::Middle),
      std::invalid_argument);
  BranchCutContribution bc(SelfEnergy::single_1d(0.1, 1.0), 0.0, CutId::Lower);
  CHECK_THROWS_AS(bc.value_at(-1.0), std::invalid_argument);
}

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lqed/io.hpp"
#include "lqed/resolvent.hpp"
#include "lqed/runconfig.hpp"
#include "lqed/scenarios.hpp"

namespace {

using namespace lqed;

constexpr const char* kVersion = "0.1.0";

std::string resolve_out_dir(const std::string& flag, const RunConfig& cfg) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("LQED_OUT"); env && *env) return env;
  return cfg.out_dir;
}

bool has_format(const RunConfig& cfg, const std::string& f) {
  for (const auto& item : cfg.formats)
    if (item == f) return true;
  return false;
}

// Emitter layout -> the self-energy the analytic machinery works with.
SelfEnergy analytic_model(const EvolveConfig& e) {
  const double g = e.emitters.g;
  const double J = e.bath.J;
  const bool one_d = e.bath.dim == 1;
  switch (e.initial) {
    case InitialTag::SingleExcited:
      return one_d ? SelfEnergy::single_1d(g, J) : SelfEnergy::single_2d(g, J);
    case InitialTag::PlusPair:
    case InitialTag::MinusPair: {
      const int sign = e.initial == InitialTag::PlusPair ? +1 : -1;
      const Eigen::Vector2i off =
          e.emitters.positions.at(1) - e.emitters.positions.at(0);
      if (one_d) return SelfEnergy::plus_minus_1d(std::abs(off.x()), sign, g, J);
      return SelfEnergy::plus_minus_2d(off, sign, g, J);
    }
    case InitialTag::FourB:
      return SelfEnergy::four_2d(e.emitters.positions.at(0).x() / 2, g, J);
    case InitialTag::SymmetricN:
      if (e.emitters.count() == 1)
        return SelfEnergy::single_2d(g, J);
      throw std::invalid_argument(
          "no analytic model for multi-emitter symmetric chains; use the "
          "splitstep method");
  }
  throw std::invalid_argument("unhandled initial state");
}

SelfEnergy analytic_model_at(const EvolveConfig& e, int n) {
  const double g = e.emitters.g;
  const double J = e.bath.J;
  switch (e.initial) {
    case InitialTag::PlusPair:
    case InitialTag::MinusPair: {
      const int sign = e.initial == InitialTag::PlusPair ? +1 : -1;
      if (e.bath.dim == 1) return SelfEnergy::plus_minus_1d(n, sign, g, J);
      return SelfEnergy::plus_minus_2d({n, n}, sign, g, J);
    }
    case InitialTag::FourB:
      return SelfEnergy::four_2d(n, g, J);
    default:
      throw std::invalid_argument(
          "scanning over n needs a pair or four-emitter configuration");
  }
}

std::vector<double> time_grid(const EvolveConfig& e) {
  const long steps = std::max<long>(1, std::llround(e.t_max / e.dt));
  std::vector<double> t(steps + 1);
  for (long i = 0; i <= steps; ++i) t[i] = i * e.dt;
  return t;
}

std::vector<Eigen::VectorXcd> resolvent_amplitudes(
    const SelfEnergy& se, double delta, const Eigen::VectorXcd& e0,
    const std::vector<double>& times) {
  std::vector<cplx> c(times.size());
  try {
    const DynamicsDecomposition d = decompose(se, delta);
    for (std::size_t i = 0; i < times.size(); ++i) c[i] = d.amplitude(times[i]);
  } catch (const std::invalid_argument&) {
    const FourierInversion fi(se, delta);
    for (std::size_t i = 0; i < times.size(); ++i) c[i] = fi.amplitude(times[i]);
  }
  std::vector<Eigen::VectorXcd> amps(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) amps[i] = c[i] * e0;
  return amps;
}

double resolved_bin_width(const RunConfig& cfg) {
  if (cfg.bin_width > 0.0) return cfg.bin_width;
  return 2.0 * cfg.evolve.bath.band_edge() / 4096.0;
}

std::string seconds_since(std::chrono::steady_clock::time_point t0) {
  const double s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

struct MethodResult {
  std::string method;
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> amps;
};

MethodResult run_method(const RunConfig& cfg, const std::string& method,
                        std::vector<std::string>* warnings) {
  MethodResult r;
  r.method = method;
  if (method == "splitstep") {
    Trajectory traj = split_step_evolve(cfg.evolve);
    if (warnings)
      warnings->insert(warnings->end(), traj.warnings.begin(),
                       traj.warnings.end());
    r.times = std::move(traj.times);
    r.amps = std::move(traj.emitter_amps);
  } else if (method == "freqbin") {
    Trajectory traj = freq_binned_evolve(cfg.evolve, resolved_bin_width(cfg));
    if (warnings)
      warnings->insert(warnings->end(), traj.warnings.begin(),
                       traj.warnings.end());
    r.times = std::move(traj.times);
    r.amps = std::move(traj.emitter_amps);
  } else {
    const SingleExcitationState st = build_initial_state(cfg.evolve);
    const SelfEnergy se = analytic_model(cfg.evolve);
    r.times = time_grid(cfg.evolve);
    r.amps = resolvent_amplitudes(se, cfg.evolve.emitters.delta, st.emitters,
                                  r.times);
  }
  return r;
}

int cmd_run(const std::string& config_path, const std::string& out_flag) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = RunConfig::from_file(config_path);
  const std::string out = resolve_out_dir(out_flag, cfg);
  ensure_directory(out);
  const std::string method = cfg.methods.front();

  std::vector<std::pair<std::string, std::string>> meta = {
      {"tool", "lqed"},
      {"version", kVersion},
      {"command", "run"},
      {"method", method},
  };
  if (!cfg.preset_name.empty()) {
    meta.emplace_back("preset", cfg.preset_name);
    meta.emplace_back("preset_case", cfg.preset_case);
  }

  std::vector<std::string> warnings;
  if (method == "resolvent") {
    if (!cfg.evolve.snapshot_times.empty())
      warnings.push_back("snapshots are not available for the resolvent method");
    const MethodResult r = run_method(cfg, method, nullptr);
    if (has_format(cfg, "csv"))
      write_trajectory_csv(out + "/trajectory.csv", r.times, r.amps);
  } else {
    Trajectory traj;
    if (method == "splitstep") {
      traj = split_step_evolve(cfg.evolve);
    } else {
      traj = freq_binned_evolve(cfg.evolve, resolved_bin_width(cfg));
    }
    warnings.insert(warnings.end(), traj.warnings.begin(), traj.warnings.end());
    if (has_format(cfg, "csv"))
      write_trajectory_csv(out + "/trajectory.csv", traj);
    if (has_format(cfg, "grid"))
      for (const auto& snap : traj.snapshots) write_snapshot_files(out, snap);
  }

  for (const auto& w : warnings) {
    std::cerr << "warning: " << w << "\n";
    meta.emplace_back("warning", w);
  }
  meta.emplace_back("wall_seconds", seconds_since(t0));
  write_manifest(out + "/manifest.txt", cfg, meta);
  std::cout << "wrote " << out << "\n";
  return 0;
}

std::vector<double> parse_range(const std::string& spec) {
  double a = 0.0, b = 0.0;
  long count = 0;
  char tail = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &a, &b, &count, &tail) != 3 ||
      count < 1)
    throw std::invalid_argument(
        "range must be start:stop:count with count >= 1, got \"" + spec + "\"");
  std::vector<double> xs(count);
  for (long i = 0; i < count; ++i)
    xs[i] = count == 1 ? a : a + (b - a) * i / double(count - 1);
  return xs;
}

void run_pool(std::size_t count, unsigned threads,
              const std::function<void(std::size_t)>& work) {
  threads = std::max(1u, std::min<unsigned>(threads, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        work(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

int cmd_scan(const std::string& config_path, const std::string& quantity,
             const std::string& range_spec, const std::string& over,
             unsigned threads, const std::string& out_flag) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = RunConfig::from_file(config_path);
  const std::vector<double> xs = parse_range(range_spec);
  if (over != "delta" && over != "n")
    throw std::invalid_argument("--over must be delta or n");

  const double nan = std::nan("");
  const auto model_at = [&](double x) {
    if (over == "n") return analytic_model_at(cfg.evolve, (int)std::lround(x));
    return analytic_model(cfg.evolve);
  };
  const auto delta_at = [&](double x) {
    return over == "delta" ? x : cfg.evolve.emitters.delta;
  };

  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows(xs.size());

  if (quantity == "selfenergy") {
    columns = {over, "re_sigma", "im_sigma", "lamb_shift", "decay_rate"};
    run_pool(xs.size(), threads, [&](std::size_t i) {
      const SelfEnergy se = model_at(xs[i]);
      const SigmaValue sv = se.retarded(delta_at(xs[i]));
      rows[i] = {xs[i], sv.value.real(), sv.value.imag(), sv.lamb_shift(),
                 sv.decay_rate()};
    });
  } else if (quantity == "poles") {
    columns = {over,     "lbs_e",  "lbs_r",  "ubs_e",  "ubs_r",  "n_up",
               "up1_re", "up1_im", "up1_r",  "up2_re", "up2_im", "up2_r"};
    run_pool(xs.size(), threads, [&](std::size_t i) {
      const SelfEnergy se = model_at(xs[i]);
      const double delta = delta_at(xs[i]);
      std::vector<double> row(columns.size(), nan);
      row[0] = xs[i];
      for (const auto& p : find_bound_states(se, delta)) {
        const int base = p.kind == PoleKind::LowerBoundState ? 1 : 3;
        row[base] = p.z.real();
        row[base + 1] = std::abs(p.residue);
      }
      const auto ups = find_unstable_poles(se, delta);
      row[5] = double(ups.size());
      for (std::size_t u = 0; u < ups.size() && u < 2; ++u) {
        row[6 + 3 * u] = ups[u].z.real();
        row[7 + 3 * u] = ups[u].z.imag();
        row[8 + 3 * u] = std::abs(ups[u].residue);
      }
      rows[i] = std::move(row);
    });
  } else if (quantity == "contributions") {
    columns = {over,  "lbs", "ubs",        "up1",        "up2",
               "lbc", "mbc", "ubc",        "total"};
    run_pool(xs.size(), threads, [&](std::size_t i) {
      const SelfEnergy se = model_at(xs[i]);
      const DynamicsDecomposition d = decompose(se, delta_at(xs[i]));
      std::vector<double> row(columns.size(), nan);
      row[0] = xs[i];
      int up_slot = 3;
      for (const auto& p : d.poles) {
        if (p.kind == PoleKind::LowerBoundState) row[1] = std::abs(p.residue);
        else if (p.kind == PoleKind::UpperBoundState) row[2] = std::abs(p.residue);
        else if (up_slot <= 4) row[up_slot++] = std::abs(p.residue);
      }
      for (const auto& cut : d.cuts) {
        const int col = cut.cut() == CutId::Lower ? 5
                        : cut.cut() == CutId::Middle ? 6 : 7;
        row[col] = std::abs(cut.value_at(0.0));
      }
      row[8] = std::abs(d.amplitude(0.0));
      rows[i] = std::move(row);
    });
  } else {
    throw std::invalid_argument(
        "--quantity must be selfenergy, poles, or contributions");
  }

  const std::string out = resolve_out_dir(out_flag, cfg);
  ensure_directory(out);
  write_csv(out + "/scan.csv", columns, rows);
  write_manifest(out + "/manifest.txt", cfg,
                 {{"tool", "lqed"},
                  {"version", kVersion},
                  {"command", "scan"},
                  {"quantity", quantity},
                  {"over", over},
                  {"range", range_spec},
                  {"wall_seconds", seconds_since(t0)}});
  std::cout << "wrote " << out << "/scan.csv\n";
  return 0;
}

int cmd_crosscheck(const std::string& config_path, bool strict,
                   const std::string& out_flag) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = RunConfig::from_file(config_path);
  if (cfg.methods.size() < 2)
    throw std::invalid_argument(
        "crosscheck needs at least two methods in the config");

  std::vector<std::string> warnings;
  std::vector<MethodResult> results;
  for (const auto& m : cfg.methods) results.push_back(run_method(cfg, m, &warnings));

  std::string report;
  bool all_pass = true;
  for (std::size_t a = 0; a < results.size(); ++a) {
    for (std::size_t b = a + 1; b < results.size(); ++b) {
      const std::size_t n =
          std::min(results[a].times.size(), results[b].times.size());
      double dev = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(results[a].times[i] - results[b].times[i]) > 1e-9)
          throw std::runtime_error("method time grids disagree");
        dev = std::max(dev, (results[a].amps[i] - results[b].amps[i])
                                .cwiseAbs()
                                .maxCoeff());
      }
      const bool pass = dev <= cfg.tolerance;
      all_pass = all_pass && pass;
      char line[160];
      std::snprintf(line, sizeof line,
                    "%s vs %s: max|dC| = %.6e (tolerance %.3e) %s\n",
                    results[a].method.c_str(), results[b].method.c_str(), dev,
                    cfg.tolerance, pass ? "PASS" : "FAIL");
      report += line;
    }
  }

  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  std::cout << report;
  const std::string out = resolve_out_dir(out_flag, cfg);
  ensure_directory(out);
  {
    std::vector<std::pair<std::string, std::string>> meta = {
        {"tool", "lqed"},
        {"version", kVersion},
        {"command", "crosscheck"},
        {"result", all_pass ? "pass" : "fail"},
        {"wall_seconds", seconds_since(t0)}};
    for (const auto& w : warnings) meta.emplace_back("warning", w);
    write_manifest(out + "/manifest.txt", cfg, meta);
  }
  std::ofstream rep(out + "/crosscheck.txt", std::ios::binary);
  rep << report;
  rep.close();

  if (!all_pass && strict) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum emitters coupled to 1D/2D tight-binding baths: "
               "split-step simulation and resolvent analysis"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string quantity, range_spec, over = "delta";
  bool strict = false;

  CLI::App* run = app.add_subcommand("run", "simulate and write trajectory");
  run->add_option("config", config_path, "run configuration file")->required();
  run->add_option("--out", out_flag, "output directory (overrides LQED_OUT)");
  run->add_option("--threads", threads, "worker threads");

  CLI::App* scan =
      app.add_subcommand("scan", "tabulate analytic quantities over a range");
  scan->add_option("config", config_path, "run configuration file")->required();
  scan->add_option("--quantity", quantity,
                   "selfenergy | poles | contributions")
      ->required();
  scan->add_option("--range", range_spec, "start:stop:count")->required();
  scan->add_option("--over", over, "scan variable: delta (default) or n");
  scan->add_option("--out", out_flag, "output directory (overrides LQED_OUT)");
  scan->add_option("--threads", threads, "worker threads");

  CLI::App* cross = app.add_subcommand(
      "crosscheck", "run the configured methods and compare them");
  cross->add_option("config", config_path, "run configuration file")->required();
  cross->add_flag("--strict", strict, "exit 2 when any comparison fails");
  cross->add_option("--out", out_flag, "output directory (overrides LQED_OUT)");
  cross->add_option("--threads", threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(run)) return cmd_run(config_path, out_flag);
    if (app.got_subcommand(scan))
      return cmd_scan(config_path, quantity, range_spec, over, threads, out_flag);
    return cmd_crosscheck(config_path, strict, out_flag);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

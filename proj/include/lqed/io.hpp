#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lqed/evolve.hpp"

namespace lqed {

struct RunConfig;

// Full-precision rendering (17 significant digits) used for every number the
// tool writes, so identical runs produce byte-identical files.
std::string format_sig17(double v);

void ensure_directory(const std::string& dir);

// Trajectory CSV: column t, then squared modulus and phase of each tracked
// emitter amplitude ("pop1,phase1,pop2,phase2,...").
std::string trajectory_csv(const std::vector<double>& times,
                           const std::vector<Eigen::VectorXcd>& amps);
void write_trajectory_csv(const std::string& path,
                          const std::vector<double>& times,
                          const std::vector<Eigen::VectorXcd>& amps);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Density grids as plain-text matrices, one file per space per time, each
// with a one-line header carrying dims, space, and time. Returns the paths
// written.
std::vector<std::string> write_snapshot_files(const std::string& dir,
                                              const BathSnapshot& snap);

// Manifest: the run's fully resolved configuration in the config dialect,
// followed by a [meta] section with the given entries. The result is itself
// a loadable config.
void write_manifest(const std::string& path, const RunConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& meta);

// Generic numeric CSV used by scans.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

}  // namespace lqed

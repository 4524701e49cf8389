#include "lqed/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "lqed/runconfig.hpp"

namespace lqed {

namespace {

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string time_label(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

}  // namespace

std::string format_sig17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create directory " + dir + ": " +
                             ec.message());
}

std::string trajectory_csv(const std::vector<double>& times,
                           const std::vector<Eigen::VectorXcd>& amps) {
  if (times.size() != amps.size())
    throw std::invalid_argument("trajectory_csv: times/amplitudes mismatch");
  const long n = amps.empty() ? 0 : amps.front().size();

  std::string out = "t";
  for (long j = 1; j <= n; ++j)
    out += ",pop" + std::to_string(j) + ",phase" + std::to_string(j);
  out += "\n";

  for (std::size_t i = 0; i < times.size(); ++i) {
    out += format_sig17(times[i]);
    for (long j = 0; j < n; ++j) {
      const cplx a = amps[i](j);
      out += ",";
      out += format_sig17(std::norm(a));
      out += ",";
      out += format_sig17(std::arg(a));
    }
    out += "\n";
  }
  return out;
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<double>& times,
                          const std::vector<Eigen::VectorXcd>& amps) {
  write_text_file(path, trajectory_csv(times, amps));
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  write_trajectory_csv(path, traj.times, traj.emitter_amps);
}

std::vector<std::string> write_snapshot_files(const std::string& dir,
                                              const BathSnapshot& snap) {
  ensure_directory(dir);
  std::vector<std::string> paths;
  const struct {
    const char* name;
    const Eigen::VectorXd* density;
  } spaces[] = {{"position", &snap.position_density},
                {"momentum", &snap.momentum_density}};

  for (const auto& sp : spaces) {
    const std::string path =
        dir + "/snapshot_t" + time_label(snap.t) + "_" + sp.name + ".txt";
    std::string body = "# dim=" + std::to_string(snap.dim) +
                       " N=" + std::to_string(snap.N) + " space=" + sp.name +
                       " t=" + format_sig17(snap.t) + "\n";
    const long rows = snap.dim == 2 ? snap.N : 1;
    const long cols = snap.N;
    for (long iy = 0; iy < rows; ++iy) {
      for (long ix = 0; ix < cols; ++ix) {
        if (ix) body += " ";
        body += format_sig17((*sp.density)(iy * cols + ix));
      }
      body += "\n";
    }
    write_text_file(path, body);
    paths.push_back(path);
  }
  return paths;
}

void write_manifest(const std::string& path, const RunConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& meta) {
  std::string body = config.serialize();
  body += "\n[meta]\n";
  for (const auto& [key, value] : meta) body += key + " = " + value + "\n";
  write_text_file(path, body);
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::string body;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (j) body += ",";
    body += columns[j];
  }
  body += "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw std::invalid_argument("write_csv: row width mismatch");
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) body += ",";
      body += format_sig17(row[j]);
    }
    body += "\n";
  }
  write_text_file(path, body);
}

}  // namespace lqed

#include "lqed/runconfig.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lqed/io.hpp"
#include "lqed/scenarios.hpp"

namespace lqed {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string cur;
  for (char c : value) {
    if (c == ',') {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  items.push_back(trim(cur));
  items.erase(std::remove(items.begin(), items.end(), std::string()),
              items.end());
  return items;
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    config_error("key \"" + key + "\" needs a number, got \"" + value + "\"");
  }
}

int parse_int(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    config_error("key \"" + key + "\" needs an integer, got \"" + value + "\"");
  }
}

std::vector<Eigen::Vector2i> parse_positions(const std::string& value) {
  std::vector<Eigen::Vector2i> out;
  std::size_t i = 0;
  const auto skip_separators = [&] {
    while (i < value.size() &&
           (value[i] == ' ' || value[i] == '\t' || value[i] == ','))
      ++i;
  };
  const auto read_int = [&]() -> int {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(value.substr(i), &used);
    } catch (const std::exception&) {
      config_error("malformed positions value \"" + value + "\"");
    }
    i += used;
    return v;
  };

  skip_separators();
  while (i < value.size()) {
    if (value[i] == '(') {
      ++i;
      const int x = read_int();
      skip_separators();
      const int y = read_int();
      skip_separators();
      if (i >= value.size() || value[i] != ')')
        config_error("unclosed position pair in \"" + value + "\"");
      ++i;
      out.emplace_back(x, y);
    } else {
      out.emplace_back(read_int(), 0);
    }
    skip_separators();
  }
  if (out.empty()) config_error("positions value is empty");
  return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"bath", {"dim", "N", "J"}},
      {"emitters", {"g", "delta", "positions", "preset", "case"}},
      {"initial", {"state"}},
      {"evolution",
       {"dt", "t_max", "snapshot_times", "method", "tolerance", "bin_width"}},
      {"loss", {"kappa", "gamma_star"}},
      {"output", {"directory", "formats"}},
  };
  return table;
}

struct ParsedFile {
  // (section, key) -> value, last occurrence wins
  std::map<std::pair<std::string, std::string>, std::string> entries;

  bool has(const std::string& sec, const std::string& key) const {
    return entries.count({sec, key}) != 0;
  }
  const std::string& get(const std::string& sec, const std::string& key) const {
    return entries.at({sec, key});
  }
};

ParsedFile parse_lines(const std::string& text) {
  ParsedFile file;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        config_error("line " + std::to_string(lineno) +
                     ": malformed section header \"" + s + "\"");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "meta" && known_keys().count(section) == 0)
        config_error("unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      config_error("line " + std::to_string(lineno) +
                   ": expected key = value, got \"" + s + "\"");
    if (section.empty())
      config_error("line " + std::to_string(lineno) +
                   ": key outside any section");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section == "meta") continue;
    if (known_keys().at(section).count(key) == 0)
      config_error("unknown key \"" + key + "\" in section [" + section + "]");
    file.entries[{section, key}] = value;
  }
  return file;
}

}  // namespace

std::string initial_tag_name(InitialTag tag) {
  switch (tag) {
    case InitialTag::SingleExcited: return "SingleExcited";
    case InitialTag::PlusPair: return "PlusPair";
    case InitialTag::MinusPair: return "MinusPair";
    case InitialTag::FourB: return "FourB";
    case InitialTag::SymmetricN: return "SymmetricN";
  }
  return "SingleExcited";
}

InitialTag initial_tag_from_name(const std::string& name) {
  if (name == "SingleExcited") return InitialTag::SingleExcited;
  if (name == "PlusPair") return InitialTag::PlusPair;
  if (name == "MinusPair") return InitialTag::MinusPair;
  if (name == "FourB") return InitialTag::FourB;
  if (name == "SymmetricN") return InitialTag::SymmetricN;
  config_error("unknown state \"" + name +
               "\"; expected SingleExcited, PlusPair, MinusPair, FourB, or "
               "SymmetricN");
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
  const ParsedFile file = parse_lines(text);
  RunConfig cfg;

  const bool has_preset = file.has("emitters", "preset");
  bool n_resolved = false;
  if (has_preset) {
    if (file.has("emitters", "positions"))
      config_error("give either positions or a preset, not both");
    cfg.preset_name = file.get("emitters", "preset");
    const Preset p = preset(cfg.preset_name);
    const PresetCase* chosen = nullptr;
    if (file.has("emitters", "case")) {
      cfg.preset_case = file.get("emitters", "case");
      for (const auto& c : p.cases)
        if (c.label == cfg.preset_case) chosen = &c;
      if (!chosen) {
        std::string labels;
        for (const auto& c : p.cases) labels += " \"" + c.label + "\"";
        config_error("preset \"" + p.name + "\" has no case \"" +
                     cfg.preset_case + "\"; available:" + labels);
      }
    } else if (p.cases.size() == 1) {
      chosen = &p.cases.front();
      cfg.preset_case = chosen->label;
    } else {
      std::string labels;
      for (const auto& c : p.cases) labels += " \"" + c.label + "\"";
      config_error("preset \"" + p.name +
                   "\" needs a case key; available:" + labels);
    }
    cfg.evolve = chosen->config;
    n_resolved = true;
  } else if (file.has("emitters", "case")) {
    config_error("key \"case\" is only meaningful together with a preset");
  } else if (file.has("emitters", "positions")) {
    cfg.evolve.emitters.positions =
        parse_positions(file.get("emitters", "positions"));
  }

  if (file.has("bath", "dim")) {
    const int dim = parse_int(file.get("bath", "dim"), "dim");
    if (dim != 1 && dim != 2) config_error("dim must be 1 or 2");
    cfg.evolve.bath.dim = dim;
  }
  if (file.has("bath", "J")) {
    const double J = parse_double(file.get("bath", "J"), "J");
    if (!(J > 0.0)) config_error("J must be positive");
    cfg.evolve.bath.J = J;
  }
  if (file.has("emitters", "g")) {
    const double g = parse_double(file.get("emitters", "g"), "g");
    if (g < 0.0) config_error("g must be nonnegative");
    cfg.evolve.emitters.g = g;
  }
  if (file.has("emitters", "delta"))
    cfg.evolve.emitters.delta = parse_double(file.get("emitters", "delta"), "delta");
  if (file.has("initial", "state"))
    cfg.evolve.initial = initial_tag_from_name(file.get("initial", "state"));
  if (file.has("evolution", "dt"))
    cfg.evolve.dt = parse_double(file.get("evolution", "dt"), "dt");
  if (file.has("evolution", "t_max"))
    cfg.evolve.t_max = parse_double(file.get("evolution", "t_max"), "t_max");
  if (file.has("evolution", "snapshot_times")) {
    cfg.evolve.snapshot_times.clear();
    for (const auto& item : split_list(file.get("evolution", "snapshot_times")))
      cfg.evolve.snapshot_times.push_back(parse_double(item, "snapshot_times"));
  }
  if (file.has("evolution", "method")) {
    cfg.methods = split_list(file.get("evolution", "method"));
    if (cfg.methods.empty()) config_error("method list is empty");
    for (const auto& m : cfg.methods)
      if (m != "splitstep" && m != "freqbin" && m != "resolvent")
        config_error("unknown method \"" + m +
                     "\"; expected splitstep, freqbin, or resolvent");
  }
  if (file.has("evolution", "tolerance")) {
    cfg.tolerance = parse_double(file.get("evolution", "tolerance"), "tolerance");
    if (!(cfg.tolerance > 0.0)) config_error("tolerance must be positive");
  }
  if (file.has("evolution", "bin_width")) {
    cfg.bin_width = parse_double(file.get("evolution", "bin_width"), "bin_width");
    if (cfg.bin_width < 0.0) config_error("bin_width must be nonnegative");
  }
  if (file.has("loss", "kappa")) {
    cfg.evolve.kappa = parse_double(file.get("loss", "kappa"), "kappa");
    if (cfg.evolve.kappa < 0.0) config_error("kappa must be nonnegative");
  }
  if (file.has("loss", "gamma_star")) {
    cfg.evolve.gamma_star =
        parse_double(file.get("loss", "gamma_star"), "gamma_star");
    if (cfg.evolve.gamma_star < 0.0) config_error("gamma_star must be nonnegative");
  }
  if (file.has("output", "directory"))
    cfg.out_dir = file.get("output", "directory");
  if (file.has("output", "formats")) {
    cfg.formats = split_list(file.get("output", "formats"));
    for (const auto& f : cfg.formats)
      if (f != "csv" && f != "grid")
        config_error("unknown format \"" + f + "\"; expected csv or grid");
  }

  if (has_preset && (file.has("evolution", "t_max") || file.has("bath", "dim") ||
                     file.has("bath", "J")))
    n_resolved = false;
  if (file.has("bath", "N")) {
    const int n = parse_int(file.get("bath", "N"), "N");
    if (n < 0) config_error("N must be nonnegative (0 = automatic)");
    if (n > 0) {
      cfg.evolve.bath.N = n;
      n_resolved = true;
    } else {
      n_resolved = false;
    }
  }
  if (!n_resolved)
    cfg.evolve.bath.N = auto_lattice_size(cfg.evolve.t_max, cfg.evolve.bath.J,
                                          cfg.evolve.emitters);
  return cfg;
}

std::string RunConfig::serialize() const {
  std::string out;
  out += "[bath]\n";
  out += "dim = " + std::to_string(evolve.bath.dim) + "\n";
  out += "N = " + std::to_string(evolve.bath.N) + "\n";
  out += "J = " + format_sig17(evolve.bath.J) + "\n";

  out += "\n[emitters]\n";
  out += "g = " + format_sig17(evolve.emitters.g) + "\n";
  out += "delta = " + format_sig17(evolve.emitters.delta) + "\n";
  out += "positions =";
  for (std::size_t i = 0; i < evolve.emitters.positions.size(); ++i) {
    const auto& p = evolve.emitters.positions[i];
    out += std::string(i ? "," : "") + " (" + std::to_string(p.x()) + "," +
           std::to_string(p.y()) + ")";
  }
  out += "\n";

  out += "\n[initial]\n";
  out += "state = " + initial_tag_name(evolve.initial) + "\n";

  out += "\n[evolution]\n";
  out += "dt = " + format_sig17(evolve.dt) + "\n";
  out += "t_max = " + format_sig17(evolve.t_max) + "\n";
  if (!evolve.snapshot_times.empty()) {
    out += "snapshot_times =";
    for (std::size_t i = 0; i < evolve.snapshot_times.size(); ++i)
      out += std::string(i ? "," : "") + " " +
             format_sig17(evolve.snapshot_times[i]);
    out += "\n";
  }
  out += "method =";
  for (std::size_t i = 0; i < methods.size(); ++i)
    out += std::string(i ? "," : "") + " " + methods[i];
  out += "\n";
  out += "tolerance = " + format_sig17(tolerance) + "\n";
  if (bin_width > 0.0) out += "bin_width = " + format_sig17(bin_width) + "\n";

  out += "\n[loss]\n";
  out += "kappa = " + format_sig17(evolve.kappa) + "\n";
  out += "gamma_star = " + format_sig17(evolve.gamma_star) + "\n";

  out += "\n[output]\n";
  out += "directory = " + out_dir + "\n";
  out += "formats =";
  for (std::size_t i = 0; i < formats.size(); ++i)
    out += std::string(i ? "," : "") + " " + formats[i];
  out += "\n";
  return out;
}

}  // namespace lqed

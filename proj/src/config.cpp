#include "spinwire/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace spinwire {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

struct KeyValue {
  std::string value;
  bool used = false;
};

using Section = std::map<std::string, KeyValue>;

class ParsedFile {
 public:
  explicit ParsedFile(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("config line " + std::to_string(lineno) +
                            ": malformed section header");
        section = trim(line.substr(1, line.size() - 2));
        sections_[section];
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": expected key = value");
      if (section.empty())
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": key outside of any [section]");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (sections_[section].count(key))
        throw ConfigError("config: duplicate key '" + section + "." + key + "'");
      sections_[section][key] = KeyValue{value, false};
    }
  }

  bool has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
  }

  std::string get(const std::string& section, const std::string& key) {
    auto& kv = sections_.at(section).at(key);
    kv.used = true;
    return kv.value;
  }

  void check_known_sections(const std::set<std::string>& known) const {
    for (const auto& [name, _] : sections_)
      if (!known.count(name)) throw ConfigError("config: unknown section [" + name + "]");
  }

  void check_all_used() const {
    for (const auto& [sname, section] : sections_)
      for (const auto& [kname, kv] : section)
        if (!kv.used)
          throw ConfigError("config: unknown key '" + sname + "." + kname + "'");
  }

 private:
  std::map<std::string, Section> sections_;
};

double parse_double(const std::string& where, const std::string& raw) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + where + "' expects a number, got '" + raw + "'");
  }
}

long long parse_int(const std::string& where, const std::string& raw) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + where + "' expects an integer, got '" + raw + "'");
  }
}

bool parse_bool(const std::string& where, const std::string& raw) {
  if (raw == "true") return true;
  if (raw == "false") return false;
  throw ConfigError("config: '" + where + "' expects true or false, got '" + raw + "'");
}

std::vector<double> parse_list(const std::string& where, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(where, trim(item)));
  return out;
}

class Reader {
 public:
  explicit Reader(ParsedFile& file) : file_(file) {}

  double number(const std::string& s, const std::string& k, double fallback) {
    return file_.has(s, k) ? parse_double(s + "." + k, file_.get(s, k)) : fallback;
  }
  double required_number(const std::string& s, const std::string& k) {
    if (!file_.has(s, k)) throw ConfigError("config: missing required key '" + s + "." + k + "'");
    return parse_double(s + "." + k, file_.get(s, k));
  }
  long long integer(const std::string& s, const std::string& k, long long fallback) {
    return file_.has(s, k) ? parse_int(s + "." + k, file_.get(s, k)) : fallback;
  }
  long long required_integer(const std::string& s, const std::string& k) {
    if (!file_.has(s, k)) throw ConfigError("config: missing required key '" + s + "." + k + "'");
    return parse_int(s + "." + k, file_.get(s, k));
  }
  bool boolean(const std::string& s, const std::string& k, bool fallback) {
    return file_.has(s, k) ? parse_bool(s + "." + k, file_.get(s, k)) : fallback;
  }
  std::string word(const std::string& s, const std::string& k, const std::string& fallback) {
    return file_.has(s, k) ? file_.get(s, k) : fallback;
  }
  std::vector<double> list(const std::string& s, const std::string& k) {
    return file_.has(s, k) ? parse_list(s + "." + k, file_.get(s, k))
                           : std::vector<double>{};
  }
  bool has(const std::string& s, const std::string& k) const { return file_.has(s, k); }

 private:
  ParsedFile& file_;
};

}  // namespace

SimConfig parse_config_text(const std::string& text) {
  ParsedFile file(text);
  file.check_known_sections(
      {"physics", "grid", "time", "scheme", "noise", "velocity", "run"});
  Reader r(file);

  SimConfig cfg;
  const double alpha = r.number("physics", "alpha", 1.0);
  const double gamma = r.number("physics", "gamma", 0.0);
  if (!(alpha > 0.0)) throw ConfigError("config: physics.alpha must be > 0");
  cfg.params = PhysParams(alpha, gamma);
  cfg.wall_width = r.number("physics", "wall_width", 1.0);

  cfg.h = r.required_number("grid", "h");
  cfg.n = static_cast<Eigen::Index>(r.required_integer("grid", "n"));
  cfg.origin = r.number("grid", "origin",
                        -0.5 * cfg.h * static_cast<double>(cfg.n - 1));
  const std::string boundary = r.word("grid", "boundary", "clamped");
  if (boundary == "periodic")
    cfg.boundary = Boundary::Periodic;
  else if (boundary == "clamped")
    cfg.boundary = Boundary::Clamped;
  else
    throw ConfigError("config: grid.boundary must be periodic or clamped");

  cfg.dt = r.required_number("time", "dt");
  cfg.T = r.required_number("time", "T");
  cfg.snapshot_stride = r.integer("time", "snapshot_stride", 1);

  const std::string method = r.word("scheme", "method", "em_ito");
  if (method == "em_ito")
    cfg.scheme = Scheme::EulerMaruyamaIto;
  else if (method == "heun_strat")
    cfg.scheme = Scheme::HeunStratonovich;
  else
    throw ConfigError("config: scheme.method must be em_ito or heun_strat");
  cfg.projection = r.boolean("scheme", "projection", true);
  cfg.cfl_override = r.boolean("scheme", "cfl_override", false);

  const std::string family = r.word("noise", "family", "none");
  if (family == "none")
    cfg.noise_family.kind = NoiseFamilySpec::Kind::None;
  else if (family == "gaussian_bumps")
    cfg.noise_family.kind = NoiseFamilySpec::Kind::GaussianBumps;
  else if (family == "fourier_envelope")
    cfg.noise_family.kind = NoiseFamilySpec::Kind::FourierEnvelope;
  else
    throw ConfigError(
        "config: noise.family must be none, gaussian_bumps or fourier_envelope");
  cfg.noise_modes = static_cast<int>(r.integer("noise", "J", 0));
  const std::string scale = r.word("noise", "scale", "geometric");
  if (scale == "geometric")
    cfg.noise_law.kind = AmplitudeLaw::Kind::Geometric;
  else if (scale == "power")
    cfg.noise_law.kind = AmplitudeLaw::Kind::Power;
  else
    throw ConfigError("config: noise.scale must be geometric or power");
  cfg.noise_law.amp = r.number("noise", "amp", 0.0);
  cfg.noise_law.ratio = r.number("noise", "ratio", 0.5);
  cfg.noise_law.exponent = r.number("noise", "exponent", 1.0);
  cfg.noise_family.width = r.number("noise", "width", 1.0);
  cfg.noise_family.spacing = r.number("noise", "spacing", 1.0);
  cfg.noise_family.center = r.number("noise", "center", 0.0);
  cfg.noise_family.envelope_width = r.number("noise", "envelope_width", 4.0);
  cfg.noise_family.omega0 = r.number("noise", "omega0", 1.0);

  const std::string kind = r.word("velocity", "kind", "constant");
  if (kind == "constant")
    cfg.velocity.kind = SpinVelocity::Kind::Constant;
  else if (kind == "pulse")
    cfg.velocity.kind = SpinVelocity::Kind::Pulse;
  else if (kind == "tabulated")
    cfg.velocity.kind = SpinVelocity::Kind::Tabulated;
  else
    throw ConfigError("config: velocity.kind must be constant, pulse or tabulated");
  cfg.velocity.value = r.number("velocity", "value", 0.0);
  cfg.velocity.t_on = r.number("velocity", "t_on", 0.0);
  cfg.velocity.t_off = r.number("velocity", "t_off", 0.0);
  cfg.velocity.times = r.list("velocity", "times");
  cfg.velocity.values = r.list("velocity", "values");
  if (cfg.velocity.kind == SpinVelocity::Kind::Tabulated) {
    if (cfg.velocity.times.empty() ||
        cfg.velocity.times.size() != cfg.velocity.values.size())
      throw ConfigError(
          "config: tabulated velocity needs matching non-empty times and values");
  }

  cfg.seed = static_cast<std::uint64_t>(r.integer("run", "seed", 0));

  file.check_all_used();
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SimConfig parse_config(const std::string& path) {
  return parse_config_text(read_file(path));
}

}  // namespace spinwire

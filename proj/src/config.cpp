#include "tether_dobc/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "tether_dobc/errors.hpp"

namespace tether_dobc {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scenario.kind",         "scenario.duration",         "scenario.dt_plant",
      "scenario.dt_ctrl",      "scenario.seed",             "vehicle.mass",
      "vehicle.gravity",       "vehicle.attachment",        "tether.stiffness",
      "tether.natural_length", "tether.anchor",             "tether.release_force",
      "tether.residual_weight", "controller.kp",            "controller.kd",
      "controller.tau_att",    "controller.yaw",            "estimator.kind",
      "rdo.c1",                "rdo.c2",                    "rdo.c3",
      "dob.gain",              "eso.poles",                 "disturbance.schedule",
      "reference.center",      "reference.radius",          "reference.period",
      "reference.altitude_start", "reference.altitude_max", "reference.climb_start",
      "reference.climb_end",   "reference.start",           "reference.direction",
      "reference.ramp_rate",   "reference.ramp_duration",   "noise.enabled",
      "noise.position_std",    "noise.velocity_std",        "initial.position",
      "initial.velocity"};
  return keys;
}

const char* const kRequired[] = {"scenario.kind", "vehicle.mass", "tether.stiffness",
                                 "tether.natural_length"};

/// Tracks where each key came from, for diagnostics.
class Locator {
 public:
  Locator(std::string source, const std::string& text) : source_(std::move(source)) {
    std::istringstream in(text);
    std::string line, section;
    for (int no = 1; std::getline(in, line); ++no) {
      boost::algorithm::trim(line);
      if (line.empty() || line[0] == ';' || line[0] == '#') continue;
      if (line.front() == '[' && line.back() == ']') {
        section = boost::algorithm::trim_copy(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = boost::algorithm::trim_copy(line.substr(0, eq));
      lines_[section.empty() ? key : section + "." + key] = "line " + std::to_string(no);
    }
  }

  void mark_override(const std::string& key) { lines_[key] = "--set"; }

  std::string where(const std::string& key) const {
    const auto it = lines_.find(key);
    return it == lines_.end() ? source_ : source_ + ":" + it->second;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(where(key) + ": field '" + key + "': " + what);
  }

 private:
  std::string source_;
  std::map<std::string, std::string> lines_;
};

class Reader {
 public:
  Reader(const pt::ptree& tree, const Locator& loc) : tree_(tree), loc_(loc) {}

  std::optional<std::string> raw(const std::string& key) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.')))
      return boost::algorithm::trim_copy(*v);
    return std::nullopt;
  }

  double to_double(const std::string& key, const std::string& text) const {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || std::isnan(v))
      loc_.fail(key, "expected a number, got '" + text + "'");
    return v;
  }

  std::vector<double> numbers(const std::string& key, const std::string& text) const {
    std::vector<std::string> parts;
    const std::string cleaned = boost::algorithm::trim_copy_if(text, boost::is_any_of(" \t"));
    boost::algorithm::split(parts, cleaned, boost::is_any_of(" \t,"), boost::token_compress_on);
    std::vector<double> out;
    for (const std::string& p : parts)
      if (!p.empty()) out.push_back(to_double(key, p));
    return out;
  }

  void read(const std::string& key, double& target) const {
    if (auto v = raw(key)) target = to_double(key, *v);
  }

  void read(const std::string& key, Vec3& target) const {
    if (auto v = raw(key)) {
      const auto xs = numbers(key, *v);
      if (xs.size() != 3) loc_.fail(key, "expected 3 numbers, got '" + *v + "'");
      target = Vec3(xs[0], xs[1], xs[2]);
    }
  }

  void read(const std::string& key, bool& target) const {
    if (auto v = raw(key)) {
      const std::string s = boost::algorithm::to_lower_copy(*v);
      if (s == "true" || s == "1" || s == "yes" || s == "on") {
        target = true;
      } else if (s == "false" || s == "0" || s == "no" || s == "off") {
        target = false;
      } else {
        loc_.fail(key, "expected true/false, got '" + *v + "'");
      }
    }
  }

  void read(const std::string& key, std::uint64_t& target) const {
    if (auto v = raw(key)) {
      char* end = nullptr;
      const unsigned long long n = std::strtoull(v->c_str(), &end, 10);
      if (v->empty() || *end != '\0' || (*v)[0] == '-')
        loc_.fail(key, "expected a non-negative integer, got '" + *v + "'");
      target = n;
    }
  }

 private:
  const pt::ptree& tree_;
  const Locator& loc_;
};

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vec(const Vec3& v) { return num(v.x()) + " " + num(v.y()) + " " + num(v.z()); }

}  // namespace

ScenarioConfig parse_config(std::istream& in, const Overrides& overrides,
                            const std::string& source) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  Locator loc(source, text);

  pt::ptree tree;
  try {
    std::istringstream ini(text);
    pt::ini_parser::read_ini(ini, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":line " + std::to_string(e.line()) + ": " + e.message());
  }

  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--set '" + item + "': expected key=value");
    std::string key = boost::algorithm::trim_copy(item.substr(0, eq));
    const std::string value = boost::algorithm::trim_copy(item.substr(eq + 1));
    if (key == "estimator") key = "estimator.kind";
    if (!known_keys().contains(key)) throw ConfigError("--set: unknown field '" + key + "'");
    tree.put(pt::ptree::path_type(key, '.'), value);
    loc.mark_override(key);
  }

  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      loc.fail(section, "key outside of a [section]");
    for (const auto& [name, leaf] : body) {
      const std::string key = section + "." + name;
      if (!known_keys().contains(key)) loc.fail(key, "unknown field");
    }
  }

  Reader r(tree, loc);
  for (const char* key : kRequired)
    if (!r.raw(key)) loc.fail(key, "missing required field");

  ScenarioConfig cfg;
  try {
    cfg = ScenarioConfig::preset(parse_scenario_kind(*r.raw("scenario.kind")));
  } catch (const ConfigError& e) {
    loc.fail("scenario.kind", e.what());
  }

  r.read("scenario.duration", cfg.duration);
  r.read("scenario.dt_plant", cfg.dt_plant);
  r.read("scenario.dt_ctrl", cfg.dt_ctrl);
  r.read("scenario.seed", cfg.seed);

  r.read("vehicle.mass", cfg.vehicle.mass);
  r.read("vehicle.gravity", cfg.vehicle.gravity);
  r.read("vehicle.attachment", cfg.vehicle.attachment);

  r.read("tether.stiffness", cfg.tether.stiffness);
  r.read("tether.natural_length", cfg.tether.natural_length);
  r.read("tether.anchor", cfg.tether.anchor);
  r.read("tether.release_force", cfg.tether.release_force);
  r.read("tether.residual_weight", cfg.tether.residual_weight);

  r.read("controller.kp", cfg.gains.kp);
  r.read("controller.kd", cfg.gains.kd);
  r.read("controller.tau_att", cfg.attitude_tau);
  r.read("controller.yaw", cfg.yaw);

  if (auto kind = r.raw("estimator.kind")) {
    try {
      cfg.estimator.kind = parse_estimator_kind(*kind);
    } catch (const ConfigError& e) {
      loc.fail("estimator.kind", e.what());
    }
  }
  r.read("rdo.c1", cfg.estimator.rdo.c1);
  r.read("rdo.c2", cfg.estimator.rdo.c2);
  r.read("rdo.c3", cfg.estimator.rdo.c3);
  if (auto v = r.raw("dob.gain")) {
    const auto xs = r.numbers("dob.gain", *v);
    if (xs.size() == 1) {
      cfg.estimator.dob.gain = Vec3::Constant(xs[0]);
    } else if (xs.size() == 3) {
      cfg.estimator.dob.gain = Vec3(xs[0], xs[1], xs[2]);
    } else {
      loc.fail("dob.gain", "expected 1 or 3 numbers");
    }
  }
  if (auto v = r.raw("eso.poles")) {
    const auto xs = r.numbers("eso.poles", *v);
    if (xs.size() != 4) loc.fail("eso.poles", "expected 4 numbers");
    std::copy(xs.begin(), xs.end(), cfg.estimator.eso.poles.begin());
  }

  if (auto v = r.raw("disturbance.schedule")) {
    cfg.disturbance.steps.clear();
    std::vector<std::string> items;
    boost::algorithm::split(items, *v, boost::is_any_of(","));
    for (std::string item : items) {
      boost::algorithm::trim(item);
      if (item.empty()) continue;
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        loc.fail("disturbance.schedule", "expected time:value pairs, got '" + item + "'");
      cfg.disturbance.steps.emplace_back(
          r.to_double("disturbance.schedule", boost::algorithm::trim_copy(item.substr(0, colon))),
          r.to_double("disturbance.schedule",
                      boost::algorithm::trim_copy(item.substr(colon + 1))));
    }
  }

  r.read("reference.center", cfg.reference.center);
  r.read("reference.radius", cfg.reference.radius);
  r.read("reference.period", cfg.reference.period);
  r.read("reference.altitude_start", cfg.reference.altitude_start);
  r.read("reference.altitude_max", cfg.reference.altitude_max);
  r.read("reference.climb_start", cfg.reference.climb_start);
  r.read("reference.climb_end", cfg.reference.climb_end);
  r.read("reference.start", cfg.reference.start);
  if (r.raw("reference.direction")) {
    Vec3 dir;
    r.read("reference.direction", dir);
    if (!(dir.norm() > 0.0)) loc.fail("reference.direction", "must be non-zero");
    // Leave already-unit vectors untouched so dumped configs round-trip exactly.
    cfg.reference.direction = std::abs(dir.norm() - 1.0) < 1e-12 ? dir : dir.normalized();
  }
  r.read("reference.ramp_rate", cfg.reference.ramp_rate);
  r.read("reference.ramp_duration", cfg.reference.ramp_duration);

  r.read("noise.enabled", cfg.noise.enabled);
  r.read("noise.position_std", cfg.noise.position_std);
  r.read("noise.velocity_std", cfg.noise.velocity_std);

  if (r.raw("initial.position")) {
    Vec3 p;
    r.read("initial.position", p);
    cfg.initial_position = p;
  }
  if (r.raw("initial.velocity")) {
    Vec3 v;
    r.read("initial.velocity", v);
    cfg.initial_velocity = v;
  }

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    // Validation messages start with the field name.
    const std::string msg = e.what();
    const std::string key = msg.substr(0, msg.find(' '));
    throw ConfigError(loc.where(key) + ": " + msg);
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  return parse_config(in, overrides, path.string());
}

void dump_config(const ScenarioConfig& cfg, std::ostream& out) {
  out << "[scenario]\n"
      << "kind = " << to_string(cfg.kind) << '\n'
      << "duration = " << num(cfg.duration) << '\n'
      << "dt_plant = " << num(cfg.dt_plant) << '\n'
      << "dt_ctrl = " << num(cfg.dt_ctrl) << '\n'
      << "seed = " << cfg.seed << "\n\n";

  out << "[vehicle]\n"
      << "mass = " << num(cfg.vehicle.mass) << '\n'
      << "gravity = " << num(cfg.vehicle.gravity) << '\n'
      << "attachment = " << vec(cfg.vehicle.attachment) << "\n\n";

  out << "[tether]\n"
      << "stiffness = " << num(cfg.tether.stiffness) << '\n'
      << "natural_length = " << num(cfg.tether.natural_length) << '\n'
      << "anchor = " << vec(cfg.tether.anchor) << '\n'
      << "release_force = " << num(cfg.tether.release_force) << '\n'
      << "residual_weight = " << num(cfg.tether.residual_weight) << "\n\n";

  out << "[controller]\n"
      << "kp = " << num(cfg.gains.kp) << '\n'
      << "kd = " << num(cfg.gains.kd) << '\n'
      << "tau_att = " << num(cfg.attitude_tau) << '\n'
      << "yaw = " << num(cfg.yaw) << "\n\n";

  const auto& est = cfg.estimator;
  out << "[estimator]\nkind = " << to_string(est.kind) << "\n\n"
      << "[rdo]\nc1 = " << num(est.rdo.c1) << "\nc2 = " << num(est.rdo.c2)
      << "\nc3 = " << num(est.rdo.c3) << "\n\n"
      << "[dob]\ngain = " << vec(est.dob.gain) << "\n\n"
      << "[eso]\npoles = " << num(est.eso.poles[0]) << ' ' << num(est.eso.poles[1]) << ' '
      << num(est.eso.poles[2]) << ' ' << num(est.eso.poles[3]) << "\n\n";

  out << "[disturbance]\nschedule = ";
  for (std::size_t i = 0; i < cfg.disturbance.steps.size(); ++i)
    out << (i ? ", " : "") << num(cfg.disturbance.steps[i].first) << ':'
        << num(cfg.disturbance.steps[i].second);
  out << "\n\n";

  const auto& ref = cfg.reference;
  out << "[reference]\n"
      << "center = " << vec(ref.center) << '\n'
      << "radius = " << num(ref.radius) << '\n'
      << "period = " << num(ref.period) << '\n'
      << "altitude_start = " << num(ref.altitude_start) << '\n'
      << "altitude_max = " << num(ref.altitude_max) << '\n'
      << "climb_start = " << num(ref.climb_start) << '\n'
      << "climb_end = " << num(ref.climb_end) << '\n'
      << "start = " << vec(ref.start) << '\n'
      << "direction = " << vec(ref.direction) << '\n'
      << "ramp_rate = " << num(ref.ramp_rate) << '\n'
      << "ramp_duration = " << num(ref.ramp_duration) << "\n\n";

  out << "[noise]\n"
      << "enabled = " << (cfg.noise.enabled ? "true" : "false") << '\n'
      << "position_std = " << num(cfg.noise.position_std) << '\n'
      << "velocity_std = " << num(cfg.noise.velocity_std) << '\n';

  if (cfg.initial_position || cfg.initial_velocity) {
    out << "\n[initial]\n";
    if (cfg.initial_position) out << "position = " << vec(*cfg.initial_position) << '\n';
    if (cfg.initial_velocity) out << "velocity = " << vec(*cfg.initial_velocity) << '\n';
  }
}

}  // namespace tether_dobc

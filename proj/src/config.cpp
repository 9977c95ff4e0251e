#include "expanse/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "expanse/errors.hpp"

namespace expanse {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "scenario.name",       "scenario.s_end",        "scenario.step",       "scenario.max_steps",
      "spec.n",              "spec.sigma",            "spec.a0",             "spec.a1",
      "spec.lambda",         "spec.lambda_im",        "spec.omega",          "spec.sign",
      "spec.p",              "spec.mu0",              "spec.mass",           "spec.hbar",
      "spec.nonlinearity",   "grid.dim",              "grid.points",         "grid.length",
      "grid.center",         "initial.kind",          "initial.amplitude",   "initial.width",
      "initial.phase_ramp",  "initial.radius",        "initial.seed",        "initial.cutoff",
      "initial.center",      "outputs.records",       "outputs.snapshot_every", "outputs.plots",
      "outputs.K0",          "safeguards.amp_factor", "safeguards.amp_threshold", "safeguards.denom_guard",
      "classify.energy_sign", "classify.weighted_l2", "sweep.axis1",         "sweep.axis1_values",
      "sweep.axis2",         "sweep.axis2_values",    "sweep.max_points",    "sweep.simulate",
  };
  return keys;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#' || c == ';') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string unquote(std::string v) {
  v = trim(std::move(v));
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

class Reader {
 public:
  explicit Reader(const ConfigTable& t) : t_(t) {}

  [[nodiscard]] bool has(const std::string& key) const { return t_.values.count(key) != 0; }

  [[nodiscard]] int line(const std::string& key) const {
    const auto it = t_.lines.find(key);
    return it == t_.lines.end() ? 0 : it->second;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("field '" + key + "': " + what, key, line(key));
  }

  [[nodiscard]] std::string raw(const std::string& key) const {
    const auto it = t_.values.find(key);
    if (it == t_.values.end()) throw ConfigError("missing required field '" + key + "'", key, 0);
    return it->second;
  }

  template <class F>
  auto convert(const std::string& key, F&& f) const {
    try {
      return f(raw(key));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(key, e.what());
    }
  }

  double real(const std::string& key) const { return convert(key, parse_real); }
  double real(const std::string& key, double def) const { return has(key) ? real(key) : def; }

  long integer(const std::string& key) const {
    return convert(key, [](const std::string& s) {
      const double v = to_double(s);
      if (std::floor(v) != v || std::abs(v) > 9e15) throw std::invalid_argument("expected an integer, got '" + s + "'");
      return static_cast<long>(v);
    });
  }
  long integer(const std::string& key, long def) const { return has(key) ? integer(key) : def; }

  std::size_t count(const std::string& key, std::size_t def) const {
    if (!has(key)) return def;
    const long v = integer(key);
    if (v < 0) fail(key, "must be >= 0");
    return static_cast<std::size_t>(v);
  }

  bool boolean(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const std::string v = raw(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(key, "expected true or false, got '" + v + "'");
  }

  std::string text(const std::string& key, const std::string& def) const { return has(key) ? raw(key) : def; }

  std::array<double, 3> point(const std::string& key) const {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    if (!has(key)) return c;
    const auto v = convert(key, parse_real_list);
    if (v.size() > 3) fail(key, "at most three coordinates");
    std::copy(v.begin(), v.end(), c.begin());
    return c;
  }

 private:
  const ConfigTable& t_;
};

}  // namespace

ConfigError::ConfigError(const std::string& msg, std::string field, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
      field_(std::move(field)),
      line_(line) {}

double parse_real(const std::string& input) {
  const std::string s = trim(input);
  static const std::regex pi_re(R"(^([+-]?[0-9.]*(?:[eE][+-]?[0-9]+)?)\s*\*?\s*pi\s*(?:/\s*([0-9.]+(?:[eE][+-]?[0-9]+)?))?$)");
  std::smatch m;
  if (std::regex_match(s, m, pi_re)) {
    double coef = 1.0;
    const std::string c = m[1].str();
    if (c == "-") coef = -1.0;
    else if (!c.empty() && c != "+") coef = to_double(c);
    double v = coef * std::numbers::pi;
    if (m[2].matched) v /= to_double(m[2].str());
    return v;
  }
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    return to_double(trim(s.substr(0, slash))) / to_double(trim(s.substr(slash + 1)));
  }
  return to_double(s);
}

std::vector<double> parse_real_list(const std::string& input) {
  std::string s = trim(input);
  static const std::regex lin_re(R"(^linspace\s*\(([^,]+),([^,]+),([^,]+)\)$)");
  std::smatch m;
  if (std::regex_match(s, m, lin_re)) {
    const double a = parse_real(m[1].str());
    const double b = parse_real(m[2].str());
    const double nd = to_double(trim(m[3].str()));
    if (nd < 0 || std::floor(nd) != nd) throw std::invalid_argument("linspace count must be a nonnegative integer");
    const auto n = static_cast<std::size_t>(nd);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
  }
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw std::invalid_argument("unterminated list");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<double> v;
  if (trim(s).empty()) return v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_real(item));
  return v;
}

ConfigTable parse_config_text(const std::string& text) {
  namespace pt = boost::property_tree;
  ConfigTable table;
  std::istringstream in(text);
  std::ostringstream cleaned;
  std::string line;
  std::string section;
  int lineno = 0;
  std::map<std::string, int> lines;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(strip_comment(line));
    cleaned << body << "\n";
    if (body.empty()) continue;
    if (body.front() == '[') {
      section = trim(body.substr(1, body.find(']') == std::string::npos ? 0 : body.find(']') - 1));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(body.substr(0, eq));
    lines[section.empty() ? key : section + "." + key] = lineno;
  }

  pt::ptree tree;
  std::istringstream clean_in(cleaned.str());
  try {
    pt::read_ini(clean_in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.message(), "", static_cast<int>(e.line()));
  }

  auto put = [&](const std::string& key, const std::string& value) {
    if (table.values.count(key)) throw ConfigError("duplicate field '" + key + "'", key, lines[key]);
    table.values[key] = unquote(value);
    table.lines[key] = lines.count(key) ? lines[key] : 0;
  };
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      put(name, node.data());
    } else {
      for (const auto& [key, leaf] : node) {
        if (!leaf.empty()) throw ConfigError("nested sections are not supported", name + "." + key);
        put(name + "." + key, leaf.data());
      }
    }
  }
  for (const auto& [key, value] : table.values) {
    if (!known_keys().count(key)) throw ConfigError("unknown field '" + key + "'", key, table.lines[key]);
  }
  return table;
}

Scenario scenario_from_table(const ConfigTable& table, const std::string& default_name) {
  Reader r(table);
  Scenario sc;
  sc.name = r.text("scenario.name", default_name);
  if (sc.name.empty()) throw ConfigError("scenario.name must not be empty", "scenario.name");

  auto& spec = sc.spec;
  const long n = r.integer("spec.n");
  if (n < 1) r.fail("spec.n", "must be >= 1");
  spec.background.n = static_cast<int>(n);
  spec.background.sigma = r.real("spec.sigma", 0.0);
  spec.background.a0 = r.real("spec.a0", 1.0);
  spec.background.a1 = r.real("spec.a1", 0.0);
  spec.lambda = Complex(r.real("spec.lambda", 0.0), r.real("spec.lambda_im", 0.0));
  spec.omega = r.real("spec.omega", 0.0);
  if (r.has("spec.sign")) {
    const std::string s = r.raw("spec.sign");
    if (s == "+" || s == "+1" || s == "1") spec.sign = 1;
    else if (s == "-" || s == "-1") spec.sign = -1;
    else r.fail("spec.sign", "expected +1 or -1, got '" + s + "'");
  }
  spec.p = r.real("spec.p");
  spec.mu0 = r.real("spec.mu0", 0.0);
  sc.mass = r.real("spec.mass", 1.0);
  sc.hbar = r.real("spec.hbar", 1.0);
  const std::string nl = r.text("spec.nonlinearity", "gauge-invariant");
  if (nl == "gauge-invariant") sc.nonlinearity = Nonlinearity::GaugeInvariant;
  else if (nl == "gauge-variant") sc.nonlinearity = Nonlinearity::GaugeVariant;
  else r.fail("spec.nonlinearity", "expected gauge-invariant or gauge-variant, got '" + nl + "'");
  if (!(sc.mass > 0.0)) r.fail("spec.mass", "must be > 0");
  if (!(sc.hbar > 0.0)) r.fail("spec.hbar", "must be > 0");
  if (!(spec.background.a0 > 0.0)) r.fail("spec.a0", "must be > 0");

  sc.grid.dim = static_cast<int>(r.integer("grid.dim", spec.background.n));
  sc.grid.points = r.count("grid.points", 256);
  sc.grid.length = r.real("grid.length", 32.0);
  sc.grid.center = r.point("grid.center");

  auto& ic = sc.initial;
  ic.kind = r.text("initial.kind", "gaussian");
  ic.amplitude = r.real("initial.amplitude", 1.0);
  ic.width = r.real("initial.width", 1.0);
  ic.phase_ramp = r.real("initial.phase_ramp", 0.0);
  ic.radius = r.real("initial.radius", 2.0);
  ic.seed = r.count("initial.seed", 0);
  ic.cutoff = r.real("initial.cutoff", 4.0);
  ic.center = r.point("initial.center");

  if (r.has("scenario.s_end") && r.raw("scenario.s_end") == "horizon") {
    sc.s_end_horizon = true;
  } else {
    sc.s_end = r.real("scenario.s_end", 1.0);
    if (!(sc.s_end >= 0.0)) r.fail("scenario.s_end", "must be >= 0 or \"horizon\"");
  }
  sc.step = r.real("scenario.step", 1e-3);
  if (!(sc.step > 0.0)) r.fail("scenario.step", "must be > 0");
  if (r.has("scenario.max_steps")) sc.max_steps = r.count("scenario.max_steps", 0);

  sc.safeguards.amp_factor = r.real("safeguards.amp_factor", 1e6);
  sc.safeguards.amp_threshold = r.real("safeguards.amp_threshold", 0.0);
  sc.safeguards.denom_guard = r.real("safeguards.denom_guard", 1e-12);

  sc.outputs.records = r.boolean("outputs.records", true);
  sc.outputs.snapshot_every = r.count("outputs.snapshot_every", 0);
  sc.outputs.plots = r.boolean("outputs.plots", false);
  sc.outputs.K0 = r.real("outputs.K0", 1.0);
  if (!(sc.outputs.K0 > 0.0)) r.fail("outputs.K0", "must be > 0");

  const std::string es = r.text("classify.energy_sign", "unknown");
  using classifier::EnergySign;
  if (es == "negative") sc.energy_sign = EnergySign::Negative;
  else if (es == "zero") sc.energy_sign = EnergySign::Zero;
  else if (es == "positive") sc.energy_sign = EnergySign::Positive;
  else if (es == "unknown") sc.energy_sign = EnergySign::Unknown;
  else r.fail("classify.energy_sign", "expected negative, zero, positive or unknown");
  sc.weighted_l2 = r.boolean("classify.weighted_l2", false);

  static const std::set<std::string> axis_names{"p", "sigma", "a1", "omega", "lambda"};
  for (const std::string axis : {"sweep.axis1", "sweep.axis2"}) {
    if (!r.has(axis)) {
      if (r.has(axis + "_values")) r.fail(axis + "_values", "given without " + axis);
      continue;
    }
    SweepAxis ax;
    ax.name = r.raw(axis);
    if (!axis_names.count(ax.name)) r.fail(axis, "must be one of p, sigma, a1, omega, lambda");
    ax.values = r.convert(axis + "_values", parse_real_list);
    sc.sweep.axes.push_back(std::move(ax));
  }
  if (sc.sweep.axes.size() == 2 && sc.sweep.axes[0].name == sc.sweep.axes[1].name) {
    r.fail("sweep.axis2", "duplicates sweep.axis1");
  }
  sc.sweep.max_points = r.count("sweep.max_points", 10000);
  sc.sweep.simulate = r.boolean("sweep.simulate", false);

  std::ostringstream canon;
  for (const auto& [k, v] : table.values) canon << k << "=" << v << "\n";
  sc.canonical = canon.str();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_table(parse_config_text(ss.str()), std::filesystem::path(path).stem().string());
}

SolverConfig Scenario::solver_config() const {
  SolverConfig c;
  c.sign = spec.sign;
  c.omega = spec.omega;
  c.lambda = spec.lambda;
  c.p = spec.p;
  c.mass = mass;
  c.hbar = hbar;
  c.background = spec.background;
  c.nonlinearity = nonlinearity;
  c.step = step;
  c.safeguards = safeguards;
  return c;
}

double Scenario::resolved_s_end() const {
  const ScaleFactor sf(spec.background);
  if (s_end_horizon) {
    if (sf.S0().is_infinite()) throw ConfigError("s_end = \"horizon\" but S0 is infinite", "scenario.s_end");
    return sf.S0().value();
  }
  if (sf.S0().is_finite() && s_end > sf.S0().value()) {
    throw ConfigError("s_end = " + format_double(s_end) + " exceeds S0 = " + sf.S0().to_string(), "scenario.s_end");
  }
  return s_end;
}

void Scenario::validate_for_run() const {
  try {
    grid.validate();
  } catch (const InvalidConfig& e) {
    throw ConfigError(e.what(), "grid");
  }
  if (grid.dim != spec.background.n) {
    throw ConfigError("grid.dim = " + std::to_string(grid.dim) + " must equal spec.n = " +
                          std::to_string(spec.background.n),
                      "grid.dim");
  }
  (void)resolved_s_end();
}

}  // namespace expanse

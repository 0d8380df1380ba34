#include "fsrd/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fsrd/noise.hpp"
#include "fsrd/spectral.hpp"

namespace fsrd {

namespace {

enum class Type { Int, Double, Bool, String, IntList, DoubleList };

struct SchemaEntry {
  const char* section;
  const char* key;
  Type type;
  bool required;
  const char* fallback;     // default when not required
  const char* allowed;      // "|"-separated values for closed string keys
};

// Declaration order is the canonical emission order.
constexpr SchemaEntry kSchema[] = {
    {"grid", "dim", Type::Int, false, "1", nullptr},
    {"grid", "points", Type::Int, true, "", nullptr},
    {"grid", "half_width", Type::Double, true, "", nullptr},

    {"drift", "p", Type::Double, true, "", nullptr},
    {"drift", "a", Type::Double, true, "", nullptr},
    {"drift", "b", Type::Double, false, "0", nullptr},

    {"noise", "modes", Type::Int, true, "", nullptr},
    {"noise", "profile", Type::String, false, "pure-mode", "pure-mode|enveloped-trig"},
    {"noise", "amp", Type::Double, false, "0.3", nullptr},
    {"noise", "amp_decay", Type::Double, false, "1", nullptr},
    {"noise", "envelope_width", Type::Double, false, "1", nullptr},
    {"noise", "family", Type::String, false, "none", "none|linear|bounded"},
    {"noise", "c_amp", Type::Double, false, "0", nullptr},
    {"noise", "c_decay", Type::Double, false, "1", nullptr},
    {"noise", "kappa_amp", Type::Double, false, "0", nullptr},
    {"noise", "kappa_width", Type::Double, false, "1", nullptr},
    {"noise", "time_mod", Type::String, false, "constant", "constant|cosine"},

    {"solver", "alpha", Type::Double, true, "", nullptr},
    {"solver", "t_final", Type::Double, true, "", nullptr},
    {"solver", "steps", Type::Int, true, "", nullptr},
    {"solver", "taming", Type::String, false, "auto", "auto|on|off"},

    {"experiment", "u0_kind", Type::String, false, "zero", "zero|gaussian|mode"},
    {"experiment", "u0_amp", Type::Double, false, "1", nullptr},
    {"experiment", "u0_width", Type::Double, false, "1", nullptr},
    {"experiment", "u0_mode", Type::Int, false, "1", nullptr},
    {"experiment", "forcing_kind", Type::String, false, "none", "none|gaussian|mode"},
    {"experiment", "forcing_amp", Type::Double, false, "1", nullptr},
    {"experiment", "forcing_width", Type::Double, false, "1", nullptr},
    {"experiment", "forcing_mode", Type::Int, false, "1", nullptr},
    {"experiment", "eps", Type::Double, false, "0.1", nullptr},
    {"experiment", "eps_list", Type::DoubleList, false, "", nullptr},
    {"experiment", "samples", Type::Int, false, "1000", nullptr},
    {"experiment", "event", Type::String, false, "terminal-threshold",
     "terminal-threshold|terminal-ball|tube-exit"},
    {"experiment", "threshold", Type::Double, false, "1", nullptr},
    {"experiment", "event_radius", Type::Double, false, "1", nullptr},
    {"experiment", "probe_kind", Type::String, false, "mode", "mode|gaussian"},
    {"experiment", "probe_mode", Type::Int, false, "1", nullptr},
    {"experiment", "probe_width", Type::Double, false, "1", nullptr},
    {"experiment", "target_kind", Type::String, false, "mode-combo", "mode-combo|gaussian"},
    {"experiment", "target_coeffs", Type::DoubleList, false, "", nullptr},
    {"experiment", "target_amp", Type::Double, false, "1", nullptr},
    {"experiment", "target_width", Type::Double, false, "1", nullptr},
    {"experiment", "beta0", Type::Double, false, "100", nullptr},
    {"experiment", "beta_stages", Type::Int, false, "3", nullptr},
    {"experiment", "beta_factor", Type::Double, false, "10", nullptr},
    {"experiment", "max_iterations", Type::Int, false, "400", nullptr},
    {"experiment", "grad_tol", Type::Double, false, "1e-05", nullptr},
    {"experiment", "reference_action", Type::Double, false, "nan", nullptr},
    {"experiment", "reference_tol", Type::Double, false, "0.02", nullptr},
    {"experiment", "gap_tol", Type::Double, false, "0.15", nullptr},
    {"experiment", "ess_min", Type::Double, false, "100", nullptr},
    {"experiment", "radii", Type::DoubleList, false, "", nullptr},
    {"experiment", "energies", Type::DoubleList, false, "", nullptr},
    {"experiment", "controls", Type::Int, false, "50", nullptr},
    {"experiment", "tail_threshold", Type::Double, false, "1e-06", nullptr},
    {"experiment", "weak_amplitude", Type::Double, false, "1", nullptr},
    {"experiment", "weak_mode", Type::Int, false, "1", nullptr},
    {"experiment", "weak_base_amp", Type::Double, false, "0", nullptr},
    {"experiment", "weak_n_list", Type::IntList, false, "1,2,4,8,16,32", nullptr},
    {"experiment", "moment_energy", Type::Double, false, "1", nullptr},
    {"experiment", "moment_samples", Type::Int, false, "64", nullptr},
    {"experiment", "moment_ratio_bound", Type::Double, false, "2", nullptr},
    {"experiment", "lab", Type::String, false, "tail", "tail|weak|moment"},
    {"experiment", "control_kind", Type::String, false, "zero", "zero|constant"},
    {"experiment", "control_amp", Type::Double, false, "0", nullptr},
    {"experiment", "control_mode", Type::Int, false, "1", nullptr},
    {"experiment", "energy_check", Type::Bool, false, "false", nullptr},
    {"experiment", "check_samples", Type::Int, false, "32", nullptr},
    {"experiment", "check_field_amp", Type::Double, false, "4", nullptr},
};

const SchemaEntry* find_entry(const std::string& section, const std::string& key) {
  for (const auto& e : kSchema)
    if (section == e.section && key == e.key) return &e;
  return nullptr;
}

bool known_section(const std::string& section) {
  for (const auto& e : kSchema)
    if (section == e.section) return true;
  return false;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

long long parse_int(std::string_view s, const std::string& where, int line) {
  long long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError("value of " + where + " is not an integer: '" + std::string(s) + "'",
                      line);
  return v;
}

double parse_double(std::string_view s, const std::string& where, int line) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError("value of " + where + " is not a number: '" + std::string(s) + "'",
                      line);
  return v;
}

bool parse_bool(std::string_view s, const std::string& where, int line) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("value of " + where + " is not a boolean: '" + std::string(s) + "'", line);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void validate_value(const SchemaEntry& e, std::string_view value, int line) {
  const std::string where = std::string(e.section) + "." + e.key;
  switch (e.type) {
    case Type::Int:
      parse_int(value, where, line);
      break;
    case Type::Double:
      parse_double(value, where, line);
      break;
    case Type::Bool:
      parse_bool(value, where, line);
      break;
    case Type::String: {
      if (e.allowed) {
        std::string_view allowed(e.allowed);
        bool ok = false;
        std::size_t start = 0;
        while (!ok) {
          const std::size_t bar = allowed.find('|', start);
          if (allowed.substr(start, bar - start) == value) ok = true;
          if (bar == std::string_view::npos) break;
          start = bar + 1;
        }
        if (!ok)
          throw ConfigError("value of " + where + " must be one of {" + e.allowed + "}, got '" +
                                std::string(value) + "'",
                            line);
      }
      break;
    }
    case Type::IntList:
      for (auto item : split_list(value)) {
        if (item.empty()) throw ConfigError("empty element in list " + where, line);
        parse_int(item, where, line);
      }
      break;
    case Type::DoubleList:
      for (auto item : split_list(value)) {
        if (item.empty()) throw ConfigError("empty element in list " + where, line);
        parse_double(item, where, line);
      }
      break;
  }
}

std::string format_int(long long v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 48> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

// Normalized rendering of a validated value, so the canonical text does not
// depend on how the user spelled numbers.
std::string normalize(const SchemaEntry& e, const std::string& value) {
  switch (e.type) {
    case Type::Int:
      return format_int(parse_int(value, e.key, 0));
    case Type::Double:
      return format_double(parse_double(value, e.key, 0));
    case Type::Bool:
      return parse_bool(value, e.key, 0) ? "true" : "false";
    case Type::String:
      return value;
    case Type::IntList: {
      std::string out;
      for (auto item : split_list(value)) {
        if (!out.empty()) out += ",";
        out += format_int(parse_int(item, e.key, 0));
      }
      return out;
    }
    case Type::DoubleList: {
      std::string out;
      for (auto item : split_list(value)) {
        if (!out.empty()) out += ",";
        out += format_double(parse_double(item, e.key, 0));
      }
      return out;
    }
  }
  return value;
}

} // namespace

Config Config::parse_text(std::string_view text) {
  Config c;
  std::map<std::pair<std::string, std::string>, int> seen_lines;
  std::string section;
  int line = 0;
  std::size_t pos = 0;
  bool saw_section = false;
  std::vector<std::string> seen_sections;

  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line;

    std::string_view s = trim(raw);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;

    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("malformed section header '" + std::string(s) + "'", line);
      std::string name(trim(s.substr(1, s.size() - 2)));
      if (!known_section(name)) throw ConfigError("unknown section [" + name + "]", line);
      if (std::find(seen_sections.begin(), seen_sections.end(), name) != seen_sections.end())
        throw ConfigError("duplicate section [" + name + "]", line);
      seen_sections.push_back(name);
      section = name;
      saw_section = true;
      continue;
    }

    const std::size_t eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("expected 'key = value', got '" + std::string(s) + "'", line);
    if (!saw_section) throw ConfigError("key before any section header", line);

    std::string key(trim(s.substr(0, eq)));
    std::string value(trim(s.substr(eq + 1)));
    if (key.empty()) throw ConfigError("empty key", line);

    const SchemaEntry* entry = find_entry(section, key);
    if (!entry)
      throw ConfigError("unknown key '" + key + "' in section [" + section + "]", line);
    auto mapkey = std::make_pair(section, key);
    if (seen_lines.count(mapkey))
      throw ConfigError("duplicate key '" + key + "' in section [" + section + "]", line);
    validate_value(*entry, value, line);
    seen_lines[mapkey] = line;
    c.values_[mapkey] = value;
  }

  for (const auto& e : kSchema)
    if (e.required && !c.values_.count({e.section, e.key}))
      throw ConfigError(std::string("missing required key ") + e.section + "." + e.key);

  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  const SchemaEntry* entry = find_entry(section, key);
  if (!entry)
    throw ConfigError("unknown key '" + section + "." + key + "'");
  std::string v(trim(value));
  validate_value(*entry, v, 0);
  values_[{section, key}] = v;
}

bool Config::is_set(const std::string& section, const std::string& key) const {
  if (!find_entry(section, key)) throw Error("no such config key: " + section + "." + key);
  return values_.count({section, key}) > 0;
}

const std::string* Config::find(const std::string& section, const std::string& key) const {
  auto it = values_.find({section, key});
  return it == values_.end() ? nullptr : &it->second;
}

namespace {

const SchemaEntry& entry_for(const std::string& section, const std::string& key, Type want) {
  const SchemaEntry* e = find_entry(section, key);
  if (!e) throw Error("no such config key: " + section + "." + key);
  if (e->type != want) throw Error("config key " + section + "." + key + " has another type");
  return *e;
}

} // namespace

int Config::get_int(const std::string& section, const std::string& key) const {
  const SchemaEntry& e = entry_for(section, key, Type::Int);
  const std::string* v = find(section, key);
  const long long r = parse_int(v ? *v : e.fallback, section + "." + key, 0);
  if (r < std::numeric_limits<int>::min() || r > std::numeric_limits<int>::max())
    throw ConfigError("value of " + section + "." + key + " does not fit in int");
  return static_cast<int>(r);
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const SchemaEntry& e = entry_for(section, key, Type::Double);
  const std::string* v = find(section, key);
  return parse_double(v ? *v : e.fallback, section + "." + key, 0);
}

bool Config::get_bool(const std::string& section, const std::string& key) const {
  const SchemaEntry& e = entry_for(section, key, Type::Bool);
  const std::string* v = find(section, key);
  return parse_bool(v ? *v : e.fallback, section + "." + key, 0);
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  const SchemaEntry& e = entry_for(section, key, Type::String);
  const std::string* v = find(section, key);
  return v ? *v : e.fallback;
}

std::vector<int> Config::get_int_list(const std::string& section, const std::string& key) const {
  const SchemaEntry& e = entry_for(section, key, Type::IntList);
  const std::string* v = find(section, key);
  const std::string raw = v ? *v : std::string(e.fallback); // keep the split views alive
  std::vector<int> out;
  for (auto item : split_list(raw))
    out.push_back(static_cast<int>(parse_int(item, section + "." + key, 0)));
  return out;
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
  const SchemaEntry& e = entry_for(section, key, Type::DoubleList);
  const std::string* v = find(section, key);
  const std::string raw = v ? *v : std::string(e.fallback); // keep the split views alive
  std::vector<double> out;
  for (auto item : split_list(raw))
    out.push_back(parse_double(item, section + "." + key, 0));
  return out;
}

std::string Config::canonical_text() const {
  std::string out;
  const char* current = "";
  for (const auto& e : kSchema) {
    if (std::string_view(current) != e.section) {
      if (!out.empty()) out += "\n";
      out += "[";
      out += e.section;
      out += "]\n";
      current = e.section;
    }
    const std::string* v = find(e.section, e.key);
    out += e.key;
    out += " = ";
    out += normalize(e, v ? *v : e.fallback);
    out += "\n";
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical_text()); }

Grid make_grid(const Config& c) {
  return Grid(c.get_int("grid", "dim"), c.get_int("grid", "points"),
              c.get_double("grid", "half_width"));
}

DriftSpec make_drift(const Config& c) {
  return DriftSpec::canonical_family(c.get_double("drift", "p"), c.get_double("drift", "a"),
                                     c.get_double("drift", "b"));
}

NoiseSpec make_noise_spec(const Config& c, const Grid& g) {
  NoiseBuildParams p;
  p.modes = c.get_int("noise", "modes");
  p.profile = c.get_string("noise", "profile");
  p.amp = c.get_double("noise", "amp");
  p.amp_decay = c.get_double("noise", "amp_decay");
  p.envelope_width = c.get_double("noise", "envelope_width");
  const std::string family = c.get_string("noise", "family");
  p.family = family == "none"     ? Sigma2Family::None
             : family == "linear" ? Sigma2Family::Linear
                                  : Sigma2Family::Bounded;
  p.c_amp = c.get_double("noise", "c_amp");
  p.c_decay = c.get_double("noise", "c_decay");
  p.kappa_amp = c.get_double("noise", "kappa_amp");
  p.kappa_width = c.get_double("noise", "kappa_width");
  NoiseSpec spec = make_noise(g, p);
  if (c.get_string("noise", "time_mod") == "cosine")
    spec.time_mod = [](double t) { return 1.0 + 0.5 * std::cos(t); };
  return spec;
}

SolverParams make_solver(const Config& c) {
  SolverParams s;
  s.alpha = c.get_double("solver", "alpha");
  const double t_final = c.get_double("solver", "t_final");
  s.steps = c.get_int("solver", "steps");
  if (s.steps < 1) throw ConfigError("solver.steps must be >= 1");
  if (!(t_final > 0.0)) throw ConfigError("solver.t_final must be positive");
  s.dt = t_final / s.steps;
  const std::string taming = c.get_string("solver", "taming");
  s.taming = taming == "auto" ? Taming::Auto : taming == "on" ? Taming::On : Taming::Off;
  s.validate();
  return s;
}

Field unit_mode(const Grid& g, int k) {
  if (k < 1) throw InvalidArgument("mode index must be >= 1");
  NoiseBuildParams p;
  p.modes = k;
  p.profile = "pure-mode";
  p.amp = 1.0;
  p.amp_decay = 0.0;
  NoiseSpec spec = make_noise(g, p);
  return spec.sigma1.back();
}

namespace {

Field gaussian_bump(const Grid& g, double amp, double width) {
  if (!(width > 0.0)) throw ConfigError("gaussian width must be positive");
  Field f(g);
  const double w2 = width * width;
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = amp * std::exp(-g.radius_sq(i) / w2);
  return f;
}

Field shaped_field(const Config& c, const Grid& g, const std::string& prefix,
                   const std::string& kind) {
  if (kind == "gaussian")
    return gaussian_bump(g, c.get_double("experiment", prefix + "_amp"),
                         c.get_double("experiment", prefix + "_width"));
  // kind == "mode"
  Field f = unit_mode(g, c.get_int("experiment", prefix + "_mode"));
  scale(f, c.get_double("experiment", prefix + "_amp"));
  return f;
}

} // namespace

Field make_u0(const Config& c, const Grid& g) {
  const std::string kind = c.get_string("experiment", "u0_kind");
  if (kind == "zero") return Field(g);
  return shaped_field(c, g, "u0", kind);
}

std::optional<Field> make_forcing(const Config& c, const Grid& g) {
  const std::string kind = c.get_string("experiment", "forcing_kind");
  if (kind == "none") return std::nullopt;
  return shaped_field(c, g, "forcing", kind);
}

Model make_model(const Config& c, const Grid& g) {
  Model m{make_drift(c), make_noise_spec(c, g), make_forcing(c, g)};
  m.noise.validate();
  return m;
}

Field make_probe(const Config& c, const Grid& g) {
  const std::string kind = c.get_string("experiment", "probe_kind");
  if (kind == "mode") return unit_mode(g, c.get_int("experiment", "probe_mode"));
  Field f = gaussian_bump(g, 1.0, c.get_double("experiment", "probe_width"));
  const double n = l2_norm(f);
  if (!(n > 0.0)) throw ConfigError("probe has zero norm");
  scale(f, 1.0 / n);
  return f;
}

Field make_target(const Config& c, const Grid& g) {
  const std::string kind = c.get_string("experiment", "target_kind");
  if (kind == "gaussian")
    return gaussian_bump(g, c.get_double("experiment", "target_amp"),
                         c.get_double("experiment", "target_width"));
  const std::vector<double> coeffs = c.get_double_list("experiment", "target_coeffs");
  if (coeffs.empty())
    throw ConfigError("target_coeffs must be set for a mode-combo target");
  Field f(g);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    axpy(f, coeffs[k], unit_mode(g, static_cast<int>(k) + 1));
  return f;
}

} // namespace fsrd

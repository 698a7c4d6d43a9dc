#include "nhslice/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

namespace nhs {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  double x;
  if (!(is >> x) || !(is >> std::ws).eof()) throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + v + "'");
}

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

struct Accessor {
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define NHS_DOUBLE(name, help)                                                        \
  {#name,                                                                             \
   {help, [](RunConfig& c, const std::string& v) { c.name = to_double(#name, v); }, \
    [](const RunConfig& c) { return num(c.name); }}}
#define NHS_INT(name, help)                                                        \
  {#name,                                                                          \
   {help, [](RunConfig& c, const std::string& v) { c.name = to_int(#name, v); }, \
    [](const RunConfig& c) { return std::to_string(c.name); }}}
#define NHS_STRING(name, help) \
  {#name,                      \
   {help, [](RunConfig& c, const std::string& v) { c.name = v; }, [](const RunConfig& c) { return c.name; }}}

const std::vector<std::pair<std::string, Accessor>>& table() {
  static const std::vector<std::pair<std::string, Accessor>> t = {
      NHS_INT(ne, "number of spectral elements"),
      NHS_INT(n, "number of vertical layers"),
      NHS_DOUBLE(length, "domain length (m)"),
      NHS_DOUBLE(p_top, "model top pressure (Pa)"),
      NHS_DOUBLE(p0, "reference surface pressure (Pa)"),
      NHS_DOUBLE(hybrid_exponent, "exponent of the B coefficient (1 = sigma)"),
      {"mode",
       {"vertical coordinate: eulerian or lagrangian",
        [](RunConfig& c, const std::string& v) { c.mode = vertical_mode_from_string(v); },
        [](const RunConfig& c) { return to_string(c.mode); }}},
      NHS_DOUBLE(f, "Coriolis parameter (1/s)"),
      NHS_DOUBLE(nu, "hyperviscosity during spin-up (m^4/s)"),
      NHS_INT(remap_interval, "steps between remaps (lagrangian)"),
      {"monotone_remap",
       {"limit the remap reconstruction",
        [](RunConfig& c, const std::string& v) { c.monotone_remap = to_bool("monotone_remap", v); },
        [](const RunConfig& c) { return std::string(c.monotone_remap ? "true" : "false"); }}},
      NHS_DOUBLE(dt, "time step (s)"),
      NHS_DOUBLE(spinup, "spin-up length (s)"),
      NHS_DOUBLE(run_length, "audit window length (s)"),
      NHS_INT(diag_interval, "steps between budget rows"),
      NHS_STRING(tableau, "built-in tableau name or tableau file"),
      NHS_STRING(test_case, "rest or gravity_wave"),
      NHS_DOUBLE(T0, "background temperature (K)"),
      NHS_DOUBLE(amplitude, "potential temperature perturbation (K)"),
      NHS_DOUBLE(half_width, "perturbation half width (m)"),
      NHS_DOUBLE(mean_wind, "initial uniform wind (m/s)"),
      NHS_STRING(output_dir, "output directory"),
  };
  return t;
}

#undef NHS_DOUBLE
#undef NHS_INT
#undef NHS_STRING

const Accessor& find(const std::string& key) {
  for (const auto& [k, a] : table())
    if (k == key) return a;
  throw ConfigError("config: unknown key '" + key + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (ne < 1) throw ConfigError("config: ne must be >= 1");
  if (n < 2) throw ConfigError("config: n must be >= 2");
  if (!(length > 0)) throw ConfigError("config: length must be positive");
  if (!(p_top > 0) || !(p_top < p0)) throw ConfigError("config: need 0 < p_top < p0");
  if (!(hybrid_exponent >= 1)) throw ConfigError("config: hybrid_exponent must be >= 1");
  if (!(dt > 0)) throw ConfigError("config: dt must be positive");
  if (spinup < 0 || run_length < 0) throw ConfigError("config: negative run length");
  if (diag_interval < 1) throw ConfigError("config: diag_interval must be >= 1");
  if (mode == VerticalMode::lagrangian && remap_interval < 1)
    throw ConfigError("config: remap_interval must be >= 1");
  if (nu < 0) throw ConfigError("config: nu must be nonnegative");
  if (test_case != "rest" && test_case != "gravity_wave")
    throw ConfigError("config: unknown test_case '" + test_case + "'");
  if (!(T0 > 0)) throw ConfigError("config: T0 must be positive");
  if (!(half_width > 0)) throw ConfigError("config: half_width must be positive");
}

ModelConfig RunConfig::model_config(bool with_dissipation) const {
  ModelConfig mc;
  mc.mode = mode;
  mc.constants.f = f;
  mc.nu = with_dissipation ? nu : 0.0;
  mc.remap_interval = remap_interval;
  return mc;
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    for (const auto& [name, a] : table()) k.push_back({name, a.help});
    return k;
  }();
  return keys;
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  find(key).set(c, trim(value));
}

std::string get_config_value(const RunConfig& c, const std::string& key) { return find(key).get(c); }

RunConfig parse_config(std::istream& is, RunConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

void print_config(std::ostream& os, const RunConfig& c) {
  for (const auto& [key, a] : table()) os << key << " = " << a.get(c) << "\n";
}

void apply_environment(RunConfig& c) {
  if (const char* dir = std::getenv("NHSLICE_OUTPUT_DIR"); dir && *dir) c.output_dir = dir;
}

}  // namespace nhs

#ifndef SUITA_CLI_CONFIG_HPP
#define SUITA_CLI_CONFIG_HPP

#include "suita/bergman/weight.hpp"
#include "suita/core.hpp"
#include "suita/domains/planar_domain.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace suita::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kOutDirEnv = "SUITA_OUT_DIR";

/// Bad configuration. line is 1-based, 0 when the problem is not tied to a
/// line of the config file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// ---- scalar parsers --------------------------------------------------------

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

inline double parse_real(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("expected a number, got an empty string");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) throw ConfigError("'" + s + "' is not a finite number");
  return v;
}

inline int parse_int(const std::string& text) {
  const double v = parse_real(text);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("'" + trim(text) + "' is not an integer");
  return static_cast<int>(v);
}

/// "0.3", "-2", "0.6i", "i", "0.3+0.2i", "0.5-i", "1e-3-2e-2i".
inline Complex parse_complex(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("expected a complex number, got an empty string");
  if (s.back() != 'i') return {parse_real(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  const std::string re = cut == std::string::npos ? "" : body.substr(0, cut);
  const std::string im = cut == std::string::npos ? body : body.substr(cut);
  double imag;
  if (im.empty() || im == "+") {
    imag = 1.0;
  } else if (im == "-") {
    imag = -1.0;
  } else {
    imag = parse_real(im);
  }
  return {re.empty() ? 0.0 : parse_real(re), imag};
}

/// "lin:a:b:n", "log:lo:hi:n", or a comma list.
inline std::vector<double> parse_grid(const std::string& text) {
  const std::string s = trim(text);
  std::vector<double> out;
  if (s.rfind("lin:", 0) == 0 || s.rfind("log:", 0) == 0) {
    const auto f = split(s, ':');
    if (f.size() != 4) throw ConfigError("grid '" + s + "' must look like " + f[0] + ":a:b:n");
    const double a = parse_real(f[1]), b = parse_real(f[2]);
    const int n = parse_int(f[3]);
    if (n < 1) throw ConfigError("grid '" + s + "' needs n >= 1");
    if (f[0] == "log" && !(a > 0.0 && b > 0.0)) throw ConfigError("log grid '" + s + "' needs positive ends");
    for (int k = 0; k < n; ++k) {
      const double w = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
      out.push_back(f[0] == "lin" ? a + (b - a) * w : std::exp(std::log(a) + (std::log(b) - std::log(a)) * w));
    }
    out.front() = a;
    if (n > 1) out.back() = b;
    return out;
  }
  for (const auto& item : split(s, ',')) out.push_back(parse_real(item));
  if (out.empty()) throw ConfigError("empty grid");
  return out;
}

/// disc, disc:R, annulus:r, circle:r, ellipse:a:b, jordan:<file>.
inline PlanarDomain parse_domain(const std::string& text) {
  const std::string s = trim(text);
  if (s.rfind("jordan:", 0) == 0) {
    try {
      return load_jordan_domain(s.substr(7));
    } catch (const Error& e) {
      throw ConfigError(std::string("domain '") + s + "': " + e.what());
    }
  }
  const auto f = split(s, ':');
  try {
    if (f[0] == "disc" && f.size() <= 2) return PlanarDomain::disc(f.size() == 2 ? parse_real(f[1]) : 1.0);
    if (f[0] == "annulus" && f.size() == 2) return PlanarDomain::annulus(parse_real(f[1]));
    if (f[0] == "circle" && f.size() == 2) return PlanarDomain::jordan_circle(parse_real(f[1]));
    if (f[0] == "ellipse" && f.size() == 3) return PlanarDomain::jordan_ellipse(parse_real(f[1]), parse_real(f[2]));
  } catch (const Error& e) {
    throw ConfigError("domain '" + s + "': " + e.what());
  }
  throw ConfigError("unknown domain '" + s + "' (disc[:R], annulus:r, circle:r, ellipse:a:b, jordan:file)");
}

/// unweighted, harmonic_log:alpha, harmonic_re:c, max_piece:delta:a.
inline WeightSpec parse_weight(const std::string& text) {
  const std::string s = trim(text);
  const auto f = split(s, ':');
  try {
    if (f[0] == "unweighted" && f.size() == 1) return WeightSpec();
    if (f[0] == "harmonic_log" && f.size() == 2) return WeightSpec(HarmonicLog{parse_real(f[1])});
    if (f[0] == "harmonic_re" && f.size() == 2) return WeightSpec(HarmonicRe{parse_real(f[1])});
    if (f[0] == "max_piece" && f.size() == 3) return WeightSpec(MaxPiece{parse_real(f[1]), parse_real(f[2])});
  } catch (const Error& e) {
    throw ConfigError("weight '" + s + "': " + e.what());
  }
  throw ConfigError("unknown weight '" + s + "' (unweighted, harmonic_log:a, harmonic_re:c, max_piece:delta:a)");
}

// ---- tolerances ------------------------------------------------------------

inline const std::vector<std::pair<const char*, double Tolerances::*>>& tolerance_fields() {
  static const std::vector<std::pair<const char*, double Tolerances::*>> f{
      {"sym_tol", &Tolerances::sym_tol},
      {"bdry_tol", &Tolerances::bdry_tol},
      {"tail_tol", &Tolerances::tail_tol},
      {"refine_tol", &Tolerances::refine_tol},
      {"cap_tol", &Tolerances::cap_tol},
      {"gram_tol", &Tolerances::gram_tol},
      {"trunc_tol", &Tolerances::trunc_tol},
      {"ratio_tol", &Tolerances::ratio_tol},
      {"margin_tol", &Tolerances::margin_tol},
      {"smv_tol", &Tolerances::smv_tol},
      {"limit_tol", &Tolerances::limit_tol},
      {"sandwich_tol", &Tolerances::sandwich_tol},
      {"theta_tol", &Tolerances::theta_tol},
      {"fuchsian_tail_tol", &Tolerances::fuchsian_tail_tol},
      {"laplacian_tol", &Tolerances::laplacian_tol},
      {"mass_tol", &Tolerances::mass_tol},
  };
  return f;
}

inline nlohmann::json to_json(const Tolerances& t) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, field] : tolerance_fields()) j[name] = t.*field;
  return j;
}

inline void set_tolerance(Tolerances& t, const std::string& name, double value, int line = 0) {
  for (const auto& [n, field] : tolerance_fields()) {
    if (name == n) {
      if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError("tolerance " + name + " must be positive", line);
      t.*field = value;
      return;
    }
  }
  throw ConfigError("unknown tolerance '" + name + "'", line);
}

// ---- commands and their parameters -----------------------------------------

enum class ParamKind {
  Domain,   // domain spec string
  Weight,   // weight spec string
  Grid,     // list of reals
  Points,   // a count, or a list of complex numbers
  Complex,  // one complex number
  ComplexList,
  Real,
  Int,
  Choices,  // comma list drawn from `choices`
};

struct ParamSpec {
  std::string name;
  ParamKind kind;
  std::string fallback;  // default, in flag syntax
  std::string help;
  std::vector<std::string> choices{};
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<ParamSpec> params;
};

inline const std::vector<CommandSpec>& command_table() {
  using K = ParamKind;
  const ParamSpec modes{"annulus-modes", K::Int, "64", "Laurent modes of the annulus Green function"};
  const ParamSpec quad{"quad-points", K::Int, "256", "Nystrom quadrature points"};
  static const std::vector<CommandSpec> table{
      {"green", "Green function G(z, w) and its symmetry",
       {{"domain", K::Domain, "disc", "domain spec"},
        {"z", K::Complex, "0.3", "first point"},
        {"w", K::Complex, "0.6i", "second point"},
        modes,
        quad}},
      {"capacity", "logarithmic capacity c(z)",
       {{"domain", K::Domain, "disc", "domain spec"}, {"points", K::Points, "0,0.3,0.6i", "count or list"}, modes, quad}},
      {"bergman", "weighted Bergman kernel diagonal",
       {{"domain", K::Domain, "disc", "domain spec"},
        {"weight", K::Weight, "unweighted", "weight spec"},
        {"points", K::Points, "0,0.3,0.6i", "count or list"}}},
      {"suita-check", "Suita ratio C = c^2 / (pi K) <= 1",
       {{"domain", K::Domain, "annulus:0.2", "domain spec"},
        {"points", K::Points, "8", "count or list"},
        modes,
        quad}},
      {"extended-suita-check", "pi rho K_rho >= c^2 for a harmonic weight",
       {{"domain", K::Domain, "annulus:0.2", "domain spec"},
        {"weight", K::Weight, "harmonic_log:0.3", "weight spec"},
        {"points", K::Points, "8", "count or list"},
        modes,
        quad}},
      {"optimal-constant", "optimality limit of the max-piece weight",
       {{"delta", K::Grid, "0.5,1,2", "delta values"},
        {"eps", K::Grid, "0,0.1", "eps values"},
        {"a-grid", K::Grid, "0.5,0.1,0.01,0.001,0.0001", "decreasing a values"}}},
      {"ode-check", "residuals of the ODE pair",
       {{"delta", K::Grid, "0.1,0.5,1,2,10", "delta values"},
        {"t-grid", K::Grid, "log:0.01:50:200", "t grid"}}},
      {"cutoff-check", "cutoff family properties and eps -> 0 limit",
       {{"t0", K::Grid, "1,5", "t0 values"},
        {"eps", K::Grid, "0.2,0.05", "eps values for the property check"},
        {"eps-limit", K::Grid, "0.2,0.1,0.05,0.01", "decreasing eps values for the limit check"},
        {"samples", K::Int, "10000", "sample count"}}},
      {"residual-measure", "shell value of the residual measure at a log pole",
       {{"psi0", K::Grid, "0,-0.7,0.3", "constant remainders"},
        {"f", K::Choices, "1,1+re", "test functions", {"1", "1+re", "1+im", "cos"}},
        {"t", K::Real, "20", "shell level"}}},
      {"squeeze-check", "squeezing sandwich s^2 <= C <= 1 and the boundary trend",
       {{"domain", K::Domain, "annulus:0.2", "annulus spec"},
        {"points", K::Points, "8", "count or list"},
        {"trend-kmax", K::Int, "4", "trend points |p| = 1 - 10^-k, k <= kmax; 0 skips"},
        modes}},
      {"fuchsian-check", "orbit sum against orbit product for cyclic groups",
       {{"c-grid", K::Grid, "lin:0.05:0.95:19", "generator parameters"}, {"N", K::Int, "256", "orbit truncation"}}},
      {"torus-check", "Green function, kernel and inequality on a flat torus",
       {{"tau", K::ComplexList, "i,0.5+i", "periods"}, {"d", K::Grid, "4,6", "even degrees >= 4"}}},
      {"all", "full acceptance suite", {}},
  };
  return table;
}

inline const CommandSpec& find_command(const std::string& name) {
  for (const auto& c : command_table()) {
    if (c.name == name) return c;
  }
  throw ConfigError("unknown command '" + name + "'");
}

// ---- normalization ---------------------------------------------------------

/// JSON scalars and arrays are accepted where flags take strings.
inline std::string as_flag_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  if (v.is_array()) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) out += ",";
      if (v[k].is_array() && v[k].size() == 2 && v[k][0].is_number() && v[k][1].is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << v[k][0].get<double>() << (v[k][1].get<double>() < 0 ? "" : "+") << v[k][1].get<double>() << "i";
        out += os.str();
      } else {
        out += as_flag_text(v[k]);
      }
    }
    return out;
  }
  throw ConfigError("expected a string, number or array");
}

inline nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

/// Canonical JSON for one parameter value.
inline nlohmann::json normalize_param(const ParamSpec& spec, const std::string& text) {
  try {
    switch (spec.kind) {
      case ParamKind::Domain: {
        const auto d = parse_domain(text);
        nlohmann::json j = {{"spec", trim(text)}, {"describe", d.describe()}};
        if (d.is_jordan()) {
          for (const auto& t : d.as_jordan().terms()) {
            j["terms"].push_back({t.index, t.coefficient.real(), t.coefficient.imag()});
          }
        }
        return j;
      }
      case ParamKind::Weight:
        return parse_weight(text).describe();
      case ParamKind::Grid:
        return parse_grid(text);
      case ParamKind::Points: {
        const std::string s = trim(text);
        if (s.find_first_of(",i.") == std::string::npos) {
          const int n = parse_int(s);
          if (n < 1) throw ConfigError("point count must be positive");
          return {{"count", n}};
        }
        nlohmann::json list = nlohmann::json::array();
        for (const auto& item : split(s, ',')) list.push_back(complex_json(parse_complex(item)));
        return {{"list", list}};
      }
      case ParamKind::Complex:
        return complex_json(parse_complex(text));
      case ParamKind::ComplexList: {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& item : split(text, ',')) list.push_back(complex_json(parse_complex(item)));
        if (list.empty()) throw ConfigError("empty list");
        return list;
      }
      case ParamKind::Real:
        return parse_real(text);
      case ParamKind::Int:
        return parse_int(text);
      case ParamKind::Choices: {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& item : split(text, ',')) {
          if (std::find(spec.choices.begin(), spec.choices.end(), item) == spec.choices.end()) {
            throw ConfigError("'" + item + "' is not one of the allowed values");
          }
          list.push_back(item);
        }
        if (list.empty()) throw ConfigError("empty list");
        return list;
      }
    }
  } catch (const ConfigError& e) {
    throw ConfigError("parameter " + spec.name + ": " + e.what());
  }
  return nullptr;
}

// ---- run configuration -----------------------------------------------------

struct RunConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();  // normalized, defaults filled in
  Tolerances tol{};
  std::string out_dir;
  std::uint64_t seed = 0;
  bool cache = true;
};

/// A parsed config file with enough of its text kept for line numbers.
struct ConfigFile {
  std::string path;
  std::string text;
  nlohmann::json doc = nlohmann::json::object();

  /// Line of the first occurrence of "key" in the file, 0 if absent.
  int line_of(const std::string& key) const {
    const auto pos = text.find("\"" + key + "\"");
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
  }
};

inline ConfigFile parse_config_text(const std::string& text, const std::string& path = "<config>") {
  ConfigFile cf;
  cf.path = path;
  cf.text = text;
  try {
    cf.doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    std::string what = e.what();
    const auto colon = what.find("syntax error");
    throw ConfigError(path + ": " + (colon == std::string::npos ? what : what.substr(colon)), line);
  }
  if (!cf.doc.is_object()) throw ConfigError(path + ": top level must be an object", 1);
  return cf;
}

inline ConfigFile load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

/// Values given on the command line; they win over the file.
struct FlagValues {
  std::string command;
  std::map<std::string, std::string> params;
  std::vector<std::string> tolerances;  // name=value
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<bool> cache;
};

inline RunConfig resolve_config(const FlagValues& flags, const std::optional<ConfigFile>& file) {
  RunConfig cfg;
  const nlohmann::json doc = file ? file->doc : nlohmann::json::object();
  const auto line = [&](const std::string& key) { return file ? file->line_of(key) : 0; };

  std::string command = flags.command;
  if (doc.contains("command")) {
    if (!doc["command"].is_string()) throw ConfigError("command must be a string", line("command"));
    const std::string from_file = doc["command"].get<std::string>();
    if (!command.empty() && command != from_file) {
      throw ConfigError("config names command '" + from_file + "' but '" + command + "' was requested",
                        line("command"));
    }
    command = from_file;
  }
  if (command.empty()) throw ConfigError("no command given");
  const CommandSpec* spec = nullptr;
  try {
    spec = &find_command(command);
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), line("command"));
  }
  cfg.command = command;

  // Defaults, then the file, then flags.
  std::map<std::string, std::pair<std::string, int>> raw;
  for (const auto& p : spec->params) raw[p.name] = {p.fallback, 0};
  for (const auto& [key, value] : doc.items()) {
    if (key == "command" || key == "tolerances" || key == "seed" || key == "cache" || key == "out_dir") continue;
    if (!raw.count(key)) throw ConfigError("unknown key '" + key + "' for command " + command, line(key));
    try {
      raw[key] = {as_flag_text(value), line(key)};
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what(), line(key));
    }
  }
  for (const auto& [key, value] : flags.params) {
    if (!raw.count(key)) throw ConfigError("option --" + key + " does not apply to " + command);
    raw[key] = {value, 0};
  }
  for (const auto& p : spec->params) {
    const auto& [text, at] = raw[p.name];
    try {
      cfg.params[p.name] = normalize_param(p, text);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), at);
    }
  }

  if (doc.contains("tolerances")) {
    const auto& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances must be an object", line("tolerances"));
    for (const auto& [name, value] : t.items()) {
      if (!value.is_number()) throw ConfigError("tolerance " + name + " must be a number", line(name));
      set_tolerance(cfg.tol, name, value.get<double>(), line(name));
    }
  }
  for (const auto& item : flags.tolerances) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--tol expects name=value, got '" + item + "'");
    set_tolerance(cfg.tol, trim(item.substr(0, eq)), parse_real(item.substr(eq + 1)));
  }

  if (doc.contains("seed")) {
    const auto& s = doc["seed"];
    if (!s.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer", line("seed"));
    cfg.seed = s.get<std::uint64_t>();
  }
  if (flags.seed) cfg.seed = *flags.seed;

  if (doc.contains("cache")) {
    if (!doc["cache"].is_boolean()) throw ConfigError("cache must be true or false", line("cache"));
    cfg.cache = doc["cache"].get<bool>();
  }
  if (flags.cache) cfg.cache = *flags.cache;

  if (doc.contains("out_dir")) {
    if (!doc["out_dir"].is_string()) throw ConfigError("out_dir must be a string", line("out_dir"));
    cfg.out_dir = doc["out_dir"].get<std::string>();
  }
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  if (cfg.out_dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    cfg.out_dir = env && *env ? env : "suita_out";
  }
  return cfg;
}

/// Everything that can change a result: not the output directory or the
/// cache switch.
inline nlohmann::json canonical_config(const RunConfig& c) {
  return {{"command", c.command},
          {"params", c.params},
          {"tolerances", to_json(c.tol)},
          {"seed", c.seed},
          {"version", kVersion}};
}

/// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
inline std::string config_hash(const RunConfig& c) {
  const std::string text = canonical_config(c).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace suita::cli

#endif  // SUITA_CLI_CONFIG_HPP

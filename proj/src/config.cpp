#include "frachelm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "frachelm/errors.hpp"
#include "frachelm/grid.hpp"
#include "frachelm/params.hpp"

namespace frachelm {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

[[noreturn]] void fail(ErrorKind kind, int line, const std::string& msg) {
  throw Error(kind, "line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line, const std::string& key) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    fail(ErrorKind::ParseError, line, key + ": expected a number, got '" + v + "'");
  }
  return out;
}

int to_int(const std::string& v, int line, const std::string& key) {
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    fail(ErrorKind::ParseError, line, key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

Vec3 to_vec(const std::string& v, int line, const std::string& key) {
  const auto parts = split(v, ',');
  if (parts.size() != 3) fail(ErrorKind::ParseError, line, key + ": expected x,y,z");
  return {to_double(parts[0], line, key), to_double(parts[1], line, key), to_double(parts[2], line, key)};
}

// Shortest representation that parses back to the same double.
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string vec(const Vec3& v) { return num(v.x) + "," + num(v.y) + "," + num(v.z); }

struct Field {
  std::function<void(ExperimentConfig&, const std::string&, int)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

void require(bool ok, int line, const std::string& msg) {
  if (!ok) fail(ErrorKind::ValidationError, line, msg);
}

#define FH_DOUBLE(KEY, MEMBER, CHECK, MSG)                                      \
  {KEY,                                                                         \
   {[](ExperimentConfig& c, const std::string& v, int line) {                   \
      const double x = to_double(v, line, KEY);                                 \
      require(CHECK, line, std::string(KEY) + " = " + v + ": " + MSG);          \
      c.MEMBER = x;                                                             \
    },                                                                          \
    [](const ExperimentConfig& c) { return num(c.MEMBER); }}}

#define FH_INT(KEY, MEMBER, CHECK, MSG)                                         \
  {KEY,                                                                         \
   {[](ExperimentConfig& c, const std::string& v, int line) {                   \
      const int x = to_int(v, line, KEY);                                       \
      require(CHECK, line, std::string(KEY) + " = " + v + ": " + MSG);          \
      c.MEMBER = x;                                                             \
    },                                                                          \
    [](const ExperimentConfig& c) { return std::to_string(c.MEMBER); }}}

#define FH_VEC(KEY, MEMBER, UNIT)                                               \
  {KEY,                                                                         \
   {[](ExperimentConfig& c, const std::string& v, int line) {                   \
      const Vec3 x = to_vec(v, line, KEY);                                      \
      if (UNIT) require(std::abs(norm(x) - 1.0) <= 1e-9, line, std::string(KEY) + " must be a unit vector"); \
      c.MEMBER = x;                                                             \
    },                                                                          \
    [](const ExperimentConfig& c) { return vec(c.MEMBER); }}}

#define FH_STRING(KEY, MEMBER, CHECK, MSG)                                      \
  {KEY,                                                                         \
   {[](ExperimentConfig& c, const std::string& x, int line) {                   \
      require(CHECK, line, std::string(KEY) + " = " + x + ": " + MSG);          \
      c.MEMBER = x;                                                             \
    },                                                                          \
    [](const ExperimentConfig& c) { return c.MEMBER; }}}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table{
      FH_DOUBLE("s", s, x > 0.75 && x < 1.5, "s must lie in (3/4, 3/2)"),
      FH_DOUBLE("k", k, x > 0.0, "k must be positive"),
      {"k_list",
       {[](ExperimentConfig& c, const std::string& v, int line) {
          c.k_list.clear();
          for (const auto& item : split(v, ',')) {
            const double x = to_double(item, line, "k_list");
            require(x > 0.0, line, "k_list entries must be positive");
            c.k_list.push_back(x);
          }
        },
        [](const ExperimentConfig& c) {
          std::string out;
          for (std::size_t i = 0; i < c.k_list.size(); ++i) out += (i ? "," : "") + num(c.k_list[i]);
          return out;
        }}},
      FH_INT("branch", branch, x == 1 || x == -1, "branch must be +1 or -1"),
      FH_DOUBLE("k0", k0, x > 0.0, "k0 must be positive"),
      FH_INT("grid.n", n, x >= 8, "grid.n must be >= 8"),
      FH_DOUBLE("grid.L", L, x > 0.0, "grid.L must be positive"),
      FH_STRING("potential", potential, !x.empty(), "expected 'builtin' or a field file"),
      FH_VEC("potential.center", potential_center, false),
      FH_DOUBLE("potential.width", potential_width, x > 0.0, "must be positive"),
      FH_DOUBLE("potential.height", potential_height, true, ""),
      FH_DOUBLE("potential.cutoff_inner", potential_cutoff_inner, x >= 0.0, "must be nonnegative"),
      FH_DOUBLE("potential.cutoff_outer", potential_cutoff_outer, x > 0.0, "must be positive"),
      FH_STRING("incident", incident, x == "plane" || x == "herglotz", "expected plane or herglotz"),
      FH_DOUBLE("incident.amplitude", amplitude, x >= 0.0, "must be nonnegative"),
      FH_VEC("incident.direction", direction, true),
      FH_INT("incident.order", herglotz_order, x >= 2, "sphere quadrature order must be >= 2"),
      FH_DOUBLE("incident.width", herglotz_width, x > 0.0, "must be positive"),
      FH_DOUBLE("solver.tol", tol, x > 0.0, "must be positive"),
      FH_INT("solver.max_iter", max_iter, x >= 1, "must be >= 1"),
      {"farfield.directions",
       {[](ExperimentConfig& c, const std::string& v, int line) {
          c.directions.clear();
          for (const auto& item : split(v, ';')) {
            const Vec3 d = to_vec(item, line, "farfield.directions");
            require(std::abs(norm(d) - 1.0) <= 1e-9, line, "farfield.directions entries must be unit vectors");
            c.directions.push_back(d);
          }
        },
        [](const ExperimentConfig& c) {
          std::string out;
          for (std::size_t i = 0; i < c.directions.size(); ++i) out += (i ? "; " : "") + vec(c.directions[i]);
          return out;
        }}},
      FH_STRING("inverse.oracle", oracle, x == "synthetic-born" || x == "nonlinear" || x == "from-file",
                "expected synthetic-born, nonlinear or from-file"),
      FH_STRING("inverse.file", oracle_file, true, ""),
      FH_INT("inverse.lattice_n", lattice_n, x >= 8 && x % 2 == 0, "must be even and >= 8"),
      FH_DOUBLE("inverse.xi_max", xi_max, x > 0.0, "must be positive"),
      FH_DOUBLE("inverse.l_min", l_min, x > 0.0, "must be positive"),
      FH_DOUBLE("inverse.l_scale", l_scale, x >= 0.0, "must be nonnegative"),
      FH_DOUBLE("inverse.amplitude", probe_amplitude, x > 0.0, "must be positive"),
      FH_STRING("output_dir", output_dir, true, ""),
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ParseError, line, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto it = fields().find(key);
    if (it == fields().end()) fail(ErrorKind::ParseError, line, "unknown key '" + key + "'");
    if (auto prev = seen.find(key); prev != seen.end()) {
      fail(ErrorKind::ParseError, line, "'" + key + "' already set on line " + std::to_string(prev->second));
    }
    seen[key] = line;
    it->second.set(c, value, line);
  }
  if (seen.empty()) throw Error(ErrorKind::ParseError, "configuration is empty");
  if (c.potential_cutoff_inner >= c.potential_cutoff_outer) {
    const int at = seen.count("potential.cutoff_inner") ? seen["potential.cutoff_inner"] : seen.begin()->second;
    fail(ErrorKind::ValidationError, at, "potential.cutoff_inner must be below potential.cutoff_outer");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string to_text(const ExperimentConfig& config) {
  std::ostringstream out;
  for (const auto& [key, field] : fields()) out << key << " = " << field.get(config) << '\n';
  return out.str();
}

void validate_for(const ExperimentConfig& c, const std::string& subcommand) {
  const ScatteringParams params{c.s, c.k, c.branch, c.k0};
  params.validate();
  BoxGrid{c.L, c.n}.validate();
  if (subcommand == "invert") {
    if (!(c.s > 0.8 && c.s < 1.5)) {
      throw Error(ErrorKind::ValidationError, "inversion needs s in (4/5, 3/2), got s = " + num(c.s));
    }
    if (c.oracle == "from-file" && c.oracle_file.empty()) {
      throw Error(ErrorKind::ValidationError, "inverse.oracle = from-file needs inverse.file");
    }
  }
  if (subcommand == "farfield" || subcommand == "forward") {
    if (c.incident == "herglotz" && c.herglotz_order < 2) {
      throw Error(ErrorKind::ValidationError, "incident.order must be >= 2");
    }
  }
}

}  // namespace frachelm

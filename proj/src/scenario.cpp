#include "pathframes/scenario.hpp"

#include "pathframes/errors.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pathframes {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

double number(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return parse_number_expression(j.get<std::string>());
    } catch (const ConfigError& e) {
      fail(where, e.what());
    }
  }
  fail(where, "expected a number");
}

double finite_number(const json& j, const std::string& where) {
  const double v = number(j, where);
  if (!std::isfinite(v)) fail(where, "must be finite");
  return v;
}

double positive(const json& j, const std::string& where) {
  const double v = finite_number(j, where);
  if (!(v > 0.0)) fail(where, "must be positive");
  return v;
}

long long integer(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15) return static_cast<long long>(v);
  }
  fail(where, "expected an integer");
}

bool boolean(const json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false");
  return j.get<bool>();
}

std::string string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

Vector vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = finite_number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Matrix matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Vector row = vector(j[static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
    if (row.size() != rows) fail(where, "must be square");
    m.row(i) = row.transpose();
  }
  return m;
}

/// Object accessor that rejects keys it was not asked about.
class Fields {
 public:
  Fields(const json& j, std::string where, std::set<std::string> allowed)
      : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail(where_, "expected an object");
    for (const auto& item : j_.items())
      if (!allowed.count(item.key())) fail(where_, "unknown key '" + item.key() + "'");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const json& at(const std::string& key) const {
    if (!j_.contains(key)) fail(where_, "missing key '" + key + "'");
    return j_.at(key);
  }
  std::string path(const std::string& key) const { return where_ + "." + key; }

 private:
  const json& j_;
  std::string where_;
};

json to_array(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

PathSpec parse_inline_path(const json& j) {
  if (!j.is_object() || !j.contains("type")) fail("path", "expected a preset name or an object with 'type'");
  const std::string type = string(j.at("type"), "path.type");
  PathSpec spec;
  if (type == "line") {
    Fields f(j, "path", {"type", "from", "to", "s_start", "s_end"});
    spec.shape = LinePath{vector(f.at("from"), "path.from"), vector(f.at("to"), "path.to")};
  } else if (type == "circle") {
    Fields f(j, "path", {"type", "center", "radius", "s_start", "s_end"});
    spec.shape = CirclePath{vector(f.at("center"), "path.center"), positive(f.at("radius"), "path.radius")};
  } else if (type == "coordinate-line") {
    Fields f(j, "path", {"type", "base", "axis", "s_start", "s_end"});
    const Vector base = vector(f.at("base"), "path.base");
    const long long axis = integer(f.at("axis"), "path.axis");
    if (axis < 0 || axis >= base.size()) fail("path.axis", "must index a coordinate of base");
    spec.shape = CoordinateLinePath{base, static_cast<int>(axis)};
  } else if (type == "latitude") {
    Fields f(j, "path", {"type", "theta0", "s_start", "s_end"});
    spec.shape = LatitudePath{finite_number(f.at("theta0"), "path.theta0")};
  } else {
    fail("path.type", "unknown path type '" + type + "'");
  }
  if (!j.contains("s_start") || !j.contains("s_end")) fail("path", "inline paths need s_start and s_end");
  spec.s_start = finite_number(j.at("s_start"), "path.s_start");
  spec.s_end = finite_number(j.at("s_end"), "path.s_end");
  if (!(spec.s_start < spec.s_end)) fail("path", "s_start must be below s_end");
  return spec;
}

json path_to_json(const PathSpec& spec) {
  json j;
  j["type"] = spec.type();
  if (const auto* p = std::get_if<LinePath>(&spec.shape)) {
    j["from"] = to_array(p->from);
    j["to"] = to_array(p->to);
  } else if (const auto* p = std::get_if<CirclePath>(&spec.shape)) {
    j["center"] = to_array(p->center);
    j["radius"] = p->radius;
  } else if (const auto* p = std::get_if<CoordinateLinePath>(&spec.shape)) {
    j["base"] = to_array(p->base);
    j["axis"] = p->axis;
  } else if (const auto* p = std::get_if<LatitudePath>(&spec.shape)) {
    j["theta0"] = p->theta0;
  }
  j["s_start"] = spec.s_start;
  j["s_end"] = spec.s_end;
  return j;
}

HolonomyVerdict parse_verdict(const std::string& text) {
  for (auto v : {HolonomyVerdict::Holonomic, HolonomyVerdict::Anholonomic, HolonomyVerdict::Inconclusive})
    if (text == to_string(v)) return v;
  fail("expect.holonomy", "unknown verdict '" + text + "'");
}

void check_path_dimension(const PathSpec& spec, int n) {
  const auto size_ok = [n](const Vector& v) { return v.size() == n; };
  bool ok = true;
  if (const auto* p = std::get_if<LinePath>(&spec.shape)) ok = size_ok(p->from) && size_ok(p->to);
  if (const auto* p = std::get_if<CirclePath>(&spec.shape)) ok = size_ok(p->center) && n >= 2;
  if (const auto* p = std::get_if<CoordinateLinePath>(&spec.shape)) ok = size_ok(p->base);
  if (std::holds_alternative<LatitudePath>(spec.shape)) ok = n == 2;
  if (!ok) fail("path", "dimension does not match the geometry's chart");
}

}  // namespace

double parse_number_expression(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  std::size_t pos = 0;
  double sign = 1.0;
  if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) sign = s[pos++] == '-' ? -1.0 : 1.0;

  auto factor = [&]() -> double {
    if (s.compare(pos, 2, "pi") == 0) {
      pos += 2;
      return M_PI;
    }
    const char* begin = s.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ConfigError("cannot parse number '" + text + "'");
    pos += static_cast<std::size_t>(end - begin);
    return v;
  };

  double value = sign * factor();
  while (pos < s.size()) {
    const char op = s[pos++];
    if (op != '*' && op != '/') throw ConfigError("cannot parse number '" + text + "'");
    const double f = factor();
    value = op == '*' ? value * f : value / f;
  }
  if (!std::isfinite(value)) throw ConfigError("number '" + text + "' is not finite");
  return value;
}

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Fields top(root, "config",
             {"name", "geometry", "path", "grid", "s0", "initial_frame", "seed", "tube", "ivp",
              "tolerances", "expect", "outputs"});
  Scenario sc;

  if (top.has("name")) {
    sc.name = string(top.at("name"), "name");
    if (sc.name.empty()) fail("name", "must not be empty");
    for (char c : sc.name)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'))
        fail("name", "use letters, digits, '-', '_' or '.' only");
  }

  const json& g = top.at("geometry");
  if (g.is_string()) {
    sc.geometry = g.get<std::string>();
  } else {
    Fields f(g, "geometry", {"name", "parameters"});
    sc.geometry = string(f.at("name"), "geometry.name");
    if (f.has("parameters")) {
      const json& p = f.at("parameters");
      if (!p.is_object()) fail("geometry.parameters", "expected an object");
      for (const auto& item : p.items())
        sc.parameters[item.key()] = finite_number(item.value(), "geometry.parameters." + item.key());
    }
  }
  const Geometry geometry = make_geometry(sc.geometry, sc.parameters);

  const json& p = top.at("path");
  if (p.is_string()) {
    sc.path_preset = p.get<std::string>();
    sc.path = find_path(geometry, sc.path_preset);
  } else {
    sc.path = parse_inline_path(p);
  }
  check_path_dimension(sc.path, geometry.chart.dim());

  Fields grid(top.at("grid"), "grid", {"steps_per_unit", "grid_size"});
  if (grid.has("steps_per_unit") == grid.has("grid_size"))
    fail("grid", "set exactly one of steps_per_unit and grid_size");
  if (grid.has("steps_per_unit")) sc.steps_per_unit = positive(grid.at("steps_per_unit"), "grid.steps_per_unit");
  if (grid.has("grid_size")) {
    const long long n = integer(grid.at("grid_size"), "grid.grid_size");
    if (n < 5 || n > 10'000'000) fail("grid.grid_size", "must be between 5 and 1e7");
    sc.grid_size = static_cast<int>(n);
  }

  if (top.has("s0")) {
    sc.s0 = finite_number(top.at("s0"), "s0");
    if (*sc.s0 < sc.path.s_start || *sc.s0 > sc.path.s_end) fail("s0", "must lie on the path interval");
  }
  if (top.has("initial_frame")) {
    sc.initial_frame = matrix(top.at("initial_frame"), "initial_frame");
    if (sc.initial_frame->rows() != geometry.chart.dim()) fail("initial_frame", "size does not match the chart");
    if (std::abs(sc.initial_frame->determinant()) < 1e-12) fail("initial_frame", "must be invertible");
  }

  const long long seed = integer(top.at("seed"), "seed");
  if (seed < 0) fail("seed", "must be non-negative");
  sc.seed = static_cast<std::uint64_t>(seed);

  if (top.has("tube")) {
    Fields f(top.at("tube"), "tube", {"radius", "transverse_step"});
    if (f.has("radius")) sc.tube_radius = positive(f.at("radius"), "tube.radius");
    if (f.has("transverse_step")) sc.transverse_step = positive(f.at("transverse_step"), "tube.transverse_step");
  }
  if (top.has("ivp")) {
    Fields f(top.at("ivp"), "ivp", {"steps_per_unit"});
    if (f.has("steps_per_unit")) {
      const double spu = finite_number(f.at("steps_per_unit"), "ivp.steps_per_unit");
      if (spu < 0.0) fail("ivp.steps_per_unit", "must be non-negative");
      sc.ivp_steps_per_unit = spu;
    }
  }
  if (top.has("tolerances")) {
    Fields f(top.at("tolerances"), "tolerances",
             {"residual", "constancy", "all_fields", "jacobian", "holonomic", "torsion", "angle"});
    auto& t = sc.tolerances;
    for (auto [key, slot] : std::initializer_list<std::pair<const char*, double*>>{
             {"residual", &t.residual}, {"constancy", &t.constancy}, {"all_fields", &t.all_fields},
             {"jacobian", &t.jacobian}, {"holonomic", &t.holonomic}, {"torsion", &t.torsion},
             {"angle", &t.angle}})
      if (f.has(key)) *slot = positive(f.at(key), f.path(key));
  }
  if (top.has("expect")) {
    Fields f(top.at("expect"), "expect", {"holonomy", "holonomy_angle"});
    if (f.has("holonomy")) sc.expect.holonomy = parse_verdict(string(f.at("holonomy"), "expect.holonomy"));
    if (f.has("holonomy_angle")) sc.expect.holonomy_angle = finite_number(f.at("holonomy_angle"), "expect.holonomy_angle");
  }
  if (top.has("outputs")) {
    Fields f(top.at("outputs"), "outputs", {"csv", "summary", "row_stride"});
    if (f.has("csv")) sc.outputs.csv = boolean(f.at("csv"), "outputs.csv");
    if (f.has("summary")) sc.outputs.summary = boolean(f.at("summary"), "outputs.summary");
    if (f.has("row_stride")) {
      const long long stride = integer(f.at("row_stride"), "outputs.row_stride");
      if (stride < 1) fail("outputs.row_stride", "must be at least 1");
      sc.outputs.row_stride = static_cast<int>(stride);
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file '" + file.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  json params = json::object();
  for (const auto& [key, value] : sc.parameters) params[key] = value;
  j["geometry"] = {{"name", sc.geometry}, {"parameters", params}};
  j["path"] = sc.path_preset.empty() ? path_to_json(sc.path) : json(sc.path_preset);
  if (sc.grid_size)
    j["grid"] = {{"grid_size", *sc.grid_size}};
  else
    j["grid"] = {{"steps_per_unit", sc.steps_per_unit.value_or(2000.0)}};
  j["s0"] = sc.s0.value_or(sc.path.s_start);
  const int n = static_cast<int>(std::visit(
      [](const auto& shape) -> Eigen::Index {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, LinePath>) return shape.from.size();
        else if constexpr (std::is_same_v<T, CirclePath>) return shape.center.size();
        else if constexpr (std::is_same_v<T, CoordinateLinePath>) return shape.base.size();
        else return 2;
      },
      sc.path.shape));
  const Matrix b = sc.initial_frame.value_or(Matrix::Identity(n, n));
  json frame = json::array();
  for (Eigen::Index i = 0; i < b.rows(); ++i) frame.push_back(to_array(b.row(i).transpose()));
  j["initial_frame"] = frame;
  j["seed"] = sc.seed;
  json tube = {{"transverse_step", sc.transverse_step}};
  if (sc.tube_radius) tube["radius"] = *sc.tube_radius;
  j["tube"] = tube;
  j["ivp"] = {{"steps_per_unit", sc.ivp_steps_per_unit}};
  const auto& t = sc.tolerances;
  j["tolerances"] = {{"residual", t.residual},     {"constancy", t.constancy}, {"all_fields", t.all_fields},
                     {"jacobian", t.jacobian},     {"holonomic", t.holonomic}, {"torsion", t.torsion},
                     {"angle", t.angle}};
  json expect = json::object();
  if (sc.expect.holonomy) expect["holonomy"] = to_string(*sc.expect.holonomy);
  if (sc.expect.holonomy_angle) expect["holonomy_angle"] = *sc.expect.holonomy_angle;
  j["expect"] = expect;
  j["outputs"] = {{"csv", sc.outputs.csv}, {"summary", sc.outputs.summary}, {"row_stride", sc.outputs.row_stride}};
  return j.dump(2);
}

}  // namespace pathframes

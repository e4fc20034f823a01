#include "varlp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "varlp/norms.hpp"
#include "varlp/operators.hpp"

namespace varlp {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string_view to_string(OperatorTag t) {
  switch (t) {
    case OperatorTag::identity: return "identity";
    case OperatorTag::hardy: return "hardy";
    case OperatorTag::hardy_prime: return "hardy_prime";
    case OperatorTag::maximal: return "maximal";
    case OperatorTag::potential_T: return "potential_T";
    case OperatorTag::potential_I: return "potential_I";
    case OperatorTag::singular: return "singular";
  }
  return "?";
}

PointFunction FunctionSpec::on(const DiscreteSpace& space) const {
  if (const auto* prof = std::get_if<RadialProfile>(&expr)) return prof->on(space, kind);
  const auto& vals = std::get<std::vector<double>>(expr);
  if (vals.size() != space.size())
    throw ScenarioError("values", "explicit function has " + std::to_string(vals.size()) +
                                      " values for a space of " + std::to_string(space.size()) +
                                      " points");
  return PointFunction(vals, kind);
}

namespace {

const std::vector<std::string> kConditionNames = {
    "A1", "B1", "P1", "P2", "Thm33_i", "Thm33_ii", "I1", "J1", "E", "S", "Thm43",
    "It1", "It2", "Thm42_i", "Thm42_ii", "cond_c", "Ar"};

// Which conditions each operator can be checked against.
const std::map<OperatorTag, std::set<std::string>>& compatibility() {
  static const std::map<OperatorTag, std::set<std::string>> table = {
      {OperatorTag::identity, {"Ar"}},
      {OperatorTag::hardy, {"A1"}},
      {OperatorTag::hardy_prime, {"B1"}},
      {OperatorTag::potential_T, {"P1", "P2", "I1", "J1", "It1", "It2", "cond_c"}},
      {OperatorTag::potential_I, {"Thm33_i", "Thm33_ii", "E", "cond_c"}},
      {OperatorTag::maximal, {"Thm42_i", "Thm42_ii", "S", "Thm43", "cond_c", "Ar"}},
      {OperatorTag::singular, {"Thm42_i", "Thm42_ii", "S", "Thm43", "cond_c", "Ar"}},
  };
  return table;
}

bool needs_radial_weights(const std::string& c) {
  return c == "I1" || c == "J1" || c == "E" || c == "S" || c == "Thm43";
}
bool needs_radial_w(const std::string& c) { return needs_radial_weights(c) || c == "It1" || c == "It2"; }
bool needs_alpha(const std::string& c) {
  return c == "P1" || c == "P2" || c == "Thm33_i" || c == "Thm33_ii" || c == "I1" ||
         c == "J1" || c == "E" || c == "It1" || c == "It2";
}
bool needs_v(const std::string& c) { return c != "Ar"; }

double number_at(const json& j, const std::string& key, const std::string& field) {
  auto it = j.find(key);
  if (it == j.end()) throw ScenarioError(field + "." + key, "missing");
  if (!it->is_number()) throw ScenarioError(field + "." + key, "expected a number");
  return it->get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& field) {
  return j.contains(key) ? number_at(j, key, field) : fallback;
}

std::string string_at(const json& j, const std::string& key, const std::string& field) {
  auto it = j.find(key);
  if (it == j.end()) throw ScenarioError(field + "." + key, "missing");
  if (!it->is_string()) throw ScenarioError(field + "." + key, "expected a string");
  return it->get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& field) {
  if (!j.is_array()) throw ScenarioError(field, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw ScenarioError(field, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

FunctionKind parse_kind(const std::string& s, const std::string& field) {
  if (s == "exponent") return FunctionKind::exponent;
  if (s == "weight") return FunctionKind::weight;
  if (s == "test") return FunctionKind::test;
  throw ScenarioError(field + ".kind", "unknown kind '" + s + "'");
}

std::string_view kind_name(FunctionKind k) {
  switch (k) {
    case FunctionKind::exponent: return "exponent";
    case FunctionKind::weight: return "weight";
    case FunctionKind::test: return "test";
  }
  return "?";
}

FunctionSpec parse_function(const json& j, const std::string& field, FunctionKind default_kind) {
  FunctionSpec out;
  out.kind = default_kind;
  if (j.is_number()) {
    out.expr = RadialProfile::constant(j.get<double>());
    return out;
  }
  if (!j.is_object()) throw ScenarioError(field, "expected a number or an object with \"expr\"");
  if (j.contains("kind")) out.kind = parse_kind(string_at(j, "kind", field), field);
  const std::string expr = string_at(j, "expr", field);
  RadialProfile prof;
  if (expr == "const") {
    prof = RadialProfile::constant(number_at(j, "value", field));
  } else if (expr == "affine-in-dist") {
    prof.kind = RadialProfile::Kind::affine;
    prof.a = number_or(j, "a", 0.0, field);
    prof.b = number_or(j, "b", 1.0, field);
  } else if (expr == "power-of-dist") {
    prof.kind = RadialProfile::Kind::power;
    prof.a = number_or(j, "a", 0.0, field);
    prof.b = number_or(j, "b", 1.0, field);
    prof.gamma = number_at(j, "gamma", field);
  } else if (expr == "log-power") {
    prof.kind = RadialProfile::Kind::log_power;
    prof.a = number_at(j, "a", field);
    prof.b = number_at(j, "b", field);
    prof.gamma = number_at(j, "gamma", field);
  } else if (expr == "power-log") {
    prof.kind = RadialProfile::Kind::power_log;
    prof.b = number_or(j, "b", 1.0, field);
    prof.gamma = number_at(j, "gamma", field);
    prof.delta = number_at(j, "delta", field);
    prof.scale = number_at(j, "scale", field);
  } else if (expr == "explicit") {
    auto it = j.find("values");
    if (it == j.end()) throw ScenarioError(field + ".values", "missing");
    out.expr = numbers(*it, field + ".values");
    return out;
  } else {
    throw ScenarioError(field + ".expr", "unknown expression '" + expr + "'");
  }
  out.expr = prof;
  return out;
}

ojson function_to_json(const FunctionSpec& f) {
  ojson j;
  if (const auto* vals = std::get_if<std::vector<double>>(&f.expr)) {
    j["expr"] = "explicit";
    j["values"] = *vals;
  } else {
    const auto& p = std::get<RadialProfile>(f.expr);
    switch (p.kind) {
      case RadialProfile::Kind::constant:
        j["expr"] = "const";
        j["value"] = p.a;
        break;
      case RadialProfile::Kind::affine:
        j["expr"] = "affine-in-dist";
        j["a"] = p.a;
        j["b"] = p.b;
        break;
      case RadialProfile::Kind::power:
        j["expr"] = "power-of-dist";
        j["a"] = p.a;
        j["b"] = p.b;
        j["gamma"] = p.gamma;
        break;
      case RadialProfile::Kind::log_power:
        j["expr"] = "log-power";
        j["a"] = p.a;
        j["b"] = p.b;
        j["gamma"] = p.gamma;
        break;
      case RadialProfile::Kind::power_log:
        j["expr"] = "power-log";
        j["b"] = p.b;
        j["gamma"] = p.gamma;
        j["delta"] = p.delta;
        j["scale"] = p.scale;
        break;
    }
  }
  j["kind"] = std::string(kind_name(f.kind));
  return j;
}

SpaceSpec parse_space(const json& j) {
  SpaceSpec s;
  if (!j.is_object()) throw ScenarioError("space", "expected an object");
  if (j.contains("generator")) {
    const std::string g = string_at(j, "generator", "space");
    if (g == "grid") {
      s.generator = SpaceSpec::Generator::grid;
      s.dist_power = number_or(j, "dist_power", 1.0, "space");
    } else if (g == "cantor") {
      s.generator = SpaceSpec::Generator::cantor;
      s.cantor_depth = static_cast<int>(number_or(j, "depth", 8, "space"));
      if (s.cantor_depth < 1 || s.cantor_depth > 16)
        throw ScenarioError("space.depth", "must lie in [1, 16]");
    } else {
      throw ScenarioError("space.generator", "unknown generator '" + g + "'");
    }
  } else {
    s.generator = SpaceSpec::Generator::explicit_points;
    auto pts = j.find("points");
    if (pts == j.end() || !pts->is_array() || pts->empty())
      throw ScenarioError("space.points", "missing or empty");
    const std::string metric = j.contains("metric") ? string_at(j, "metric", "space") : "euclidean1d";
    if (metric == "euclidean1d") {
      for (const auto& p : *pts) {
        if (!p.is_object()) throw ScenarioError("space.points", "expected objects {id, coord}");
        s.coords.push_back(number_at(p, "coord", "space.points"));
      }
    } else if (metric == "explicit") {
      auto d = j.find("dist");
      if (d == j.end()) throw ScenarioError("space.dist", "missing for the explicit metric");
      s.dist = numbers(*d, "space.dist");
      if (s.dist.size() != pts->size() * pts->size())
        throw ScenarioError("space.dist", "expected an n x n row-major table");
    } else {
      throw ScenarioError("space.metric", "unknown metric '" + metric + "'");
    }
    std::map<std::string, std::size_t> ids;
    for (std::size_t i = 0; i < pts->size(); ++i) {
      const auto& p = (*pts)[i];
      if (p.is_object() && p.contains("id")) ids[p["id"].dump()] = i;
    }
    if (j.contains("mu")) {
      const auto& m = j["mu"];
      if (m.is_string()) {
        if (m.get<std::string>() != "lebesgue-grid")
          throw ScenarioError("space.mu", "unknown measure '" + m.get<std::string>() + "'");
      } else {
        s.mu = numbers(m, "space.mu");
        if (s.mu.size() != pts->size()) throw ScenarioError("space.mu", "one mass per point expected");
      }
    }
    if (j.contains("x0")) {
      auto it = ids.find(j["x0"].dump());
      if (it != ids.end()) {
        s.x0 = it->second;
      } else if (j["x0"].is_number_unsigned()) {
        s.x0 = j["x0"].get<std::size_t>();
      } else {
        throw ScenarioError("space.x0", "does not name a point");
      }
      if (s.x0 >= pts->size()) throw ScenarioError("space.x0", "does not name a point");
    }
  }
  if (j.contains("L")) {
    const auto& l = j["L"];
    if (l.is_string() && l.get<std::string>() == "inf") {
      s.infinite = true;
    } else if (l.is_number()) {
      s.L = l.get<double>();
      if (!(*s.L > 0)) throw ScenarioError("space.L", "must be positive");
    } else {
      throw ScenarioError("space.L", "expected a number or \"inf\"");
    }
  }
  if (j.contains("trunc_radius")) s.trunc_radius = number_at(j, "trunc_radius", "space");
  return s;
}

ojson space_to_json(const SpaceSpec& s) {
  ojson j;
  switch (s.generator) {
    case SpaceSpec::Generator::grid:
      j["generator"] = "grid";
      j["dist_power"] = s.dist_power;
      break;
    case SpaceSpec::Generator::cantor:
      j["generator"] = "cantor";
      j["depth"] = s.cantor_depth;
      break;
    case SpaceSpec::Generator::explicit_points: {
      const std::size_t n = s.coords.empty()
                                ? static_cast<std::size_t>(std::llround(std::sqrt(s.dist.size())))
                                : s.coords.size();
      ojson pts = ojson::array();
      for (std::size_t i = 0; i < n; ++i) {
        ojson p;
        p["id"] = i;
        if (!s.coords.empty()) p["coord"] = s.coords[i];
        pts.push_back(p);
      }
      j["points"] = pts;
      if (s.coords.empty()) {
        j["metric"] = "explicit";
        j["dist"] = s.dist;
      } else {
        j["metric"] = "euclidean1d";
      }
      if (s.mu.empty())
        j["mu"] = "lebesgue-grid";
      else
        j["mu"] = s.mu;
      j["x0"] = s.x0;
      break;
    }
  }
  if (s.infinite)
    j["L"] = "inf";
  else if (s.L)
    j["L"] = *s.L;
  if (s.trunc_radius) j["trunc_radius"] = *s.trunc_radius;
  return j;
}

OperatorTag parse_operator(const std::string& s) {
  for (auto t : {OperatorTag::identity, OperatorTag::hardy, OperatorTag::hardy_prime,
                 OperatorTag::maximal, OperatorTag::potential_T, OperatorTag::potential_I,
                 OperatorTag::singular})
    if (to_string(t) == s) return t;
  throw ScenarioError("operator", "unknown operator '" + s + "'");
}

ExampleSpec parse_example(const json& j) {
  if (!j.is_object()) throw ScenarioError("example", "expected an object");
  ExampleSpec e;
  const std::string variant = string_at(j, "variant", "example");
  if (variant == "ex38")
    e.variant = ExampleVariant::ex38;
  else if (variant == "ex44")
    e.variant = ExampleVariant::ex44;
  else
    throw ScenarioError("example.variant", "unknown example '" + variant + "'");
  const json params = j.value("params", json::object());
  if (!params.is_object()) throw ScenarioError("example.params", "expected an object");
  auto& p = e.params;
  const std::string f = "example.params";
  p.p_minus = number_or(params, "p_minus", p.p_minus, f);
  p.p_plus = number_or(params, "p_plus", p.p_plus, f);
  p.alpha = number_or(params, "alpha", p.alpha, f);
  p.beta = number_or(params, "beta", p.beta, f);
  if (params.contains("gamma")) p.gamma = number_at(params, "gamma", f);
  p.p_conj_at_x0 = number_or(params, "p_conj_at_x0", p.p_conj_at_x0, f);
  p.L = number_or(params, "L", p.L, f);
  return e;
}

ojson example_to_json(const ExampleSpec& e) {
  ojson j;
  j["variant"] = e.variant == ExampleVariant::ex38 ? "ex38" : "ex44";
  ojson p;
  if (e.variant == ExampleVariant::ex38) {
    p["p_minus"] = e.params.p_minus;
    p["p_plus"] = e.params.p_plus;
    p["alpha"] = e.params.alpha;
    p["beta"] = e.params.beta;
    if (e.params.gamma) p["gamma"] = *e.params.gamma;
  } else {
    p["p_conj_at_x0"] = e.params.p_conj_at_x0;
    p["L"] = e.params.L;
  }
  j["params"] = p;
  return j;
}

Scenario from_json(const json& j) {
  if (!j.is_object()) throw ScenarioError("scenario", "top level must be an object");
  static const std::set<std::string> known = {
      "name", "space", "p", "q", "alpha", "v", "w", "example", "operator", "conditions",
      "resolutions", "seed", "A", "r", "a", "trials", "monotone_check"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ScenarioError(key, "unknown field");

  Scenario s;
  s.name = j.value("name", std::string("scenario"));
  s.space = parse_space(j.value("space", json{{"generator", "grid"}}));
  if (j.contains("p")) s.p = parse_function(j["p"], "p", FunctionKind::exponent);
  else s.p = FunctionSpec{RadialProfile::constant(2.0), FunctionKind::exponent};
  if (!j.contains("q")) {
    s.q = s.p;
  } else if (j["q"].is_string() && j["q"].get<std::string>() == "sobolev") {
    s.q.reset();
  } else {
    s.q = parse_function(j["q"], "q", FunctionKind::exponent);
  }
  if (j.contains("alpha")) s.alpha = parse_function(j["alpha"], "alpha", FunctionKind::test);
  if (j.contains("v")) s.v = parse_function(j["v"], "v", FunctionKind::weight);
  if (j.contains("w")) s.w = parse_function(j["w"], "w", FunctionKind::weight);
  if (j.contains("example")) s.example = parse_example(j["example"]);
  if (j.contains("operator")) {
    if (!j["operator"].is_string()) throw ScenarioError("operator", "expected a string");
    s.op = parse_operator(j["operator"].get<std::string>());
  }
  if (j.contains("conditions")) {
    if (!j["conditions"].is_array()) throw ScenarioError("conditions", "expected an array of names");
    for (const auto& c : j["conditions"]) {
      if (!c.is_string()) throw ScenarioError("conditions", "expected an array of names");
      s.conditions.push_back(c.get<std::string>());
    }
  }
  if (j.contains("resolutions")) {
    s.resolutions.clear();
    if (!j["resolutions"].is_array()) throw ScenarioError("resolutions", "expected an array");
    for (const auto& r : j["resolutions"]) {
      if (!r.is_number_unsigned()) throw ScenarioError("resolutions", "expected positive integers");
      s.resolutions.push_back(r.get<std::size_t>());
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ScenarioError("seed", "expected a non-negative integer");
    s.seed = j["seed"].get<unsigned long long>();
  }
  s.A = number_or(j, "A", s.A, "scenario");
  s.r = number_or(j, "r", s.r, "scenario");
  if (j.contains("a")) s.a = number_at(j, "a", "scenario");
  if (j.contains("trials")) {
    if (!j["trials"].is_number_unsigned()) throw ScenarioError("trials", "expected a non-negative integer");
    s.trials = j["trials"].get<std::size_t>();
  }
  if (j.contains("monotone_check")) {
    const std::string m = string_at(j, "monotone_check", "scenario");
    if (m == "enforce") s.monotone = MonotoneCheck::enforce;
    else if (m == "warn") s.monotone = MonotoneCheck::warn;
    else throw ScenarioError("monotone_check", "expected \"enforce\" or \"warn\"");
  }
  return s;
}

// nlohmann reports a byte offset; turn it into line:column of the text.
std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("parse", locate(text, e.byte) + ": " + e.what());
  }
  Scenario s = from_json(j);
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("path", "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  ojson j;
  j["name"] = s.name;
  j["space"] = space_to_json(s.space);
  j["p"] = function_to_json(s.p);
  if (s.q)
    j["q"] = function_to_json(*s.q);
  else
    j["q"] = "sobolev";
  if (s.alpha) j["alpha"] = function_to_json(*s.alpha);
  if (s.v) j["v"] = function_to_json(*s.v);
  if (s.w) j["w"] = function_to_json(*s.w);
  if (s.example) j["example"] = example_to_json(*s.example);
  j["operator"] = std::string(to_string(s.op));
  j["conditions"] = s.conditions;
  j["resolutions"] = s.resolutions;
  j["seed"] = s.seed;
  j["A"] = s.A;
  j["r"] = s.r;
  if (s.a) j["a"] = *s.a;
  j["trials"] = s.trials;
  j["monotone_check"] = s.monotone == MonotoneCheck::enforce ? "enforce" : "warn";
  return j.dump(2);
}

void validate_scenario(const Scenario& s) {
  const auto& allowed = compatibility().at(s.op);
  std::set<std::string> seen;
  for (const auto& c : s.conditions) {
    if (std::find(kConditionNames.begin(), kConditionNames.end(), c) == kConditionNames.end())
      throw ScenarioError("conditions", "unknown condition '" + c + "'");
    if (!seen.insert(c).second) throw ScenarioError("conditions", "duplicate condition '" + c + "'");
    if (!allowed.count(c))
      throw ScenarioError("conditions", "condition '" + c + "' does not apply to operator '" +
                                            std::string(to_string(s.op)) + "'");
  }
  if (s.resolutions.empty()) throw ScenarioError("resolutions", "at least one resolution required");
  if (s.resolutions.size() == 2)
    throw ScenarioError("resolutions", "a refinement study needs at least three resolutions");
  for (std::size_t i = 0; i < s.resolutions.size(); ++i) {
    if (s.resolutions[i] < 2) throw ScenarioError("resolutions", "each resolution must be >= 2");
    if (i > 0 && s.resolutions[i] <= s.resolutions[i - 1])
      throw ScenarioError("resolutions", "must be strictly increasing");
  }
  if (!(s.A > 1)) throw ScenarioError("A", "must exceed 1");
  if (!(s.r > 1)) throw ScenarioError("r", "must exceed 1");
  if (s.a && !(*s.a > 0)) throw ScenarioError("a", "must be positive");

  const bool example = s.example.has_value();
  const bool any_conditions = !s.conditions.empty();
  const bool needs_ratio_weights = any_conditions && s.op != OperatorTag::identity;
  for (const auto& c : s.conditions) {
    if (!example) {
      if (needs_v(c) && !s.v) throw ScenarioError("v", "weight required by condition '" + c + "'");
      if (!s.w) throw ScenarioError("w", "weight required by condition '" + c + "'");
      if (needs_radial_weights(c) && !s.v->is_radial())
        throw ScenarioError("v", "condition '" + c + "' requires a radial monotone weight");
      if (needs_radial_w(c) && !s.w->is_radial())
        throw ScenarioError("w", "condition '" + c + "' requires a radial monotone weight");
    }
    if (needs_alpha(c) && !s.alpha)
      throw ScenarioError("alpha", "order required by condition '" + c + "'");
  }
  if (needs_ratio_weights && !example && (!s.v || !s.w))
    throw ScenarioError(!s.v ? "v" : "w", "weight required by operator '" +
                                              std::string(to_string(s.op)) + "'");
  if (!s.q && !s.alpha) throw ScenarioError("alpha", "q = \"sobolev\" needs an order alpha");
  if ((s.op == OperatorTag::potential_T || s.op == OperatorTag::potential_I) && any_conditions &&
      !s.alpha)
    throw ScenarioError("alpha", "order required by operator '" + std::string(to_string(s.op)) + "'");
  if (s.example) {
    const ExampleWeights ew = make_example_weights(s.example->variant, s.example->params);
    if (!ew.admissible) throw PreconditionError("example weights not admissible: " + ew.reason, "example");
  }
}

DiscreteSpace build_space(const SpaceSpec& spec, std::size_t resolution) {
  auto finish = [&](DiscreteSpace space) {
    if (spec.infinite) {
      space.set_infinite_model(spec.trunc_radius.value_or(space.diameter()));
    } else if (spec.L) {
      space.set_diameter(*spec.L);
    }
    return space;
  };
  switch (spec.generator) {
    case SpaceSpec::Generator::grid:
      return finish(DiscreteSpace::uniform_grid(resolution, spec.dist_power));
    case SpaceSpec::Generator::cantor:
      return finish(DiscreteSpace::cantor(spec.cantor_depth));
    case SpaceSpec::Generator::explicit_points: break;
  }
  if (!spec.coords.empty()) {
    std::vector<double> mu = spec.mu;
    if (mu.empty()) {
      // Trapezoid weights over the sorted coordinates.
      const std::size_t n = spec.coords.size();
      if (n < 2) throw ScenarioError("space.mu", "lebesgue-grid needs at least two points");
      std::vector<std::size_t> idx(n);
      for (std::size_t i = 0; i < n; ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return spec.coords[a] < spec.coords[b]; });
      mu.assign(n, 0.0);
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const double h = spec.coords[idx[k + 1]] - spec.coords[idx[k]];
        mu[idx[k]] += h / 2;
        mu[idx[k + 1]] += h / 2;
      }
    }
    return finish(DiscreteSpace(spec.coords, std::move(mu), spec.x0));
  }
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(spec.dist.size())));
  std::vector<double> mu = spec.mu.empty() ? std::vector<double>(n, 1.0 / n) : spec.mu;
  return finish(DiscreteSpace(n, spec.dist, std::move(mu), spec.x0));
}

namespace {

struct Weights {
  PointFunction v, w;
  std::optional<RadialProfile> v_prof, w_prof;
};

Weights resolve_weights(const Scenario& s, const DiscreteSpace& space) {
  Weights out;
  if (s.example) {
    const ExampleWeights ew = make_example_weights(s.example->variant, s.example->params);
    out.v_prof = ew.v;
    out.w_prof = ew.w;
    out.v = ew.v.on(space);
    out.w = ew.w.on(space);
    return out;
  }
  const std::size_t n = space.size();
  out.v = s.v ? s.v->on(space) : PointFunction::constant(n, 1.0, FunctionKind::weight);
  out.w = s.w ? s.w->on(space) : PointFunction::constant(n, 1.0, FunctionKind::weight);
  if (s.v && s.v->is_radial()) out.v_prof = std::get<RadialProfile>(s.v->expr);
  if (s.w && s.w->is_radial()) out.w_prof = std::get<RadialProfile>(s.w->expr);
  return out;
}

double constant_value(const PointFunction& f, const std::string& name) {
  if (!f.is_constant())
    throw PreconditionError(name + " must be constant for this condition", name);
  return f[0];
}

double min_spacing(const DiscreteSpace& space) {
  const auto& c = space.coords();
  if (!c) return 0.0;
  std::vector<double> sorted = *c;
  std::sort(sorted.begin(), sorted.end());
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) h = std::min(h, sorted[i] - sorted[i - 1]);
  return h;
}

StudyInstance evaluate_once(const Scenario& s, std::size_t resolution) {
  StudyInstance inst;
  const DiscreteSpace space = build_space(s.space, resolution);
  const PointFunction p = s.p.on(space);
  require_exponent(p, "p");
  const std::optional<PointFunction> alpha =
      s.alpha ? std::optional<PointFunction>(s.alpha->on(space)) : std::nullopt;
  const PointFunction q = s.q ? s.q->on(space) : sobolev_q(p, *alpha);
  const Weights wt = resolve_weights(s, space);
  const double a = s.a.value_or(space.diameter());
  const GeometryReport geom = geometry_constants(space, s.A);
  inst.geometry = geom;

  auto push = [&](ConditionReport r) {
    r.resolution = resolution;
    inst.conditions.push_back(std::move(r));
  };
  auto radial_v = [&]() -> const RadialProfile& { return *wt.v_prof; };
  auto radial_w = [&]() -> const RadialProfile& { return *wt.w_prof; };
  const double alpha_c = [&] {
    return alpha && alpha->is_constant() ? (*alpha)[0] : 0.0;
  }();

  for (const auto& c : s.conditions) {
    if (c == "A1") {
      push(cond_A1(space, p, q, wt.v, wt.w, a));
    } else if (c == "B1") {
      push(cond_B1(space, p, q, wt.v, wt.w, a));
    } else if (c == "P1" || c == "P2") {
      auto [p1, p2] = cond_potential_P(space, p, wt.v, wt.w, constant_value(*alpha, "alpha"), a);
      push(c == "P1" ? p1 : p2);
    } else if (c == "Thm33_i" || c == "Thm33_ii") {
      auto [i, ii] = cond_potential_ahlfors(space, p, wt.v, wt.w, *alpha);
      push(c == "Thm33_i" ? i : ii);
    } else if (c == "I1" || c == "J1" || c == "E" || c == "S" || c == "Thm43") {
      const RadialVariant var = c == "I1"   ? RadialVariant::I1
                                : c == "J1" ? RadialVariant::J1
                                : c == "E"  ? RadialVariant::E
                                : c == "S"  ? RadialVariant::S
                                            : RadialVariant::Thm43;
      push(cond_radial(space, p, q, radial_v(), radial_w(), alpha_c, var, a, s.monotone));
    } else if (c == "It1" || c == "It2") {
      auto [i1, i2] = cond_variable_alpha(space, p, q, wt.v, radial_w(), *alpha, s.monotone);
      push(c == "It1" ? i1 : i2);
    } else if (c == "Thm42_i" || c == "Thm42_ii") {
      auto [i, ii] = cond_maximal_singular(space, p, wt.v, wt.w, a);
      push(c == "Thm42_i" ? i : ii);
    } else if (c == "cond_c") {
      const CondCReport cc = cond_c_check(space, wt.v, wt.w, s.A, geom.a1);
      ConditionReport b1, b2;
      b1.name = "cond_c_b1";
      b1.value = cc.b1;
      b1.argmax_t = space.radius(cc.b1_witness);
      b2.name = "cond_c_b2";
      b2.value = cc.b2;
      b2.argmax_t = space.radius(cc.b2_witness);
      push(b1);
      push(b2);
    } else if (c == "Ar") {
      const MuckenhouptReport m = muckenhoupt_Ar(space, wt.w, s.r);
      ConditionReport r;
      r.name = "A_r";
      r.value = m.value;
      r.argmax_t = m.radius;
      r.dropped_terms = m.dropped_terms;
      push(r);
    }
  }

  if (!s.conditions.empty()) {
    PointFunction v_out = wt.v, w_in = wt.w;
    PointFunction q_eff = q;
    OperatorFn op;
    const std::size_t n = space.size();
    switch (s.op) {
      case OperatorTag::identity:
        op = [](const PointFunction& f) { return f; };
        q_eff = p;
        break;
      case OperatorTag::hardy:
        op = [&, v = wt.v, w = wt.w](const PointFunction& f) { return hardy_T(space, v, w, f).values; };
        v_out = w_in = PointFunction::constant(n, 1.0, FunctionKind::weight);
        break;
      case OperatorTag::hardy_prime:
        op = [&, v = wt.v, w = wt.w](const PointFunction& f) {
          return hardy_T_prime(space, v, w, f).values;
        };
        v_out = w_in = PointFunction::constant(n, 1.0, FunctionKind::weight);
        break;
      case OperatorTag::maximal:
        op = [&](const PointFunction& f) { return maximal_M(space, f).values; };
        q_eff = p;
        break;
      // The probes reuse one kernel matrix instead of re-sorting every
      // shell per application.
      case OperatorTag::potential_T:
        op = [m = potential_T_matrix(space, *alpha)](const PointFunction& f) { return apply(m, f); };
        break;
      case OperatorTag::potential_I:
        op = [m = potential_I_matrix(space, *alpha)](const PointFunction& f) { return apply(m, f); };
        break;
      case OperatorTag::singular: {
        KernelSpec k = space.coords() ? KernelSpec::hilbert(space) : KernelSpec::power_dist(space, -1.0);
        const double eps = space.coords() ? 0.5 * min_spacing(space) : 0.0;
        op = [&, k, eps](const PointFunction& f) { return singular_K(space, k, f, eps).values; };
        q_eff = p;
        break;
      }
    }
    inst.ratio = empirical_ratio(space, op, p, q_eff, v_out, w_in, s.trials, s.seed);
  }
  return inst;
}

}  // namespace

RunResult run_scenario(const Scenario& s) {
  validate_scenario(s);
  RunResult out;
  out.scenario = s;
  const bool refines = s.space.generator == SpaceSpec::Generator::grid && s.resolutions.size() >= 3 &&
                       !s.conditions.empty();
  if (refines) {
    StudyReport study = refinement_study([&](std::size_t n) { return evaluate_once(s, n); },
                                         s.resolutions);
    out.conditions = study.final_conditions;
    if (!study.geometry.empty()) out.geometry = study.geometry.back();
    if (!study.ratios.empty()) {
      NormEstimate est;
      est.ratio = study.ratios.back();
      est.history = study.ratios;
      est.trials = s.trials;
      out.ratio = est;
    }
    out.study = std::move(study);
  } else {
    StudyInstance inst = evaluate_once(s, s.resolutions.back());
    out.conditions = std::move(inst.conditions);
    out.geometry = inst.geometry;
    out.ratio = std::move(inst.ratio);
  }
  return out;
}

}  // namespace varlp

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "varlp/conditions.hpp"
#include "varlp/verifier.hpp"

namespace varlp {

/// Invalid or inconsistent scenario content; `field` names the offending key.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A point function given either as a radial expression or an explicit list.
struct FunctionSpec {
  std::variant<RadialProfile, std::vector<double>> expr;
  FunctionKind kind = FunctionKind::test;

  bool is_radial() const { return std::holds_alternative<RadialProfile>(expr); }
  PointFunction on(const DiscreteSpace& space) const;
  bool operator==(const FunctionSpec&) const = default;
};

struct SpaceSpec {
  enum class Generator { grid, cantor, explicit_points };
  Generator generator = Generator::grid;
  int cantor_depth = 8;
  double dist_power = 1.0;
  // explicit spaces
  std::vector<double> coords;  // metric "euclidean1d"
  std::vector<double> dist;    // metric "explicit", row-major
  std::vector<double> mu;      // empty: lebesgue-grid weights
  std::size_t x0 = 0;
  std::optional<double> L;          // nullopt: computed diameter; inf: infinite model
  bool infinite = false;
  std::optional<double> trunc_radius;
  bool operator==(const SpaceSpec&) const = default;
};

enum class OperatorTag { identity, hardy, hardy_prime, maximal, potential_T, potential_I, singular };
std::string_view to_string(OperatorTag t);

struct ExampleSpec {
  ExampleVariant variant = ExampleVariant::ex38;
  ExampleParams params;
  bool operator==(const ExampleSpec&) const = default;
};

struct Scenario {
  std::string name;
  SpaceSpec space;
  FunctionSpec p;
  std::optional<FunctionSpec> q;  // nullopt: q = p/(1 - alpha p)
  std::optional<FunctionSpec> alpha;
  std::optional<FunctionSpec> v;  // replaced by the example profiles when present
  std::optional<FunctionSpec> w;
  std::optional<ExampleSpec> example;
  OperatorTag op = OperatorTag::identity;
  std::vector<std::string> conditions;
  std::vector<std::size_t> resolutions{64, 256, 1024};
  unsigned long long seed = 0;
  double A = 2.0;
  double r = 2.0;  // Muckenhoupt exponent
  std::optional<double> a;  // tail radius for local exponents
  std::size_t trials = 8;
  MonotoneCheck monotone = MonotoneCheck::enforce;
  bool operator==(const Scenario&) const = default;
};

/// Parses, fills defaults and validates. Throws ScenarioError on any problem
/// (parse errors carry line and column).
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text);
/// Canonical JSON text of a scenario; parse_scenario inverts it.
std::string scenario_to_json(const Scenario& s);

/// Operator/condition compatibility and cross-reference checks.
void validate_scenario(const Scenario& s);

/// The space at one resolution (grid cells or ignored for fixed spaces).
DiscreteSpace build_space(const SpaceSpec& spec, std::size_t resolution);

struct RunResult {
  Scenario scenario;
  std::optional<GeometryReport> geometry;
  std::vector<ConditionReport> conditions;  // finest resolution
  std::optional<StudyReport> study;
  std::optional<NormEstimate> ratio;  // finest resolution
};

/// Evaluates every condition at every resolution and estimates the operator
/// ratio; fixed (explicit) spaces are evaluated once.
RunResult run_scenario(const Scenario& s);

}  // namespace varlp

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "varlp/report.hpp"
#include "varlp/scenario.hpp"

using namespace varlp;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = VARLP_SCENARIO_DIR;

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("minimal scenario gets defaults") {
  auto s = parse_scenario(R"({"space": {"generator": "grid"}, "p": 2, "v": 1, "w": 1})");
  CHECK(s.op == OperatorTag::identity);
  CHECK(s.conditions.empty());
  CHECK(s.resolutions == std::vector<std::size_t>{64, 256, 1024});
  CHECK(s.seed == 0);
  CHECK(s.A == 2.0);
  CHECK(s.monotone == MonotoneCheck::enforce);
  REQUIRE(s.q);
  CHECK(*s.q == s.p);
}

TEST_CASE("scenario errors name the offending field") {
  SUBCASE("missing weight") {
    auto msg = error_of(R"({"space": {"generator": "grid"}, "p": 2, "v": 1, "operator": "hardy",
                           "conditions": ["A1"]})");
    CHECK(contains(msg, "w"));
  }
  SUBCASE("incompatible operator and condition") {
    auto msg = error_of(R"({"space": {"generator": "grid"}, "p": 2, "v": 1, "w": 1,
                           "operator": "hardy", "conditions": ["P1"]})");
    CHECK(contains(msg, "P1"));
    CHECK(contains(msg, "hardy"));
  }
  SUBCASE("unknown condition") {
    CHECK(contains(error_of(R"({"space": {"generator": "grid"}, "p": 2, "v": 1, "w": 1,
                                "conditions": ["Z9"]})"),
                   "Z9"));
  }
  SUBCASE("unknown key") {
    CHECK(contains(error_of(R"({"space": {"generator": "grid"}, "p": 2, "v": 1, "w": 1, "colour": 3})"),
                   "colour"));
  }
  SUBCASE("bad resolutions") {
    for (const char* r : {"[]", "[64, 256]", "[256, 64, 1024]", "[1, 4, 16]"}) {
      std::string text = std::string(R"({"space": {"generator": "grid"}, "p": 2, "v": 1, "w": 1, "resolutions": )") +
                         r + "}";
      CHECK(contains(error_of(text), "resolutions"));
    }
  }
  SUBCASE("malformed JSON reports line and column") {
    auto msg = error_of("{\n  \"p\": 2,\n  \"v\": ]\n}");
    CHECK(contains(msg, "line 3"));
    CHECK(contains(msg, "column"));
  }
  SUBCASE("explicit values of the wrong length") {
    auto s = parse_scenario(R"({"space": {"generator": "grid"}, "p": 2, "v": {"expr": "explicit",
                                "values": [1, 2, 3]}, "w": 1})");
    CHECK_THROWS_AS(s.v->on(DiscreteSpace::uniform_grid(8)), ScenarioError);
  }
  SUBCASE("inadmissible example") {
    CHECK_THROWS_AS(load_scenario(kScenarios / "ex38_bad_beta.json"), PreconditionError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_scenario(kScenarios / "no_such.json"), ScenarioError); }
}

TEST_CASE("golden scenarios parse and round-trip") {
  auto ex44 = load_scenario(kScenarios / "ex44.json");
  CHECK(ex44.op == OperatorTag::maximal);
  CHECK(ex44.conditions == std::vector<std::string>{"S"});
  CHECK(ex44.monotone == MonotoneCheck::warn);
  REQUIRE(ex44.example);
  CHECK(ex44.example->variant == ExampleVariant::ex44);
  CHECK(ex44.example->params.p_conj_at_x0 == 2.0);

  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().filename() == "ex38_bad_beta.json") continue;
    CAPTURE(entry.path().string());
    auto s = load_scenario(entry.path());
    auto text = scenario_to_json(s);
    CHECK(parse_scenario(text) == s);
    CHECK(scenario_to_json(parse_scenario(text)) == text);
  }
}

TEST_CASE("space construction from scenarios") {
  auto grid = parse_scenario(R"({"space": {"generator": "grid", "dist_power": 2}, "p": 2, "v": 1, "w": 1})");
  auto s = build_space(grid.space, 16);
  CHECK(s.size() == 17);
  CHECK(s.dist(0, 16) == doctest::Approx(1.0));
  CHECK(s.dist(0, 8) == doctest::Approx(0.25));

  auto expl = parse_scenario(R"({"space": {"points": [{"id": "a", "coord": 0}, {"id": "b", "coord": 1},
                                 {"id": "c", "coord": 3}], "metric": "euclidean1d", "x0": "b"},
                                 "p": 2, "v": 1, "w": 1})");
  auto e = build_space(expl.space, 1000);
  CHECK(e.size() == 3);
  CHECK(e.basepoint() == 1);
  CHECK(e.total_measure() == doctest::Approx(3.0));

  auto cantor = parse_scenario(R"({"space": {"generator": "cantor", "depth": 3}, "p": 2, "v": 1, "w": 1})");
  CHECK(build_space(cantor.space, 64).size() == 8);
}

TEST_CASE("reports are deterministic and complete") {
  auto sc = load_scenario(kScenarios / "identity.json");
  auto a = run_scenario(sc), b = run_scenario(sc);
  CHECK(report_json(a) == report_json(b));
  REQUIRE(a.study);
  CHECK(a.study->ratios.size() == sc.resolutions.size());
  REQUIRE(a.ratio);
  CHECK(a.ratio->ratio == doctest::Approx(1.0).epsilon(1e-9));

  auto csv = study_csv(*a.study);
  CHECK(csv.rfind("resolution,metric,value\n", 0) == 0);
  std::size_t metrics = a.study->condition_values.size() + (a.study->ratios.empty() ? 0 : 1);
  CHECK(line_count(csv) == 1 + metrics * sc.resolutions.size());
  for (const auto& c : a.conditions) {
    auto curve = curve_csv(c);
    CHECK(curve.rfind("t,value\n", 0) == 0);
    CHECK(line_count(curve) == 1 + c.curve.size());
  }

  auto json = report_json(a);
  CHECK(contains(json, "\"meta\""));
  CHECK(contains(json, "\"study\""));
  CHECK(contains(json, "\"A_r\""));
}

TEST_CASE("a scenario without conditions reports geometry only") {
  auto sc = load_scenario(kScenarios / "geometry_only.json");
  auto r = run_scenario(sc);
  CHECK(r.geometry);
  CHECK(r.conditions.empty());
  CHECK_FALSE(r.study);
  CHECK_FALSE(r.ratio);
  CHECK(contains(report_json(r), "\"geometry\""));
}

TEST_CASE("emitting reports") {
  auto sc = load_scenario(kScenarios / "identity.json");
  auto r = run_scenario(sc);
  const fs::path dir = fs::temp_directory_path() / "varlp_report_test";
  fs::remove_all(dir);
  auto paths = emit_report(r, dir / "nested", ReportFormat::both);
  CHECK(paths.size() >= 2);
  for (const auto& p : paths) CHECK(fs::exists(p));
  CHECK(slurp(dir / "nested" / "report.json") == report_json(r));
  auto json_only = emit_report(r, dir / "json", ReportFormat::json);
  CHECK(json_only.size() == 1);
  fs::remove_all(dir);

  // A regular file where the directory should go.
  const fs::path blocker = fs::temp_directory_path() / "varlp_report_blocker";
  std::ofstream(blocker) << "x";
  CHECK_THROWS_AS(emit_report(r, blocker / "out", ReportFormat::json), std::runtime_error);
  fs::remove(blocker);
}

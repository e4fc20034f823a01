#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "varlp/space.hpp"

using namespace varlp;

namespace {

std::vector<double> coords_of(const DiscreteSpace& s, const PointSet& ids) {
  std::vector<double> out;
  for (auto id : ids) out.push_back((*s.coords())[id]);
  std::sort(out.begin(), out.end());
  return out;
}

DiscreteSpace random_line(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::set<double> pts;
  while (pts.size() < n) pts.insert(u(rng));
  std::vector<double> c(pts.begin(), pts.end()), mu;
  for (std::size_t i = 0; i < n; ++i) mu.push_back(0.1 + u(rng));
  return DiscreteSpace(c, mu, 0);
}

}  // namespace

TEST_CASE("construction rejects non-positive masses and coincident points") {
  CHECK_THROWS_AS(DiscreteSpace({0.0, 1.0}, {1.0, 0.0}, 0), PreconditionError);
  CHECK_THROWS_AS(DiscreteSpace({0.0, 0.5, 0.5}, {1.0, 1.0, 1.0}, 0), PreconditionError);
  CHECK_THROWS_AS(DiscreteSpace(2, {0.0, 1.0, 1.0, 1.0}, {1.0, 1.0}, 0), PreconditionError);
}

TEST_CASE("uniform grid uses trapezoid weights of total one") {
  auto s = DiscreteSpace::uniform_grid(8);
  CHECK(s.size() == 9);
  CHECK(s.mu(0) == doctest::Approx(1.0 / 16));
  CHECK(s.mu(4) == doctest::Approx(1.0 / 8));
  CHECK(s.total_measure() == doctest::Approx(1.0));
  CHECK(s.diameter() == doctest::Approx(1.0));
}

TEST_CASE("ball edge cases") {
  auto s = DiscreteSpace::uniform_grid(1024);
  SUBCASE("open ball of radius zero is empty") {
    auto b = ball(s, 3, 0.0);
    CHECK(b.members.empty());
    CHECK(b.measure == 0.0);
  }
  SUBCASE("closed ball of radius zero is the center") {
    auto b = ball(s, 3, 0.0, true);
    CHECK(b.members == PointSet{3});
  }
  SUBCASE("a radius beyond the diameter gives the whole space") {
    auto b = ball(s, 17, 5.0);
    CHECK(b.members.size() == s.size());
    CHECK(b.measure == doctest::Approx(s.total_measure()));
  }
  SUBCASE("half ball at the origin") {
    CHECK(std::abs(ball(s, 0, 0.5).measure - 0.5) <= 1.0 / 1024);
  }
  SUBCASE("invalid center") { CHECK_THROWS(ball(s, s.size(), 0.1)); }
}

TEST_CASE("balls grow with the radius") {
  auto s = random_line(60, 7);
  for (PointId c : {PointId{0}, PointId{31}, PointId{59}}) {
    double prev = 0.0;
    PointSet prev_members;
    for (double r = 0.0; r < 1.2; r += 0.013) {
      auto b = ball(s, c, r);
      CHECK(b.measure >= prev);
      CHECK(std::includes(b.members.begin(), b.members.end(), prev_members.begin(),
                          prev_members.end()));
      prev = b.measure;
      prev_members = b.members;
    }
  }
}

TEST_CASE("shell sums match direct ball measures") {
  auto s = random_line(40, 3);
  auto sh = shells_around(s, 5);
  for (std::size_t k = 0; k < sh.shell_count(); ++k) {
    CHECK(sh.open_measure(k) == doctest::Approx(ball(s, 5, sh.radii[k]).measure));
    CHECK(sh.closed_measure[k] == doctest::Approx(ball(s, 5, sh.radii[k], true).measure));
  }
}

TEST_CASE("quasi-triangle constants") {
  SUBCASE("euclidean grid") {
    auto q = quasi_constants(DiscreteSpace::uniform_grid(64));
    CHECK(q.a0 == doctest::Approx(1.0));
    CHECK(q.a1 == doctest::Approx(1.0));
    CHECK_FALSE(q.sampled);
  }
  SUBCASE("squared distance is tight at the midpoint") {
    auto q = quasi_constants(DiscreteSpace::uniform_grid(64, 2.0));
    CHECK(q.a1 == doctest::Approx(2.0));
  }
  SUBCASE("asymmetric pair") {
    DiscreteSpace s(2, {0.0, 2.0, 1.0, 0.0}, {0.5, 0.5}, 0);
    CHECK(quasi_constants(s).a0 == doctest::Approx(2.0));
  }
  SUBCASE("large spaces are sampled deterministically") {
    auto s = DiscreteSpace::uniform_grid(600, 2.0);
    auto q1 = quasi_constants(s, 11), q2 = quasi_constants(s, 11);
    CHECK(q1.sampled);
    CHECK(q1.a1 == q2.a1);
    CHECK(q1.a1 <= 2.0 + 1e-12);
    CHECK(q1.a1 > 1.9);
  }
  SUBCASE("any metric input reports a0 = 1 and a1 <= 1") {
    for (unsigned seed = 0; seed < 5; ++seed) {
      auto q = quasi_constants(random_line(50, seed));
      CHECK(q.a0 == doctest::Approx(1.0));
      CHECK(q.a1 <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("doubling and reverse doubling on the unit grid") {
  auto s = DiscreteSpace::uniform_grid(256);
  auto d = doubling_reverse_doubling(s, 2.0);
  CHECK(std::abs(d.doubling_c - 2.0) <= 0.05);
  CHECK(d.rdc_B > 1.0);
  CHECK(d.swept > 0);
  DiscreteSpace single({0.0}, {1.0}, 0);
  CHECK_THROWS_AS(doubling_reverse_doubling(single, 2.0), std::domain_error);
}

TEST_CASE("Ahlfors regularity constants") {
  SUBCASE("unit grid, exponent one") {
    auto a = ahlfors_regularity(DiscreteSpace::uniform_grid(512), 1.0);
    CHECK(std::abs(a.c1 - 2.0) <= 0.02);
    CHECK(std::abs(a.c2 - 1.0) <= 0.02);
  }
  SUBCASE("two points report diagnostics without failing") {
    DiscreteSpace s({0.0, 1.0}, {0.5, 0.5}, 0);
    AhlforsReport a;
    CHECK_NOTHROW(a = ahlfors_regularity(s, 1.0));
    CHECK_FALSE(a.diagnostics.empty());
  }
  SUBCASE("Cantor measure at its dimension") {
    auto a = ahlfors_regularity(DiscreteSpace::cantor(8), std::log(2.0) / std::log(3.0));
    CHECK(a.c1 >= 0.3);
    CHECK(a.c1 <= 4.0);
    CHECK(a.c2 >= 0.3);
    CHECK(a.c2 <= 4.0);
  }
}

TEST_CASE("geometry report on the unit grid") {
  auto g = geometry_constants(DiscreteSpace::uniform_grid(128));
  CHECK(g.a0 == doctest::Approx(1.0));
  CHECK(g.a1 == doctest::Approx(1.0));
  CHECK(g.doubling_c >= 1.0);
  CHECK(g.annuli_nonempty);
}

TEST_CASE("partition sets at scale -1") {
  auto s = DiscreteSpace::uniform_grid(1024);
  auto ps = partition_sets(s, 2.0, -1, 1.0);
  auto annulus = coords_of(s, ps.annulus);
  CHECK(annulus.front() == doctest::Approx(0.5));
  CHECK(annulus.back() == doctest::Approx(1.0));
  CHECK(annulus.size() == 513);
  auto inner = coords_of(s, ps.inner);
  CHECK(inner.front() == 0.0);
  CHECK(inner.back() < 0.25);
  CHECK(inner.size() == 256);
  double mu_e = 0;
  for (auto y : ps.annulus) mu_e += s.mu(y);
  CHECK(mu_e == doctest::Approx(0.5).epsilon(2.0 / 1024));
  CHECK(mu_e / ball(s, 0, 0.5).measure == doctest::Approx(1.0).epsilon(4.0 / 1024));
}

TEST_CASE("partition sets cover the space at every scale") {
  auto s = DiscreteSpace::uniform_grid(1024);
  for (int k = -12; k <= 1; ++k) {
    auto ps = partition_sets(s, 2.0, k, 1.0);
    std::set<PointId> all(ps.inner.begin(), ps.inner.end());
    all.insert(ps.middle.begin(), ps.middle.end());
    all.insert(ps.outer.begin(), ps.outer.end());
    CHECK(all.size() == s.size());
  }
}

TEST_CASE("annuli are disjoint across scales and cover the punctured space") {
  // With A = 2 consecutive annuli share the dyadic spheres, which carry grid
  // points; A = 3 keeps every sphere below r = 1 off the grid.
  auto s = DiscreteSpace::uniform_grid(1024);
  std::set<PointId> seen;
  for (int k = -1; k >= -8; --k) {
    for (auto y : partition_sets(s, 3.0, k, 1.0).annulus) CHECK(seen.insert(y).second);
  }
  CHECK(seen.size() == s.size() - 1);
  CHECK_FALSE(seen.count(s.basepoint()));
}

TEST_CASE("annulus-to-ball ratios stay in a fixed window") {
  auto s = DiscreteSpace::uniform_grid(1024);
  auto ratios = annulus_ball_ratios(s, 2.0);
  REQUIRE(ratios.size() >= 8);
  double c = 1.0;
  for (const auto& r : ratios) c = std::max({c, r.ratio, 1.0 / r.ratio});
  CHECK(c <= 2.0);
}

TEST_CASE("set F around a point") {
  auto s = DiscreteSpace::uniform_grid(1000);
  auto f = set_F(s, 100, 2.0, 1.0);
  auto c = coords_of(s, f.members);
  CHECK(c.front() == doctest::Approx(0.025));
  CHECK(c.back() == doctest::Approx(0.4));
  CHECK_FALSE(f.degenerate);
  CHECK(set_F(s, 0, 2.0, 1.0).degenerate);
  for (PointId x = 1; x < s.size(); x += 37) {
    auto m = set_F(s, x, 2.0, 1.0).members;
    CHECK(std::find(m.begin(), m.end(), x) != m.end());
  }
}

TEST_CASE("tail power integral follows the continuum bound") {
  // Continuum: the tail integral of y^-1.5 over (r,1] is 2(r^-1/2 - 1), and
  // |(b+1)/b| r^(b+1) = r^-1/2 / 3, so the ratio is 6(1 - sqrt r).
  auto s = DiscreteSpace::uniform_grid(1024);
  for (int k = 1; k <= 8; ++k) {
    const double r = std::ldexp(1.0, -k);
    const double bound_unit = (1.0 / 3.0) * std::pow(ball(s, 0, r).measure, -0.5);
    const double ratio = tail_power_integral(s, -1.5, r) / bound_unit;
    CHECK(ratio == doctest::Approx(6.0 * (1.0 - std::sqrt(r))).epsilon(0.1));
  }
}

#include <cmath>
#include <random>

#include "doctest.h"
#include "varlp/norms.hpp"
#include "varlp/operators.hpp"

using namespace varlp;

namespace {

PointFunction ones(const DiscreteSpace& s, double c = 1.0) {
  return PointFunction::constant(s.size(), c, FunctionKind::weight);
}

PointFunction random_field(const DiscreteSpace& s, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(s.size());
  for (auto& x : v) x = u(rng);
  return PointFunction(v);
}

PointFunction combo(double a, const PointFunction& f, double b, const PointFunction& g) {
  PointFunction out = f;
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = a * f[i] + b * g[i];
  return out;
}

bool all_zero(const PointFunction& f) {
  for (double v : f.values)
    if (v != 0.0) return false;
  return true;
}

double coord(const DiscreteSpace& s, PointId i) { return (*s.coords())[i]; }

}  // namespace

TEST_CASE("zero input gives zero output") {
  auto s = DiscreteSpace::uniform_grid(64);
  auto zero = PointFunction::constant(s.size(), 0.0);
  auto half = PointFunction::constant(s.size(), 0.5);
  CHECK(all_zero(hardy_T(s, ones(s), ones(s), zero).values));
  CHECK(all_zero(hardy_T_prime(s, ones(s), ones(s), zero).values));
  CHECK(all_zero(maximal_M(s, zero).values));
  CHECK(all_zero(potential_T_alpha(s, half, zero).values));
  CHECK(all_zero(potential_I_alpha(s, half, zero).values));
  CHECK(all_zero(singular_K(s, KernelSpec::hilbert(s), zero, 1e-3).values));
}

TEST_CASE("Hardy transforms of the constant function") {
  const std::size_t n = 512;
  auto s = DiscreteSpace::uniform_grid(n);
  auto f = ones(s);
  auto t = hardy_T(s, ones(s), ones(s), f).values;
  auto tp = hardy_T_prime(s, ones(s), ones(s), f).values;
  CHECK(t[s.basepoint()] == 0.0);
  for (PointId x = 0; x < s.size(); ++x) {
    CHECK(std::abs(t[x] - coord(s, x)) <= 1.0 / n);
    CHECK(std::abs(tp[x] - (1.0 - coord(s, x))) <= 1.0 / n);
  }
}

TEST_CASE("head, tail and shell terms partition the full integral") {
  std::mt19937_64 rng(3);
  auto s = DiscreteSpace::uniform_grid(300);
  auto v = random_field(s, rng, 0.5, 2.0), w = random_field(s, rng, 0.5, 2.0);
  auto f = random_field(s, rng, -1.0, 1.0);
  auto t = hardy_T(s, v, w, f).values, tp = hardy_T_prime(s, v, w, f).values;
  double total = 0;
  for (PointId y = 0; y < s.size(); ++y) total += f[y] * w[y] * s.mu(y);
  for (PointId x = 0; x < s.size(); ++x) {
    double shell = 0;
    for (PointId y = 0; y < s.size(); ++y)
      if (s.radius(y) == s.radius(x)) shell += f[y] * w[y] * s.mu(y);
    CHECK(t[x] + tp[x] + v[x] * shell == doctest::Approx(v[x] * total).epsilon(1e-12));
  }
}

TEST_CASE("maximal function") {
  const std::size_t n = 512;
  auto s = DiscreteSpace::uniform_grid(n);
  SUBCASE("constants are fixed") {
    auto m = maximal_M(s, PointFunction::constant(s.size(), -3.0)).values;
    for (double v : m.values) CHECK(v == doctest::Approx(3.0));
  }
  SUBCASE("indicator of the left half seen from the right end") {
    auto f = PointFunction::radial(s, [](double r) { return r <= 0.5 ? 1.0 : 0.0; });
    auto m = maximal_M(s, f).values;
    CHECK(std::abs(m[n] - 0.5) <= 2.0 / n);
  }
  SUBCASE("dominates every centered ball average, sublinear, homogeneous") {
    std::mt19937_64 rng(4);
    auto f = random_field(s, rng, -1.0, 1.0), g = random_field(s, rng, -1.0, 1.0);
    auto mf = maximal_M(s, f).values, mg = maximal_M(s, g).values;
    auto msum = maximal_M(s, combo(1, f, 1, g)).values;
    auto mscaled = maximal_M(s, combo(-2.5, f, 0, g)).values;
    for (PointId x = 0; x < s.size(); x += 17) {
      for (double r : {0.001, 0.01, 0.1, 0.3, 1.5}) {
        auto b = ball(s, x, r);
        if (b.measure == 0) continue;
        double avg = 0;
        for (auto y : b.members) avg += std::abs(f[y]) * s.mu(y);
        CHECK(mf[x] >= avg / b.measure * (1 - 1e-12));
      }
      CHECK(msum[x] <= mf[x] + mg[x] + 1e-12);
      CHECK(mscaled[x] == doctest::Approx(2.5 * mf[x]));
    }
  }
}

TEST_CASE("potentials of the constant function at the basepoint") {
  auto s = DiscreteSpace::uniform_grid(1024);
  auto half = PointFunction::constant(s.size(), 0.5);
  auto f = ones(s);
  CHECK(potential_T_alpha(s, half, f).values[0] == doctest::Approx(2.0).epsilon(0.03));
  CHECK(potential_I_alpha(s, half, f).values[0] == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("potential operators are positive and monotone; I is dominated by T") {
  std::mt19937_64 rng(6);
  auto s = DiscreteSpace::uniform_grid(256);
  auto alpha = random_field(s, rng, 0.2, 0.8);
  auto g = random_field(s, rng, 0.0, 1.0);
  auto f = g;
  for (auto& v : f.values) v += 0.3;
  const double c1 = ahlfors_regularity(s, 1.0).c1;
  auto tf = potential_T_alpha(s, alpha, f).values, tg = potential_T_alpha(s, alpha, g).values;
  auto i_f = potential_I_alpha(s, alpha, f).values;
  for (PointId x = 0; x < s.size(); ++x) {
    CHECK(tg[x] >= 0.0);
    CHECK(tf[x] >= tg[x]);
    CHECK(i_f[x] <= tf[x] * std::pow(c1, 1 - alpha[x]) * (1 + 1e-12));
  }
}

TEST_CASE("linear operators are linear") {
  std::mt19937_64 rng(10);
  auto s = DiscreteSpace::uniform_grid(128);
  auto v = random_field(s, rng, 0.5, 2.0), w = random_field(s, rng, 0.5, 2.0);
  auto alpha = random_field(s, rng, 0.2, 0.8);
  auto f = random_field(s, rng, -1.0, 1.0), g = random_field(s, rng, -1.0, 1.0);
  auto h = combo(2.0, f, -0.7, g);
  auto kernel = KernelSpec::hilbert(s);
  using Op = std::function<PointFunction(const PointFunction&)>;
  std::vector<Op> ops = {
      [&](const PointFunction& u) { return hardy_T(s, v, w, u).values; },
      [&](const PointFunction& u) { return hardy_T_prime(s, v, w, u).values; },
      [&](const PointFunction& u) { return potential_T_alpha(s, alpha, u).values; },
      [&](const PointFunction& u) { return potential_I_alpha(s, alpha, u).values; },
      [&](const PointFunction& u) { return singular_K(s, kernel, u, 0.01).values; },
  };
  for (const auto& op : ops) {
    auto of = op(f), og = op(g), oh = op(h);
    double scale = 0;
    for (std::size_t i = 0; i < oh.size(); ++i) scale = std::max(scale, std::abs(oh[i]));
    for (std::size_t i = 0; i < oh.size(); ++i)
      CHECK(std::abs(oh[i] - (2.0 * of[i] - 0.7 * og[i])) <= 1e-9 * std::max(scale, 1.0));
  }
}

TEST_CASE("dense matrices reproduce the operators") {
  std::mt19937_64 rng(12);
  auto s = DiscreteSpace::uniform_grid(100);
  auto v = random_field(s, rng, 0.5, 2.0), w = random_field(s, rng, 0.5, 2.0);
  auto alpha = random_field(s, rng, 0.2, 0.8);
  auto f = random_field(s, rng, -1.0, 1.0);
  auto check = [&](const PointFunction& a, const PointFunction& b) {
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
  };
  check(varlp::apply(hardy_matrix(s, v, w), f), hardy_T(s, v, w, f).values);
  check(varlp::apply(hardy_prime_matrix(s, v, w), f), hardy_T_prime(s, v, w, f).values);
  check(varlp::apply(potential_T_matrix(s, alpha), f), potential_T_alpha(s, alpha, f).values);
  check(varlp::apply(potential_I_matrix(s, alpha), f), potential_I_alpha(s, alpha, f).values);
}

TEST_CASE("a symmetric kernel is self-adjoint in L2(mu)") {
  std::mt19937_64 rng(13);
  auto s = DiscreteSpace::uniform_grid(200);
  auto alpha = PointFunction::constant(s.size(), 0.4);
  auto f = random_field(s, rng, 0.0, 1.0), g = random_field(s, rng, 0.0, 1.0);
  auto i_f = potential_I_alpha(s, alpha, f).values, i_g = potential_I_alpha(s, alpha, g).values;
  double lhs = 0, rhs = 0;
  for (PointId x = 0; x < s.size(); ++x) {
    lhs += g[x] * i_f[x] * s.mu(x);
    rhs += f[x] * i_g[x] * s.mu(x);
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("truncated Hilbert transform of the constant function") {
  const std::size_t n = 1024;
  auto s = DiscreteSpace::uniform_grid(n);
  auto k = KernelSpec::hilbert(s);
  auto f = ones(s);
  const double h = 1.0 / n;
  for (double eps : {h / 2, h, 2 * h}) {
    auto out = singular_K(s, k, f, eps);
    CHECK(out.truncation_eps == eps);
    CHECK(std::abs(out.values[n / 2]) <= 1e-6);
    CHECK(out.values[n / 4] == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-2));
  }
}

TEST_CASE("Calderon-Zygmund constants") {
  auto s = DiscreteSpace::uniform_grid(256);
  SUBCASE("Hilbert kernel size constant") {
    auto c = kernel_cz_check(s, KernelSpec::hilbert(s).with_power_omega(1.0), 2000, 1);
    CHECK(c.size_c <= 2.0 + 2.0 / 256);
    CHECK(c.size_c > 0.9);
    CHECK(std::isfinite(c.smooth_c));
    CHECK(c.dini_sum == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  }
  SUBCASE("zero kernel") {
    auto c = kernel_cz_check(s, KernelSpec::table(s.size(), std::vector<double>(s.size() * s.size(), 0.0))
                                    .with_power_omega(1.0),
                             500, 2);
    CHECK(c.size_c == 0.0);
    CHECK(c.smooth_c == 0.0);
  }
  SUBCASE("table modulus") {
    auto k = KernelSpec::hilbert(s).with_table_omega({{0.0, 0.0}, {1.0, 1.0}});
    CHECK(k.omega(0.25) == doctest::Approx(0.25));
    CHECK(k.omega(4.0) == doctest::Approx(1.0));
  }
}

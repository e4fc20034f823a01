#include "varlp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

namespace varlp {

namespace {

// 0 * inf = 0: a vanishing factor annihilates a singular one.
double weighted(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; }

void check_sizes(const DiscreteSpace& space, std::initializer_list<const PointFunction*> fs) {
  for (const PointFunction* f : fs)
    if (f->size() != space.size())
      throw std::invalid_argument("point function size differs from space size");
}

// Per basepoint shell: sum of f w mu, dropping non-finite terms.
std::vector<double> shell_masses(const DiscreteSpace& space, const Shells& s,
                                 const PointFunction& w, const PointFunction& f,
                                 std::size_t& skipped) {
  std::vector<double> mass(s.shell_count(), 0.0);
  for (std::size_t k = 0; k < s.shell_count(); ++k)
    for (std::size_t i = s.begin[k]; i < s.begin[k + 1]; ++i) {
      const PointId y = s.order[i];
      const double term = weighted(f[y], w[y]) * space.mu(y);
      if (std::isfinite(term)) {
        mass[k] += term;
      } else {
        ++skipped;
      }
    }
  return mass;
}

OperatorOutput hardy_impl(const DiscreteSpace& space, const PointFunction& v,
                          const PointFunction& w, const PointFunction& f, bool inner) {
  check_sizes(space, {&v, &w, &f});
  OperatorOutput out;
  out.values = PointFunction::constant(space.size(), 0.0);
  const Shells s = shells_around(space, space.basepoint());
  const auto mass = shell_masses(space, s, w, f, out.skipped);
  const std::size_t G = s.shell_count();
  std::vector<double> below(G, 0.0), above(G, 0.0);
  for (std::size_t k = 1; k < G; ++k) below[k] = below[k - 1] + mass[k - 1];
  for (std::size_t k = G - 1; k-- > 0;) above[k] = above[k + 1] + mass[k + 1];
  for (PointId x = 0; x < space.size(); ++x) {
    const std::size_t k = s.shell_of[x];
    out.values[x] = weighted(v[x], inner ? below[k] : above[k]);
  }
  return out;
}

}  // namespace

OperatorOutput hardy_T(const DiscreteSpace& space, const PointFunction& v, const PointFunction& w,
                       const PointFunction& f) {
  return hardy_impl(space, v, w, f, true);
}

OperatorOutput hardy_T_prime(const DiscreteSpace& space, const PointFunction& v,
                             const PointFunction& w, const PointFunction& f) {
  return hardy_impl(space, v, w, f, false);
}

OperatorOutput maximal_M(const DiscreteSpace& space, const PointFunction& f) {
  check_sizes(space, {&f});
  OperatorOutput out;
  out.values = PointFunction::constant(space.size(), 0.0);
  for (PointId x = 0; x < space.size(); ++x) {
    const Shells s = shells_around(space, x);
    double mass = 0.0, best = 0.0;
    for (std::size_t k = 0; k < s.shell_count(); ++k) {
      for (std::size_t i = s.begin[k]; i < s.begin[k + 1]; ++i)
        mass += std::abs(f[s.order[i]]) * space.mu(s.order[i]);
      best = std::max(best, mass / s.closed_measure[k]);
    }
    out.values[x] = best;
  }
  return out;
}

OperatorOutput potential_T_alpha(const DiscreteSpace& space, const PointFunction& alpha,
                                 const PointFunction& f) {
  check_sizes(space, {&alpha, &f});
  OperatorOutput out;
  out.values = PointFunction::constant(space.size(), 0.0);
  for (PointId x = 0; x < space.size(); ++x) {
    const Shells s = shells_around(space, x);
    double sum = 0.0;
    for (std::size_t k = 1; k < s.shell_count(); ++k) {
      const double ball_mu = s.open_measure(k);
      if (!(ball_mu > 0.0)) {
        out.skipped += s.begin[k + 1] - s.begin[k];
        continue;
      }
      double mass = 0.0;
      for (std::size_t i = s.begin[k]; i < s.begin[k + 1]; ++i)
        mass += f[s.order[i]] * space.mu(s.order[i]);
      sum += mass * std::pow(ball_mu, alpha[x] - 1.0);
    }
    out.values[x] = sum;
  }
  return out;
}

OperatorOutput potential_I_alpha(const DiscreteSpace& space, const PointFunction& alpha,
                                 const PointFunction& f) {
  check_sizes(space, {&alpha, &f});
  OperatorOutput out;
  out.values = PointFunction::constant(space.size(), 0.0);
  for (PointId x = 0; x < space.size(); ++x) {
    double sum = 0.0;
    for (PointId y = 0; y < space.size(); ++y)
      if (y != x && f[y] != 0.0)
        sum += f[y] * std::pow(space.dist(x, y), alpha[x] - 1.0) * space.mu(y);
    out.values[x] = sum;
  }
  return out;
}

KernelSpec KernelSpec::hilbert(const DiscreteSpace& space) {
  if (!space.coords()) throw std::invalid_argument("the Hilbert kernel needs coordinates");
  KernelSpec k;
  k.type = "hilbert";
  const std::vector<double> c = *space.coords();
  k.eval = [c](PointId x, PointId y) { return 1.0 / (c[x] - c[y]); };
  return k.with_power_omega(1.0);
}

KernelSpec KernelSpec::power_dist(const DiscreteSpace& space, double exponent) {
  KernelSpec k;
  k.type = "power-dist";
  k.exponent = exponent;
  k.eval = [sp = std::make_shared<const DiscreteSpace>(space), exponent](PointId x, PointId y) {
    return std::pow(sp->dist(x, y), -exponent);
  };
  return k.with_power_omega(1.0);
}

KernelSpec KernelSpec::table(std::size_t n, std::vector<double> values) {
  if (values.size() != n * n) throw std::invalid_argument("kernel table must be n x n");
  KernelSpec k;
  k.type = "explicit-table";
  k.eval = [n, vals = std::move(values)](PointId x, PointId y) { return vals[x * n + y]; };
  return k.with_power_omega(1.0);
}

KernelSpec& KernelSpec::with_power_omega(double a) {
  if (!(a > 0.0)) throw std::domain_error("omega power must be positive");
  omega_type = "power";
  omega_power = a;
  omega = [a](double t) { return std::pow(t, a); };
  return *this;
}

KernelSpec& KernelSpec::with_table_omega(std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw std::invalid_argument("omega table needs knots");
  if (!std::is_sorted(knots.begin(), knots.end()))
    throw std::invalid_argument("omega knots must be sorted by t");
  omega_type = "table";
  omega = [knots = std::move(knots)](double t) {
    if (t <= knots.front().first) return knots.front().second;
    if (t >= knots.back().first) return knots.back().second;
    auto hi = std::upper_bound(knots.begin(), knots.end(), std::make_pair(t, -HUGE_VAL));
    auto lo = std::prev(hi);
    const double u = (t - lo->first) / (hi->first - lo->first);
    return lo->second + u * (hi->second - lo->second);
  };
  return *this;
}

OperatorOutput singular_K(const DiscreteSpace& space, const KernelSpec& kernel,
                          const PointFunction& f, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("truncation eps must be positive");
  check_sizes(space, {&f});
  OperatorOutput out;
  out.values = PointFunction::constant(space.size(), 0.0);
  out.truncation_eps = eps;
  for (PointId x = 0; x < space.size(); ++x) {
    double sum = 0.0;
    for (PointId y = 0; y < space.size(); ++y) {
      if (y == x || f[y] == 0.0 || !(space.dist(x, y) > eps)) continue;
      const double term = kernel.eval(x, y) * f[y] * space.mu(y);
      if (std::isfinite(term)) {
        sum += term;
      } else {
        ++out.skipped;
      }
    }
    out.values[x] = sum;
  }
  return out;
}

KernelConstants kernel_cz_check(const DiscreteSpace& space, const KernelSpec& kernel,
                                std::size_t sample_pairs, unsigned long long seed, double a1) {
  if (sample_pairs == 0) throw std::domain_error("sample_pairs must be >= 1");
  KernelConstants kc;
  for (int j = 1; j <= 40; ++j) {
    const double t = std::ldexp(1.0, -j);
    kc.dini_sum += kernel.omega(t) * std::log(2.0);
    const double base = kernel.omega(t);
    if (base > 0.0) kc.delta2_c = std::max(kc.delta2_c, kernel.omega(2.0 * t) / base);
  }
  const std::size_t n = space.size();
  if (n < 2) return kc;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<PointId> pick(0, n - 1);
  for (std::size_t s = 0; s < sample_pairs; ++s) {
    const PointId x = pick(rng), y = pick(rng);
    if (x == y) continue;
    const double d = space.dist(x, y);
    kc.size_c = std::max(kc.size_c, std::abs(kernel.eval(x, y)) * ball(space, x, d).measure);
  }
  std::vector<PointId> candidates;
  for (std::size_t s = 0; s < sample_pairs; ++s) {
    const PointId x2 = pick(rng), y = pick(rng);
    if (x2 == y) continue;
    const double dy = space.dist(x2, y);
    candidates.clear();
    for (PointId x1 = 0; x1 < n; ++x1)
      if (x1 != x2 && x1 != y && dy >= 2.0 * a1 * space.dist(x1, x2)) candidates.push_back(x1);
    if (candidates.empty()) continue;
    const PointId x1 =
        candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    const double diff = std::abs(kernel.eval(x1, y) - kernel.eval(x2, y)) +
                        std::abs(kernel.eval(y, x1) - kernel.eval(y, x2));
    const double bound = kernel.omega(space.dist(x2, x1) / dy) / ball(space, x2, dy).measure;
    ++kc.smooth_samples;
    if (bound > 0.0) kc.smooth_c = std::max(kc.smooth_c, diff / bound);
  }
  return kc;
}

namespace {

DenseMatrix zeros(std::size_t n) { return DenseMatrix(n, std::vector<double>(n, 0.0)); }

DenseMatrix hardy_matrix_impl(const DiscreteSpace& space, const PointFunction& v,
                              const PointFunction& w, bool inner) {
  check_sizes(space, {&v, &w});
  const Shells s = shells_around(space, space.basepoint());
  DenseMatrix a = zeros(space.size());
  for (PointId x = 0; x < space.size(); ++x)
    for (PointId y = 0; y < space.size(); ++y) {
      const bool take = inner ? s.shell_of[y] < s.shell_of[x] : s.shell_of[y] > s.shell_of[x];
      if (take) a[x][y] = weighted(v[x], w[y]) * space.mu(y);
    }
  return a;
}

}  // namespace

DenseMatrix hardy_matrix(const DiscreteSpace& space, const PointFunction& v,
                         const PointFunction& w) {
  return hardy_matrix_impl(space, v, w, true);
}

DenseMatrix hardy_prime_matrix(const DiscreteSpace& space, const PointFunction& v,
                               const PointFunction& w) {
  return hardy_matrix_impl(space, v, w, false);
}

DenseMatrix potential_T_matrix(const DiscreteSpace& space, const PointFunction& alpha) {
  check_sizes(space, {&alpha});
  DenseMatrix a = zeros(space.size());
  for (PointId x = 0; x < space.size(); ++x) {
    const Shells s = shells_around(space, x);
    for (PointId y = 0; y < space.size(); ++y) {
      const std::size_t k = s.shell_of[y];
      if (k == 0) continue;
      a[x][y] = std::pow(s.open_measure(k), alpha[x] - 1.0) * space.mu(y);
    }
  }
  return a;
}

DenseMatrix potential_I_matrix(const DiscreteSpace& space, const PointFunction& alpha) {
  check_sizes(space, {&alpha});
  DenseMatrix a = zeros(space.size());
  for (PointId x = 0; x < space.size(); ++x)
    for (PointId y = 0; y < space.size(); ++y)
      if (y != x) a[x][y] = std::pow(space.dist(x, y), alpha[x] - 1.0) * space.mu(y);
  return a;
}

PointFunction apply(const DenseMatrix& a, const PointFunction& f) {
  PointFunction out = PointFunction::constant(a.size(), 0.0);
  for (std::size_t x = 0; x < a.size(); ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < a[x].size(); ++y) sum += weighted(a[x][y], f[y]);
    out[x] = sum;
  }
  return out;
}

}  // namespace varlp

#include "varlp/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "varlp/norms.hpp"

namespace varlp {

std::string_view to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::random: return "random";
    case EstimateMethod::power_iteration: return "power-iteration";
    case EstimateMethod::probe: return "probe";
  }
  return "?";
}

std::string_view to_string(ProbeVariant v) {
  switch (v) {
    case ProbeVariant::hardy_A1: return "hardy_A1";
    case ProbeVariant::potential_P1: return "potential_P1";
    case ProbeVariant::potential_P2: return "potential_P2";
    case ProbeVariant::maximal_i: return "maximal_i";
  }
  return "?";
}

namespace {

double finite_or_zero(double x) { return std::isfinite(x) ? x : 0.0; }

double weighted(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; }

PointFunction product(const PointFunction& a, const PointFunction& b) {
  PointFunction out = PointFunction::constant(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = finite_or_zero(weighted(a[i], b[i]));
  return out;
}

std::vector<double> log_spaced_radii(const DiscreteSpace& space, std::size_t count) {
  const Shells s = shells_around(space, space.basepoint());
  std::vector<double> out;
  if (s.shell_count() < 2) return out;
  const double lo = s.radii[1], hi = s.radii.back();
  for (std::size_t i = 0; i < count; ++i) {
    const double u = count == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(lo * std::pow(hi / lo, u));
  }
  return out;
}

double constant_norm(const DiscreteSpace& space, const std::vector<double>& f, double p) {
  double sum = 0.0;
  for (PointId x = 0; x < space.size(); ++x)
    if (f[x] != 0.0) sum += std::pow(std::abs(f[x]), p) * space.mu(x);
  return std::pow(sum, 1.0 / p);
}

}  // namespace

std::vector<std::pair<std::string, PointFunction>> probe_family(const DiscreteSpace& space,
                                                                const PointFunction& p,
                                                                const PointFunction& w,
                                                                std::size_t trials,
                                                                unsigned long long seed) {
  const std::size_t n = space.size();
  std::vector<std::pair<std::string, PointFunction>> probes;
  auto add = [&](std::string label, std::vector<double> vals) {
    for (double& v : vals) v = finite_or_zero(v);
    probes.emplace_back(std::move(label), PointFunction(std::move(vals)));
  };
  const auto radii = log_spaced_radii(space, 24);
  for (double t : radii) {
    std::vector<double> in(n), out(n), w_in(n), w_out(n);
    for (PointId x = 0; x < n; ++x) {
      const bool inside = space.radius(x) <= t;
      const double dual = std::pow(w[x], -p[x] / (p[x] - 1.0));
      in[x] = inside ? 1.0 : 0.0;
      out[x] = inside ? 0.0 : 1.0;
      w_in[x] = inside ? dual : 0.0;
      w_out[x] = inside ? 0.0 : dual;
    }
    const std::string tag = std::to_string(t);
    add("ball(" + tag + ")", std::move(in));
    add("co-ball(" + tag + ")", std::move(out));
    add("dual-ball(" + tag + ")", std::move(w_in));
    add("dual-co-ball(" + tag + ")", std::move(w_out));
  }
  for (int i = -4; i <= 9; ++i) {
    const double s = 0.1 * i;
    std::vector<double> vals(n);
    for (PointId x = 0; x < n; ++x) vals[x] = std::pow(space.radius(x), s);
    add("power(" + std::to_string(s) + ")", std::move(vals));
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<PointId> pick(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double diam = space.diameter();
  const double fine = radii.empty() ? diam : radii.front();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::vector<double> vals(n, 0.0);
    for (int c = 0; c < 3; ++c) {
      const double coef = unit(rng) + 1e-3;
      const int kind = static_cast<int>(unit(rng) * 3.0);
      if (kind == 0) {
        const PointId center = pick(rng);
        const double r = fine * std::pow(diam / fine, unit(rng));
        for (PointId x = 0; x < n; ++x)
          if (space.dist(center, x) <= r) vals[x] += coef;
      } else if (kind == 1) {
        const double s = -0.4 + 1.3 * unit(rng);
        for (PointId x = 0; x < n; ++x) vals[x] += coef * finite_or_zero(std::pow(space.radius(x), s));
      } else {
        const PointId at = pick(rng);
        vals[at] += coef / space.mu(at);
      }
    }
    add("random(" + std::to_string(trial) + ")", std::move(vals));
  }
  return probes;
}

NormEstimate empirical_ratio(const DiscreteSpace& space, const OperatorFn& op,
                             const PointFunction& p, const PointFunction& q,
                             const PointFunction& v, const PointFunction& w, std::size_t trials,
                             unsigned long long seed) {
  if (trials == 0) throw std::domain_error("empirical_ratio needs trials >= 1");
  NormEstimate est;
  est.method = EstimateMethod::probe;
  auto probes = probe_family(space, p, w, trials, seed);
  est.trials = probes.size();
  for (auto& [label, f] : probes) {
    const double denom = luxemburg_norm(space, p, product(w, f)).value;
    if (!(denom > 0.0)) continue;
    const double numer = luxemburg_norm(space, q, product(v, op(f))).value;
    const double ratio = numer / denom;
    if (ratio > est.ratio || est.best_f.size() == 0) {
      est.ratio = ratio;
      est.best_f = f;
      est.best_label = label;
      est.method = label.rfind("random", 0) == 0 ? EstimateMethod::random : EstimateMethod::probe;
    }
  }
  return est;
}

NormEstimate power_iteration_pq(const DiscreteSpace& space, const DenseMatrix& a, double p,
                                double q, int iters) {
  if (!(p > 1.0 && q > 1.0) || !std::isfinite(p) || !std::isfinite(q))
    throw std::domain_error("power iteration needs 1 < p, q < inf");
  const std::size_t n = space.size();
  if (a.size() != n) throw std::invalid_argument("matrix size differs from space size");
  for (const auto& row : a)
    for (double x : row)
      if (!(x >= 0.0)) throw std::domain_error("power iteration needs a nonnegative kernel");

  NormEstimate est;
  est.method = EstimateMethod::power_iteration;
  est.best_label = "power-iteration";
  std::vector<double> f(n, 1.0), tf(n), h(n);
  const double pc = p / (p - 1.0);
  double prev = -1.0;
  est.converged = false;
  for (int it = 0; it < iters; ++it) {
    const double fn = constant_norm(space, f, p);
    for (double& x : f) x /= fn;
    for (std::size_t x = 0; x < n; ++x) {
      double sum = 0.0;
      for (std::size_t y = 0; y < n; ++y) sum += a[x][y] * f[y];
      tf[x] = sum;
    }
    const double ratio = constant_norm(space, tf, q);
    ++est.trials;
    if (ratio > est.ratio) {
      est.ratio = ratio;
      est.best_f = PointFunction(f);
    }
    if (ratio == 0.0 || std::abs(ratio - prev) <= 1e-13 * ratio) {
      est.converged = true;
      break;
    }
    prev = ratio;
    // f <- (T* (Tf)^{q-1})^{p'-1}, T* the adjoint in L^2(mu)
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      const double g = std::pow(tf[x], q - 1.0) * space.mu(x);
      if (g == 0.0) continue;
      for (std::size_t y = 0; y < n; ++y) h[y] += a[x][y] * g;
    }
    for (std::size_t y = 0; y < n; ++y) f[y] = std::pow(h[y] / space.mu(y), pc - 1.0);
    if (constant_norm(space, f, p) == 0.0) break;
  }
  return est;
}

DenseMatrix weighted_matrix(const DenseMatrix& a, const PointFunction& v, const PointFunction& w) {
  DenseMatrix out = a;
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a[x].size(); ++y)
      out[x][y] = finite_or_zero(weighted(v[x], a[x][y]) / w[y]);
  return out;
}

ProbeResult necessity_probe(const DiscreteSpace& space, ProbeVariant variant, double p, double q,
                            const PointFunction& v, const PointFunction& w, double t,
                            double alpha) {
  const std::size_t n = space.size();
  if (v.size() != n || w.size() != n) throw std::invalid_argument("weight size differs from space");
  if (variant == ProbeVariant::maximal_i) q = p;
  const PointId x0 = space.basepoint();
  const double pc = p / (p - 1.0);
  const bool inner_support = variant != ProbeVariant::potential_P2;
  for (PointId x = 0; x < n; ++x) {
    const bool in_support = (space.radius(x) <= t) == inner_support;
    if (x != x0 && in_support && !(w[x] > 0.0))
      throw PreconditionError("w must be positive on the probe support", "x=" + std::to_string(x));
  }

  const auto mb = basepoint_ball_measures(space);
  std::vector<double> f(n, 0.0);
  double inner = 0.0;  // the w-integral entering the condition at t
  for (PointId y = 0; y < n; ++y) {
    if (y == x0) continue;
    const bool inside = space.radius(y) <= t;
    if (inner_support && inside) {
      f[y] = std::pow(w[y], -pc);
      inner += f[y] * space.mu(y);
    } else if (!inner_support && !inside) {
      f[y] = std::pow(w[y], -pc) * std::pow(mb[y], (alpha - 1.0) * (pc - 1.0));
      inner += std::pow(w[y] * std::pow(mb[y], 1.0 - alpha), -pc) * space.mu(y);
    }
    f[y] = finite_or_zero(f[y]);
  }

  double outer = 0.0;
  for (PointId x = 0; x < n; ++x) {
    const bool inside = space.radius(x) <= t;
    double term = 0.0;
    switch (variant) {
      case ProbeVariant::hardy_A1:
        if (!inside) term = std::pow(v[x], q);
        break;
      case ProbeVariant::potential_P1:
        if (!inside) term = std::pow(weighted(v[x], std::pow(mb[x], alpha - 1.0)), q);
        break;
      case ProbeVariant::potential_P2:
        if (inside) term = std::pow(v[x], q);
        break;
      case ProbeVariant::maximal_i:
        if (!inside) term = std::pow(weighted(v[x], 1.0 / mb[x]), p);
        break;
    }
    outer += finite_or_zero(term) * space.mu(x);
  }

  ProbeResult res;
  res.condition_value_at_t = outer == 0.0 ? 0.0 : outer * std::pow(inner, q / pc);

  const PointFunction fp(f);
  PointFunction image;
  switch (variant) {
    case ProbeVariant::hardy_A1:
      image = hardy_T(space, PointFunction::constant(n, 1.0), PointFunction::constant(n, 1.0), fp)
                  .values;
      break;
    case ProbeVariant::potential_P1:
    case ProbeVariant::potential_P2:
      image = potential_T_alpha(space, PointFunction::constant(n, alpha), fp).values;
      break;
    case ProbeVariant::maximal_i:
      image = maximal_M(space, fp).values;
      break;
  }
  std::vector<double> lhs(n), rhs(n);
  for (PointId x = 0; x < n; ++x) {
    lhs[x] = finite_or_zero(weighted(v[x], image[x]));
    rhs[x] = finite_or_zero(weighted(w[x], f[x]));
  }
  const double denom = constant_norm(space, rhs, p);
  res.probe_ratio = denom > 0.0 ? constant_norm(space, lhs, q) / denom : 0.0;
  return res;
}

StudyReport refinement_study(const StudyCase& study, const std::vector<std::size_t>& resolutions) {
  if (resolutions.size() < 3) throw std::invalid_argument("a study needs at least three resolutions");
  if (!std::is_sorted(resolutions.begin(), resolutions.end(), std::less_equal<>()))
    throw std::invalid_argument("resolutions must be strictly increasing");
  StudyReport rep;
  rep.resolutions = resolutions;
  for (std::size_t n : resolutions) {
    StudyInstance inst = study(n);
    for (const auto& c : inst.conditions) {
      rep.condition_values[c.name].push_back(c.value);
    }
    if (inst.ratio) rep.ratios.push_back(inst.ratio->ratio);
    if (inst.geometry) rep.geometry.push_back(*inst.geometry);
    rep.final_conditions = std::move(inst.conditions);
  }
  for (const auto& [name, values] : rep.condition_values)
    rep.condition_trend[name] = classify_trend(values);
  if (!rep.ratios.empty()) rep.ratio_trend = classify_trend(rep.ratios);
  for (auto& c : rep.final_conditions) c.finite_hint = rep.condition_trend[c.name];
  return rep;
}

}  // namespace varlp

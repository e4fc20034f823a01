#include "varlp/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "varlp/norms.hpp"

namespace varlp {

double RadialProfile::operator()(double r) const {
  switch (kind) {
    case Kind::constant: return a;
    case Kind::affine: return a + b * r;
    case Kind::power: return a + b * std::pow(r, gamma);
    case Kind::log_power: return r > 0.0 ? a + b * std::pow(1.0 - std::log(r), -gamma) : a;
    case Kind::power_log:
      return r > 0.0 ? b * std::pow(r, gamma) * std::pow(std::log(scale / r), delta) : 0.0;
  }
  return a;
}

PointFunction RadialProfile::on(const DiscreteSpace& space, FunctionKind k) const {
  return PointFunction::radial(space, *this, k);
}

std::string_view to_string(RadialProfile::Kind k) {
  switch (k) {
    case RadialProfile::Kind::constant: return "const";
    case RadialProfile::Kind::affine: return "affine-in-dist";
    case RadialProfile::Kind::power: return "power-of-dist";
    case RadialProfile::Kind::log_power: return "log-power";
    case RadialProfile::Kind::power_log: return "power-log";
  }
  return "?";
}

std::string_view to_string(RadialVariant v) {
  switch (v) {
    case RadialVariant::I1: return "I1";
    case RadialVariant::J1: return "J1";
    case RadialVariant::E: return "E";
    case RadialVariant::S: return "S";
    case RadialVariant::Thm43: return "Thm43";
  }
  return "?";
}

namespace {

double weighted(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; }

// Power of a nonnegative base with 0^s = 0 for s > 0.
double power_of(double base, double s) { return base == 0.0 && s > 0.0 ? 0.0 : std::pow(base, s); }

}  // namespace

ConditionReport evaluate_functional(const DiscreteSpace& space, const FunctionalSpec& spec) {
  const std::size_t n = space.size();
  if (spec.outer_factor.size() != n || spec.outer_power.size() != n)
    throw std::invalid_argument(spec.name + ": outer arrays must have one entry per point");
  for (const auto& term : spec.inner_terms)
    if (term.base.size() != n || term.coef.size() != n)
      throw std::invalid_argument(spec.name + ": inner arrays must have one entry per point");

  ConditionReport rep;
  rep.name = spec.name;
  rep.resolution = n;
  const Shells s = shells_around(space, space.basepoint());
  const double L = space.diameter() * (1.0 + 1e-12);
  std::size_t G = s.shell_count();
  while (G > 0 && s.radii[G - 1] > L) --G;
  if (G < 2) return rep;
  const std::size_t T = G - 1;  // gap j separates shells j and j+1

  // x grouped by (coefficients, outer power): each group shares one inner integral
  std::map<std::vector<double>, std::vector<PointId>> groups;
  for (std::size_t k = 0; k < G; ++k)
    for (std::size_t i = s.begin[k]; i < s.begin[k + 1]; ++i) {
      const PointId x = s.order[i];
      std::vector<double> key;
      key.reserve(spec.inner_terms.size() + 1);
      for (const auto& term : spec.inner_terms) key.push_back(term.coef[x]);
      key.push_back(spec.outer_power[x]);
      groups[key].push_back(x);
    }

  std::vector<double> curve(T, 0.0);
  std::vector<double> inner_shell(G), outer_shell(G), inner_head(G), outer_head(G);
  for (const auto& [key, members] : groups) {
    std::fill(inner_shell.begin(), inner_shell.end(), 0.0);
    std::fill(outer_shell.begin(), outer_shell.end(), 0.0);
    for (std::size_t k = 0; k < G; ++k)
      for (std::size_t i = s.begin[k]; i < s.begin[k + 1]; ++i) {
        const PointId y = s.order[i];
        double g = space.mu(y);
        for (std::size_t m = 0; m < spec.inner_terms.size(); ++m)
          g = weighted(g, power_of(spec.inner_terms[m].base[y], key[m]));
        if (std::isfinite(g)) {
          inner_shell[k] += g;
        } else {
          ++rep.dropped_terms;
        }
      }
    for (PointId x : members) {
      const double term = weighted(spec.outer_factor[x], space.mu(x));
      if (std::isfinite(term)) {
        outer_shell[s.shell_of[x]] += term;
      } else {
        ++rep.dropped_terms;
      }
    }
    double run_in = 0.0, run_out = 0.0;
    for (std::size_t k = 0; k < G; ++k) {
      run_in += inner_shell[k];
      run_out += outer_shell[k];
      inner_head[k] = run_in;
      outer_head[k] = run_out;
    }
    const double power = key.back();
    for (std::size_t j = 0; j < T; ++j) {
      const double inner = spec.inner == Region::head ? inner_head[j] : run_in - inner_head[j];
      const double outer = spec.outer == Region::head ? outer_head[j] : run_out - outer_head[j];
      curve[j] += weighted(outer, power_of(std::max(inner, 0.0), power));
    }
  }

  const auto gaps = s.gaps();
  rep.curve.reserve(T);
  rep.value = -1.0;
  for (std::size_t j = 0; j < T; ++j) {
    rep.curve.emplace_back(gaps[j], curve[j]);
    if (curve[j] > rep.value || std::isnan(curve[j])) {
      rep.value = curve[j];
      rep.argmax_t = gaps[j];
    }
  }
  return rep;
}

namespace {

void require_nonnegative(const PointFunction& f, const std::string& name) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!(f[i] >= 0.0) || !std::isfinite(f[i]))
      throw PreconditionError(name + " must be nonnegative and finite",
                              name + "[" + std::to_string(i) + "]=" + std::to_string(f[i]));
}

void require_ordered(const PointFunction& lower, const PointFunction& upper,
                     const std::string& what) {
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (lower[i] > upper[i] * (1.0 + 1e-12))
      throw PreconditionError("exponent ordering violated: " + what,
                              "x=" + std::to_string(i));
}

void require_size(const DiscreteSpace& space, const PointFunction& f, const std::string& name) {
  if (f.size() != space.size())
    throw std::invalid_argument(name + " has " + std::to_string(f.size()) + " values for " +
                                std::to_string(space.size()) + " points");
}

std::vector<double> power_each(const PointFunction& base, const PointFunction& e) {
  std::vector<double> out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = power_of(base[i], e[i]);
  return out;
}

std::vector<double> negate(const PointFunction& e, double scale = 1.0) {
  std::vector<double> out(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) out[i] = -scale * e[i];
  return out;
}

std::vector<double> radii(const DiscreteSpace& space) {
  std::vector<double> r(space.size());
  for (PointId x = 0; x < space.size(); ++x) r[x] = space.radius(x);
  return r;
}

// base(x) * m(x)^{e(x)} raised to q(x), with 0 * inf = 0.
std::vector<double> scaled_power(const PointFunction& v, const std::vector<double>& m,
                                 const std::vector<double>& e, const PointFunction& q) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = power_of(weighted(v[i], power_of(m[i], e[i])), q[i]);
  return out;
}

std::vector<double> quotient(const PointFunction& e, const PointFunction& f) {
  std::vector<double> out(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) out[i] = e[i] / f[i];
  return out;
}

PointFunction constant_like(const DiscreteSpace& space, double c) {
  return PointFunction::constant(space.size(), c, FunctionKind::exponent);
}

void check_monotone(const DiscreteSpace& space, const RadialProfile& prof, const std::string& name,
                    MonotoneCheck check, ConditionReport& rep) {
  const Shells s = shells_around(space, space.basepoint());
  for (std::size_t k = 2; k < s.shell_count(); ++k) {
    const double lo = prof(s.radii[k - 1]), hi = prof(s.radii[k]);
    if (hi < lo * (1.0 - 1e-12)) {
      const std::string witness =
          "t=" + std::to_string(s.radii[k - 1]) + ",t'=" + std::to_string(s.radii[k]);
      if (check == MonotoneCheck::enforce)
        throw PreconditionError(name + " profile must be nondecreasing", witness);
      rep.warnings.push_back(name + " profile decreases between " + witness);
      return;
    }
  }
}

double constant_alpha_bound(const PointFunction& p, double alpha) {
  const double p_plus = *std::max_element(p.values.begin(), p.values.end());
  if (!(alpha > 0.0 && alpha * p_plus < 1.0))
    throw PreconditionError("need 0 < alpha < 1/p+", "alpha*p+=" + std::to_string(alpha * p_plus));
  return p_plus;
}

}  // namespace

ConditionReport cond_A1(const DiscreteSpace& space, const PointFunction& p, const PointFunction& q,
                        const PointFunction& v, const PointFunction& w, double a) {
  for (auto [f, name] : {std::pair{&p, "p"}, {&q, "q"}, {&v, "v"}, {&w, "w"}})
    require_size(space, *f, name);
  require_exponent(q, "q");
  require_nonnegative(v, "v");
  require_nonnegative(w, "w");
  const LocalExponents le = local_exponents(space, p, a);
  require_ordered(le.p0_tilde, q, "p0~ <= q");
  const PointFunction e0 = conjugate(le.p0_tilde);
  FunctionalSpec spec{"A1", Region::tail, Region::head, power_each(v, q), quotient(q, e0),
                      {{w.values, e0.values}}};
  return evaluate_functional(space, spec);
}

ConditionReport cond_B1(const DiscreteSpace& space, const PointFunction& p, const PointFunction& q,
                        const PointFunction& v, const PointFunction& w, double a) {
  for (auto [f, name] : {std::pair{&p, "p"}, {&q, "q"}, {&v, "v"}, {&w, "w"}})
    require_size(space, *f, name);
  require_exponent(q, "q");
  require_nonnegative(v, "v");
  require_nonnegative(w, "w");
  const LocalExponents le = local_exponents(space, p, a);
  require_ordered(le.p1_tilde, q, "p1~ <= q");
  const PointFunction e1 = conjugate(le.p1_tilde);
  FunctionalSpec spec{"B1", Region::head, Region::tail, power_each(v, q), quotient(q, e1),
                      {{w.values, e1.values}}};
  return evaluate_functional(space, spec);
}

std::pair<ConditionReport, ConditionReport> cond_potential_P(const DiscreteSpace& space,
                                                             const PointFunction& p,
                                                             const PointFunction& v,
                                                             const PointFunction& w, double alpha,
                                                             double a) {
  for (auto [f, name] : {std::pair{&p, "p"}, {&v, "v"}, {&w, "w"}}) require_size(space, *f, name);
  require_nonnegative(v, "v");
  require_nonnegative(w, "w");
  constant_alpha_bound(p, alpha);
  const PointFunction q = sobolev_q(p, constant_like(space, alpha));
  const LocalExponents le = local_exponents(space, p, a);
  const PointFunction e0 = conjugate(le.p0_tilde), e1 = conjugate(le.p1_tilde);
  const auto mb = basepoint_ball_measures(space);

  FunctionalSpec p1{"P1", Region::tail, Region::head,
                    scaled_power(v, mb, std::vector<double>(space.size(), alpha - 1.0), q),
                    quotient(q, e0), {{w.values, negate(e0)}}};
  FunctionalSpec p2{"P2", Region::head, Region::tail, power_each(v, q), quotient(q, e1),
                    {{w.values, negate(e1)}, {mb, negate(e1, 1.0 - alpha)}}};
  return {evaluate_functional(space, p1), evaluate_functional(space, p2)};
}

std::pair<ConditionReport, ConditionReport> cond_potential_ahlfors(const DiscreteSpace& space,
                                                                   const PointFunction& p,
                                                                   const PointFunction& v,
                                                                   const PointFunction& w,
                                                                   const PointFunction& alpha) {
  for (auto [f, name] : {std::pair{&p, "p"}, {&v, "v"}, {&w, "w"}, {&alpha, "alpha"}})
    require_size(space, *f, name);
  require_nonnegative(v, "v");
  require_nonnegative(w, "w");
  require_order(alpha);
  const PointFunction q = sobolev_q(p, alpha);
  const LocalExponents le = local_exponents(space, p, space.diameter());
  const PointFunction e0 = conjugate(le.p0), e1 = conjugate(le.p1);
  const auto r = radii(space);

  std::vector<double> kernel_exp(space.size()), w_scaled(space.size());
  for (PointId x = 0; x < space.size(); ++x) {
    kernel_exp[x] = alpha[x] - 1.0;
    w_scaled[x] = weighted(w[x], power_of(r[x], 1.0 - alpha[x]));
  }
  FunctionalSpec i{"Thm33_i", Region::tail, Region::head, scaled_power(v, r, kernel_exp, q),
                   quotient(q, e0), {{w.values, negate(e0)}}};
  FunctionalSpec ii{"Thm33_ii", Region::head, Region::tail, power_each(v, q), quotient(q, e1),
                    {{w_scaled, negate(e1)}}};
  auto out = std::pair{evaluate_functional(space, i), evaluate_functional(space, ii)};
  const AhlforsReport ar = ahlfors_regularity(space, 1.0);
  const std::string note = "upper Ahlfors 1-regularity constant " + std::to_string(ar.c1);
  out.first.warnings.push_back(note);
  out.second.warnings.push_back(note);
  return out;
}

ConditionReport cond_radial(const DiscreteSpace& space, const PointFunction& p,
                            const PointFunction& q, const RadialProfile& vprof,
                            const RadialProfile& wprof, double alpha, RadialVariant variant,
                            double a, MonotoneCheck check) {
  require_size(space, p, "p");
  ConditionReport pre;
  check_monotone(space, vprof, "v", check, pre);
  check_monotone(space, wprof, "w", check, pre);
  const PointFunction v = vprof.on(space), w = wprof.on(space);
  require_nonnegative(v, "v");
  require_nonnegative(w, "w");
  const LocalExponents le = local_exponents(space, p, a);
  const auto mb = basepoint_ball_measures(space);
  const auto r = radii(space);
  const std::size_t n = space.size();
  const double pc_x0 = p[space.basepoint()] / (p[space.basepoint()] - 1.0);

  FunctionalSpec spec;
  spec.name = std::string(to_string(variant));
  spec.outer = Region::tail;
  spec.inner = Region::head;
  PointFunction e;
  const PointFunction* outer_exp = &q;
  switch (variant) {
    case RadialVariant::I1:
    case RadialVariant::J1:
    case RadialVariant::E: {
      require_size(space, q, "q");
      constant_alpha_bound(p, alpha);
      if (variant == RadialVariant::I1) e = conjugate(le.p0_tilde);
      if (variant == RadialVariant::J1) e = constant_like(space, pc_x0);
      if (variant == RadialVariant::E) e = conjugate(le.p0);
      const auto& scale = variant == RadialVariant::E ? r : mb;
      spec.outer_factor = scaled_power(v, scale, std::vector<double>(n, alpha - 1.0), q);
      break;
    }
    case RadialVariant::S:
    case RadialVariant::Thm43:
      e = variant == RadialVariant::S ? constant_like(space, pc_x0) : conjugate(le.p0_tilde);
      spec.outer_factor = scaled_power(v, mb, std::vector<double>(n, -1.0), p);
      outer_exp = &p;
      break;
  }
  spec.outer_power = quotient(*outer_exp, e);
  spec.inner_terms = {{w.values, negate(e)}};
  ConditionReport rep = evaluate_functional(space, spec);
  rep.warnings.insert(rep.warnings.begin(), pre.warnings.begin(), pre.warnings.end());
  return rep;
}

std::pair<ConditionReport, ConditionReport> cond_variable_alpha(const DiscreteSpace& space,
                                                                const PointFunction& p,
                                                                const PointFunction& q,
                                                                const PointFunction& v,
                                                                const RadialProfile& wprof,
                                                                const PointFunction& alpha,
                                                                MonotoneCheck check) {
  for (auto [f, name] : {std::pair{&p, "p"}, {&q, "q"}, {&v, "v"}, {&alpha, "alpha"}})
    require_size(space, *f, name);
  require_nonnegative(v, "v");
  require_order(alpha);
  ConditionReport pre;
  check_monotone(space, wprof, "w", check, pre);
  const PointFunction w = wprof.on(space);
  const LocalExponents le = local_exponents(space, p, space.diameter());
  const PointFunction e0 = conjugate(le.p0), e1 = conjugate(le.p1);
  const auto mb = basepoint_ball_measures(space);
  const std::size_t n = space.size();

  const double p_lo = extrema_over(p, all_points(space)).first;
  const auto [a_lo, a_hi] = extrema_over(alpha, all_points(space));
  if (!(1.0 / p_lo < a_lo && a_hi < 1.0))
    pre.warnings.push_back("stated order range 1/p- < alpha- <= alpha+ < 1 does not hold");

  std::vector<double> kernel_exp(n), mb_coef(n);
  for (PointId x = 0; x < n; ++x) {
    kernel_exp[x] = alpha[x] - 1.0;
    mb_coef[x] = -(1.0 - alpha[x]) * e1[x];
  }
  FunctionalSpec i1{"It1", Region::tail, Region::head, scaled_power(v, mb, kernel_exp, q),
                    quotient(q, e0), {{w.values, negate(e0)}}};
  FunctionalSpec i2{"It2", Region::head, Region::tail, power_each(v, q), quotient(q, e1),
                    {{w.values, negate(e1)}, {mb, mb_coef}}};
  auto out = std::pair{evaluate_functional(space, i1), evaluate_functional(space, i2)};
  for (auto* rep : {&out.first, &out.second})
    rep->warnings.insert(rep->warnings.begin(), pre.warnings.begin(), pre.warnings.end());
  return out;
}

std::pair<ConditionReport, ConditionReport> cond_maximal_singular(const DiscreteSpace& space,
                                                                  const PointFunction& p,
                                                                  const PointFunction& v,
                                                                  const PointFunction& w,
                                                                  double a) {
  for (auto [f, name] : {std::pair{&p, "p"}, {&v, "v"}, {&w, "w"}}) require_size(space, *f, name);
  require_nonnegative(v, "v");
  require_nonnegative(w, "w");
  const LocalExponents le = local_exponents(space, p, a);
  const PointFunction e0 = conjugate(le.p0_tilde), e1 = conjugate(le.p1_tilde);
  const auto mb = basepoint_ball_measures(space);
  const std::size_t n = space.size();
  FunctionalSpec i{"Thm42_i", Region::tail, Region::head,
                   scaled_power(v, mb, std::vector<double>(n, -1.0), p), quotient(p, e0),
                   {{w.values, negate(e0)}}};
  FunctionalSpec ii{"Thm42_ii", Region::head, Region::tail, power_each(v, p), quotient(p, e1),
                    {{w.values, negate(e1)}, {mb, e1.values}}};
  return {evaluate_functional(space, i), evaluate_functional(space, ii)};
}

CondCReport cond_c_check(const DiscreteSpace& space, const PointFunction& v,
                         const PointFunction& w, double A, double a1, ScaleBranch branch) {
  require_size(space, v, "v");
  require_size(space, w, "w");
  require_nonnegative(v, "v");
  const PointId x0 = space.basepoint();
  for (PointId x = 0; x < space.size(); ++x)
    if (x != x0 && !(w[x] > 0.0))
      throw PreconditionError("w must be positive away from the basepoint",
                              "x=" + std::to_string(x));
  CondCReport rep;
  for (PointId x = 0; x < space.size(); ++x) {
    if (x == x0) {
      ++rep.skipped;
      continue;
    }
    const FSet F = set_F(space, x, A, a1, branch);
    if (F.members.empty() || F.degenerate) {
      ++rep.skipped;
      continue;
    }
    double v_plus = 0.0, w_minus = std::numeric_limits<double>::infinity();
    for (PointId y : F.members) {
      v_plus = std::max(v_plus, v[y]);
      w_minus = std::min(w_minus, w[y]);
    }
    if (v_plus / w[x] > rep.b1) {
      rep.b1 = v_plus / w[x];
      rep.b1_witness = x;
    }
    const double b2 = w_minus > 0.0 ? v[x] / w_minus : (v[x] > 0.0 ? HUGE_VAL : 0.0);
    if (b2 > rep.b2) {
      rep.b2 = b2;
      rep.b2_witness = x;
    }
  }
  return rep;
}

MuckenhouptReport muckenhoupt_Ar(const DiscreteSpace& space, const PointFunction& w, double r) {
  if (!(r > 1.0)) throw std::domain_error("A_r needs r > 1");
  require_size(space, w, "w");
  require_nonnegative(w, "w");
  const double dual = 1.0 - r / (r - 1.0);  // 1 - r'
  MuckenhouptReport rep;
  for (PointId x = 0; x < space.size(); ++x) {
    const Shells s = shells_around(space, x);
    double sum_w = 0.0, sum_dual = 0.0;
    for (std::size_t k = 0; k < s.shell_count(); ++k) {
      for (std::size_t i = s.begin[k]; i < s.begin[k + 1]; ++i) {
        const PointId y = s.order[i];
        sum_w += w[y] * space.mu(y);
        const double d = std::pow(w[y], dual) * space.mu(y);
        if (std::isfinite(d)) {
          sum_dual += d;
        } else {
          ++rep.dropped_terms;
        }
      }
      const double m = s.closed_measure[k];
      const double value = (sum_w / m) * std::pow(sum_dual / m, r - 1.0);
      if (value > rep.value) {
        rep.value = value;
        rep.center = x;
        rep.radius = k + 1 < s.shell_count() ? 0.5 * (s.radii[k] + s.radii[k + 1])
                                             : std::numeric_limits<double>::infinity();
      }
    }
  }
  return rep;
}

ExampleWeights make_example_weights(ExampleVariant variant, const ExampleParams& prm) {
  ExampleWeights ex;
  if (variant == ExampleVariant::ex38) {
    const double pc_minus = prm.p_minus / (prm.p_minus - 1.0);
    const double q_minus = prm.p_minus / (1.0 - prm.alpha * prm.p_minus);
    const double q_plus = prm.p_plus / (1.0 - prm.alpha * prm.p_plus);
    ex.gamma_min = std::max(0.0, 1.0 - prm.alpha - 1.0 / q_plus -
                                     (q_minus / q_plus) * (-prm.beta + 1.0 / pc_minus));
    const double gamma = prm.gamma.value_or(ex.gamma_min);
    ex.v = RadialProfile::power(gamma);
    ex.w = RadialProfile::power(prm.beta);
    if (!(prm.p_minus > 1.0 && prm.p_minus <= prm.p_plus)) {
      ex.admissible = false;
      ex.reason = "need 1 < p- <= p+";
    } else if (!(prm.alpha > 0.0 && prm.alpha * prm.p_plus < 1.0)) {
      ex.admissible = false;
      ex.reason = "need 0 < alpha < 1/p+";
    } else if (!(prm.beta >= 0.0 && prm.beta < 1.0 / pc_minus)) {
      ex.admissible = false;
      ex.reason = "beta must lie in [0, 1/(p-)') = [0, " + std::to_string(1.0 / pc_minus) + ")";
    } else if (gamma < ex.gamma_min) {
      ex.admissible = false;
      ex.reason = "gamma below gamma_min " + std::to_string(ex.gamma_min);
    }
    return ex;
  }
  const double e = 1.0 / prm.p_conj_at_x0;
  ex.v = RadialProfile::power(e);
  ex.w = {RadialProfile::Kind::power_log, 0.0, 1.0, e, 1.0, 2.0 * prm.L};
  if (!(prm.p_conj_at_x0 > 1.0 && prm.L > 0.0)) {
    ex.admissible = false;
    ex.reason = "need p'(x0) > 1 and L > 0";
  }
  return ex;
}

LogBoundFit log_weight_bounds(const DiscreteSpace& space, const PointFunction& p,
                              const RadialProfile& vprof, const RadialProfile& wprof) {
  require_size(space, p, "p");
  require_exponent(p);
  const PointId x0 = space.basepoint();
  const double pc_x0 = p[x0] / (p[x0] - 1.0);
  const double L = space.diameter();
  const auto mb = basepoint_ball_measures(space);
  const Shells s = shells_around(space, x0);
  const std::size_t G = s.shell_count();
  std::vector<double> w_shell(G, 0.0), v_shell(G, 0.0);
  for (PointId y = 0; y < space.size(); ++y) {
    const double r = space.radius(y);
    const double wt = std::pow(wprof(r), -pc_x0) * space.mu(y);
    if (std::isfinite(wt)) w_shell[s.shell_of[y]] += wt;
    const double vt = power_of(weighted(vprof(r), 1.0 / mb[y]), p[y]) * space.mu(y);
    if (std::isfinite(vt)) v_shell[s.shell_of[y]] += vt;
  }
  double v_total = 0.0;
  for (double m : v_shell) v_total += m;
  LogBoundFit fit;
  const auto gaps = s.gaps();
  double w_run = 0.0, v_run = 0.0;
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    w_run += w_shell[j];
    v_run += v_shell[j];
    const double t = gaps[j];
    if (t > L) break;
    const double log_term = std::log(2.0 * L / t);
    fit.t.push_back(t);
    fit.inner.push_back(w_run);
    fit.outer.push_back(v_total - v_run);
    fit.c_inner = std::max(fit.c_inner, w_run * log_term);
    fit.c_outer = std::max(fit.c_outer, (v_total - v_run) / log_term);
  }
  return fit;
}

}  // namespace varlp

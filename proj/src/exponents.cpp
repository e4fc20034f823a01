#include "varlp/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varlp {

namespace {

bool within_radius(double r, double a) { return r <= a * (1.0 + 1e-12); }

}  // namespace

PointFunction PointFunction::radial(const DiscreteSpace& space,
                                    const std::function<double(double)>& profile, FunctionKind k) {
  std::vector<double> vals(space.size());
  for (PointId x = 0; x < space.size(); ++x) vals[x] = profile(space.radius(x));
  return PointFunction(std::move(vals), k);
}

bool PointFunction::is_constant() const {
  return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
}

void require_exponent(const PointFunction& p, const std::string& name) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(p[i] > 1.0) || !std::isfinite(p[i]))
      throw PreconditionError(name + " must take values in (1, inf)",
                              name + "[" + std::to_string(i) + "]=" + std::to_string(p[i]));
}

void require_weight(const PointFunction& w, const std::string& name) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!(w[i] > 0.0) || !std::isfinite(w[i]))
      throw PreconditionError(name + " must be positive and finite",
                              name + "[" + std::to_string(i) + "]=" + std::to_string(w[i]));
}

void require_order(const PointFunction& alpha, const std::string& name) {
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (!(alpha[i] > 0.0 && alpha[i] < 1.0))
      throw PreconditionError(name + " must take values in (0, 1)",
                              name + "[" + std::to_string(i) + "]=" + std::to_string(alpha[i]));
}

std::pair<double, double> extrema_over(const PointFunction& p, const PointSet& subset) {
  if (subset.empty()) throw std::domain_error("extrema over an empty set");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (PointId x : subset) {
    lo = std::min(lo, p.values.at(x));
    hi = std::max(hi, p.values.at(x));
  }
  return {lo, hi};
}

PointFunction conjugate(const PointFunction& p) {
  require_exponent(p);
  PointFunction out(p.values, FunctionKind::exponent);
  for (double& v : out.values) v = v / (v - 1.0);
  return out;
}

LocalExponents local_exponents(const DiscreteSpace& space, const PointFunction& p, double a) {
  require_exponent(p);
  if (p.size() != space.size()) throw std::invalid_argument("exponent size differs from space size");
  if (!space.models_infinite_diameter()) {
    a = space.diameter();
  } else if (!(a > 0.0)) {
    throw std::domain_error("tail radius a must be positive");
  }
  LocalExponents out;
  out.a = a;
  for (PointId x = 0; x < space.size(); ++x) {
    if (within_radius(space.radius(x), a)) continue;
    if (!out.tail_value) {
      out.tail_value = p[x];
    } else if (p[x] != *out.tail_value) {
      throw PreconditionError("exponent is not constant beyond radius a",
                              "x=" + std::to_string(x));
    }
  }

  const Shells s = shells_around(space, space.basepoint());
  const std::size_t G = s.shell_count();
  std::vector<double> shell_min(G, std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < G; ++k)
    for (std::size_t i = s.begin[k]; i < s.begin[k + 1]; ++i)
      shell_min[k] = std::min(shell_min[k], p[s.order[i]]);

  std::vector<double> head(G), tail(G, std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < G; ++k) head[k] = std::min(shell_min[k], k ? head[k - 1] : shell_min[k]);
  for (std::size_t k = G; k-- > 0;) {
    const double own = within_radius(s.radii[k], a) ? shell_min[k]
                                                     : std::numeric_limits<double>::infinity();
    tail[k] = std::min(own, k + 1 < G ? tail[k + 1] : own);
  }

  const std::size_t n = space.size();
  out.p0 = PointFunction(std::vector<double>(n), FunctionKind::exponent);
  out.p1 = out.p0;
  out.p0_tilde = out.p0;
  out.p1_tilde = out.p0;
  for (PointId x = 0; x < n; ++x) {
    const std::size_t k = s.shell_of[x];
    const bool inside = within_radius(s.radii[k], a);
    out.p0[x] = head[k];
    // beyond a the closed-ball-minus-open-ball region is empty; the tail
    // constant is the only meaningful value there
    out.p1[x] = inside ? tail[k] : *out.tail_value;
    out.p0_tilde[x] = inside ? out.p0[x] : *out.tail_value;
    out.p1_tilde[x] = inside ? out.p1[x] : *out.tail_value;
  }
  return out;
}

PointFunction sobolev_q(const PointFunction& p, const PointFunction& alpha) {
  if (p.size() != alpha.size()) throw std::invalid_argument("p and alpha differ in size");
  PointFunction q(p.values, FunctionKind::exponent);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double ap = alpha[i] * p[i];
    if (!(ap < 1.0))
      throw PreconditionError("alpha p must stay below 1",
                              "x=" + std::to_string(i) + " alpha*p=" + std::to_string(ap));
    q[i] = p[i] / (1.0 - ap);
  }
  return q;
}

std::string_view to_string(ExponentClass c) {
  switch (c) {
    case ExponentClass::P_N: return "P(N)";
    case ExponentClass::LH: return "LH";
    case ExponentClass::LHbar: return "LHbar";
    case ExponentClass::LH_at_x0: return "LH-at-x0";
  }
  return "?";
}

namespace {

void sweep_oscillation(const DiscreteSpace& space, const PointFunction& p, double N, double b,
                       PointId x, ClassReport& rep) {
  const Shells s = shells_around(space, x);
  const auto gaps = s.gaps();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::size_t j = 0;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    const double r = gaps[k];
    if (r > b) break;
    for (std::size_t i = s.begin[k]; i < s.begin[k + 1]; ++i) {
      lo = std::min(lo, p[s.order[i]]);
      hi = std::max(hi, p[s.order[i]]);
    }
    while (j + 1 < s.shell_count() && s.radii[j + 1] < N * r) ++j;
    const double value = std::pow(s.closed_measure[j], lo - hi);
    ++rep.swept;
    if (value > rep.constant_c) {
      rep.constant_c = value;
      rep.witness_x = x;
      rep.witness_r = r;
    }
  }
}

void sweep_log_pairs(const DiscreteSpace& space, const PointFunction& p, double b, PointId x,
                     ClassReport& rep) {
  const Shells s = shells_around(space, x);
  for (std::size_t k = 1; k < s.shell_count() && s.radii[k] <= b; ++k) {
    const double m = s.open_measure(k);
    if (m >= 1.0) {
      rep.excluded += s.begin[k + 1] - s.begin[k];
      continue;
    }
    for (std::size_t i = s.begin[k]; i < s.begin[k + 1]; ++i) {
      const PointId y = s.order[i];
      const double value = std::abs(p[x] - p[y]) * -std::log(m);
      ++rep.swept;
      if (value > rep.constant_c) {
        rep.constant_c = value;
        rep.witness_x = x;
        rep.witness_y = y;
      }
    }
  }
}

}  // namespace

ClassReport class_check(const DiscreteSpace& space, const PointFunction& p, ExponentClass tag,
                        double N, std::optional<PointId> at, std::optional<double> b) {
  if (p.size() != space.size()) throw std::invalid_argument("exponent size differs from space size");
  const double radius = b.value_or(0.5 * space.diameter());
  if (!(radius > 0.0)) throw std::domain_error("class radius b must be positive");
  if (tag == ExponentClass::P_N && !(N >= 1.0)) throw std::domain_error("P(N) needs N >= 1");
  if (at) space.check_point(*at);

  ClassReport rep;
  rep.tag = tag;
  rep.radius_b = radius;
  switch (tag) {
    case ExponentClass::P_N:
      if (at) {
        sweep_oscillation(space, p, N, radius, *at, rep);
      } else {
        for (PointId x = 0; x < space.size(); ++x) sweep_oscillation(space, p, N, radius, x, rep);
      }
      break;
    case ExponentClass::LH_at_x0:
      sweep_log_pairs(space, p, radius, at.value_or(space.basepoint()), rep);
      break;
    case ExponentClass::LH:
      if (at) {
        sweep_log_pairs(space, p, radius, *at, rep);
      } else {
        for (PointId x = 0; x < space.size(); ++x) sweep_log_pairs(space, p, radius, x, rep);
      }
      break;
    case ExponentClass::LHbar:
      for (PointId x = 0; x < space.size(); ++x)
        for (PointId y = 0; y < space.size(); ++y) {
          const double d = space.dist(x, y);
          if (x == y || d > radius) continue;
          if (d >= 1.0) {
            ++rep.excluded;
            continue;
          }
          const double value = std::abs(p[x] - p[y]) * -std::log(d);
          ++rep.swept;
          if (value > rep.constant_c) {
            rep.constant_c = value;
            rep.witness_x = x;
            rep.witness_y = y;
          }
        }
      break;
  }
  if (rep.swept == 0) rep.diagnostics = "no admissible radius or pair within b";
  return rep;
}

Trend class_trend(std::vector<ClassReport>& reports) {
  std::vector<double> values;
  for (const auto& r : reports) values.push_back(r.constant_c);
  const Trend t = classify_trend(values);
  for (auto& r : reports) r.satisfied_hint = t;
  return t;
}

}  // namespace varlp

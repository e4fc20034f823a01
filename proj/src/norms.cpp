#include "varlp/norms.hpp"

#include <cmath>
#include <numeric>

namespace varlp {

PointSet all_points(const DiscreteSpace& space) {
  PointSet all(space.size());
  std::iota(all.begin(), all.end(), PointId{0});
  return all;
}

namespace {

double scaled_modular(const DiscreteSpace& space, const PointFunction& p, const PointFunction& f,
                      const PointSet& subset, double lambda) {
  double sum = 0.0;
  for (PointId x : subset) {
    const double a = std::abs(f[x]);
    if (a != 0.0) sum += std::pow(a / lambda, p[x]) * space.mu(x);
  }
  return sum;
}

}  // namespace

double modular(const DiscreteSpace& space, const PointFunction& p, const PointFunction& f) {
  return modular(space, p, f, all_points(space));
}

double modular(const DiscreteSpace& space, const PointFunction& p, const PointFunction& f,
               const PointSet& subset) {
  return scaled_modular(space, p, f, subset, 1.0);
}

NormResult luxemburg_norm(const DiscreteSpace& space, const PointFunction& p,
                          const PointFunction& f) {
  return luxemburg_norm(space, p, f, all_points(space));
}

NormResult luxemburg_norm(const DiscreteSpace& space, const PointFunction& p,
                          const PointFunction& f, const PointSet& subset) {
  NormResult res;
  bool nonzero = false;
  for (PointId x : subset) nonzero = nonzero || f[x] != 0.0;
  if (!nonzero) return res;

  auto S = [&](double lambda) { return scaled_modular(space, p, f, subset, lambda); };
  double hi = std::max(1.0, S(1.0));
  while (S(hi) > 1.0) hi *= 2.0;
  double lo = hi * 0.5;
  while (S(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
  }
  constexpr int kMaxIters = 200;
  while (hi - lo > kNormRelTol * hi) {
    if (res.bisection_iters == kMaxIters) {
      res.converged = false;
      break;
    }
    const double mid = 0.5 * (lo + hi);
    (S(mid) > 1.0 ? lo : hi) = mid;
    ++res.bisection_iters;
  }
  res.value = hi;
  res.lo = lo;
  res.hi = hi;
  res.modular_at_value = S(hi);
  return res;
}

HolderResult holder_check(const DiscreteSpace& space, const PointFunction& p,
                          const PointFunction& f, const PointFunction& g, const PointSet& subset) {
  HolderResult r;
  if (subset.empty()) return r;
  for (PointId x : subset) r.lhs += std::abs(f[x] * g[x]) * space.mu(x);
  const PointFunction pc = conjugate(p);
  const double factor =
      1.0 / extrema_over(p, subset).first + 1.0 / extrema_over(pc, subset).first;
  r.rhs = factor * luxemburg_norm(space, p, f, subset).value *
          luxemburg_norm(space, pc, g, subset).value;
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-9);
  return r;
}

}  // namespace varlp

#pragma once

#include "varlp/exponents.hpp"

namespace varlp {

/// Sum over points of |f|^p mu; zero entries contribute 0 for every p.
double modular(const DiscreteSpace& space, const PointFunction& p, const PointFunction& f);
double modular(const DiscreteSpace& space, const PointFunction& p, const PointFunction& f,
               const PointSet& subset);

struct NormResult {
  double value = 0.0;
  double modular_at_value = 0.0;  // S(f / value); 0 when value = 0
  int bisection_iters = 0;
  double lo = 0.0;  // S(f/lo) > 1
  double hi = 0.0;  // S(f/hi) <= 1
  bool converged = true;
};

inline constexpr double kNormRelTol = 1e-10;

/// Luxemburg norm inf{lambda > 0 : S(f/lambda) <= 1} by bisection. The
/// returned value is the upper bracket end, so S(f/value) <= 1 always.
NormResult luxemburg_norm(const DiscreteSpace& space, const PointFunction& p,
                          const PointFunction& f);
NormResult luxemburg_norm(const DiscreteSpace& space, const PointFunction& p,
                          const PointFunction& f, const PointSet& subset);

struct HolderResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// lhs = sum over E of |f g| mu; rhs = (1/p-(E) + 1/(p')-(E)) |f|_{p,E} |g|_{p',E}.
HolderResult holder_check(const DiscreteSpace& space, const PointFunction& p,
                          const PointFunction& f, const PointFunction& g, const PointSet& subset);

/// All point ids of the space.
PointSet all_points(const DiscreteSpace& space);

}  // namespace varlp

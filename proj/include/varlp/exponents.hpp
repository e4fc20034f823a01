#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "varlp/space.hpp"
#include "varlp/trend.hpp"

namespace varlp {

enum class FunctionKind { exponent, weight, test };

/// One real value per point of a DiscreteSpace.
struct PointFunction {
  std::vector<double> values;
  FunctionKind kind = FunctionKind::test;

  PointFunction() = default;
  PointFunction(std::vector<double> vals, FunctionKind k = FunctionKind::test)
      : values(std::move(vals)), kind(k) {}

  static PointFunction constant(std::size_t n, double c, FunctionKind k = FunctionKind::test) {
    return PointFunction(std::vector<double>(n, c), k);
  }
  /// x -> profile(d(x0, x)).
  static PointFunction radial(const DiscreteSpace& space, const std::function<double(double)>& profile,
                              FunctionKind k = FunctionKind::test);

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  /// Same value everywhere (exactly).
  bool is_constant() const;
};

/// Throws PreconditionError unless every value lies in (1, inf).
void require_exponent(const PointFunction& p, const std::string& name = "p");
/// Throws PreconditionError unless every value is finite and > 0.
void require_weight(const PointFunction& w, const std::string& name = "w");
/// Throws PreconditionError unless every value lies in (0, 1).
void require_order(const PointFunction& alpha, const std::string& name = "alpha");

/// (min, max) of p over subset; std::domain_error on an empty subset.
std::pair<double, double> extrema_over(const PointFunction& p, const PointSet& subset);

/// p/(p-1) pointwise.
PointFunction conjugate(const PointFunction& p);

struct LocalExponents {
  PointFunction p0;        // min of p over the closed ball B(x0, r(x))
  PointFunction p1;        // min of p over r(x) <= r(y) <= a
  PointFunction p0_tilde;  // p0 inside radius a, the tail constant outside
  PointFunction p1_tilde;
  double a = 0.0;
  std::optional<double> tail_value;  // the constant beyond radius a, if any point lies there
};

/// Radial one-sided minima of p around the basepoint. On a finite-diameter
/// space a is replaced by L. On an infinite-diameter model p must be constant
/// beyond a (PreconditionError naming the first offending point otherwise).
LocalExponents local_exponents(const DiscreteSpace& space, const PointFunction& p, double a);

/// q = p/(1 - alpha p); PreconditionError where alpha p >= 1.
PointFunction sobolev_q(const PointFunction& p, const PointFunction& alpha);

enum class ExponentClass { P_N, LH, LHbar, LH_at_x0 };

std::string_view to_string(ExponentClass c);

struct ClassReport {
  ExponentClass tag = ExponentClass::P_N;
  double constant_c = 0.0;
  double radius_b = 0.0;
  PointId witness_x = 0;
  PointId witness_y = 0;   // pair classes
  double witness_r = 0.0;  // radius classes
  std::size_t swept = 0;
  std::size_t excluded = 0;  // pairs with mu B >= 1 (LH) or d >= 1 (LHbar)
  std::string diagnostics;
  Trend satisfied_hint = Trend::undecided;  // filled by class_trend
};

/// Sup of the defining quantity of the class at this resolution:
///  P_N:      mu B(x, N r)^{p-(B) - p+(B)}, B = B(x, r), r <= b over the shell gaps;
///  LH:       |p(x) - p(y)| (-ln mu B(x, d(x,y))), d <= b, mu B < 1;
///  LHbar:    |p(x) - p(y)| (-ln d(x,y)), d <= b, d < 1;
///  LH_at_x0: LH with x fixed at `at` (the basepoint by default).
/// For P_N and LH an `at` point restricts the centers to that point.
/// b defaults to half the diameter.
ClassReport class_check(const DiscreteSpace& space, const PointFunction& p, ExponentClass tag,
                        double N = 1.0, std::optional<PointId> at = std::nullopt,
                        std::optional<double> b = std::nullopt);

/// Classifies a refinement sequence of class reports and stores the verdict
/// in each report's satisfied_hint.
Trend class_trend(std::vector<ClassReport>& reports);

}  // namespace varlp

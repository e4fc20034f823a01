#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "varlp/exponents.hpp"

namespace varlp {

/// Positive function of the distance to the basepoint.
///   constant:  a
///   affine:    a + b r
///   power:     a + b r^gamma
///   log_power: a + b (1 - ln r)^-gamma   (a at r = 0)
///   power_log: b r^gamma ln(scale / r)^delta
struct RadialProfile {
  enum class Kind { constant, affine, power, log_power, power_log };
  Kind kind = Kind::constant;
  double a = 1.0;
  double b = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double scale = 2.0;

  double operator()(double r) const;
  PointFunction on(const DiscreteSpace& space, FunctionKind k = FunctionKind::weight) const;
  bool operator==(const RadialProfile&) const = default;

  static RadialProfile constant(double c) { return {Kind::constant, c, 0, 0, 0, 2}; }
  static RadialProfile power(double gamma, double coef = 1.0, double offset = 0.0) {
    return {Kind::power, offset, coef, gamma, 0, 2};
  }
};

std::string_view to_string(RadialProfile::Kind k);

struct ConditionReport {
  std::string name;
  double value = 0.0;
  double argmax_t = 0.0;
  std::vector<std::pair<double, double>> curve;  // (t, value at t)
  std::size_t resolution = 0;
  Trend finite_hint = Trend::undecided;
  std::size_t dropped_terms = 0;  // non-finite integrand terms left out
  std::vector<std::string> warnings;
};

enum class Region {
  head,  // r <= t
  tail,  // t < r <= L
};

/// base(y)^{coef(x)}.
struct InnerFactor {
  std::vector<double> base;
  std::vector<double> coef;
};

/// The functional
///   sup over t of  sum over x in outer(t) of
///     F(x) (sum over y in inner(t) of prod_i base_i(y)^{coef_i(x)} mu(y))^{s(x)} mu(x),
/// t running over the gaps between distinct distances from the basepoint.
struct FunctionalSpec {
  std::string name;
  Region outer = Region::tail;
  Region inner = Region::head;
  std::vector<double> outer_factor;
  std::vector<double> outer_power;
  std::vector<InnerFactor> inner_terms;
};

ConditionReport evaluate_functional(const DiscreteSpace& space, const FunctionalSpec& spec);

/// Hardy-operator condition: outer tail v^q, inner head w^{(p0~)'}.
ConditionReport cond_A1(const DiscreteSpace& space, const PointFunction& p, const PointFunction& q,
                        const PointFunction& v, const PointFunction& w, double a);
/// Dual Hardy-operator condition: outer head v^q, inner tail w^{(p1~)'}.
ConditionReport cond_B1(const DiscreteSpace& space, const PointFunction& p, const PointFunction& q,
                        const PointFunction& v, const PointFunction& w, double a);

/// The two measure-kernel potential conditions for constant 0 < alpha < 1/p+,
/// q = p/(1 - alpha p).
std::pair<ConditionReport, ConditionReport> cond_potential_P(const DiscreteSpace& space,
                                                             const PointFunction& p,
                                                             const PointFunction& v,
                                                             const PointFunction& w, double alpha,
                                                             double a);

/// The distance-kernel potential conditions; the upper Ahlfors 1-regularity
/// constant is reported as a warning line.
std::pair<ConditionReport, ConditionReport> cond_potential_ahlfors(const DiscreteSpace& space,
                                                                   const PointFunction& p,
                                                                   const PointFunction& v,
                                                                   const PointFunction& w,
                                                                   const PointFunction& alpha);

enum class RadialVariant { I1, J1, E, S, Thm43 };
std::string_view to_string(RadialVariant v);

enum class MonotoneCheck { enforce, warn };

/// Conditions with radial monotone weights v(r), w(r). q and alpha are ignored
/// by S and Thm43. A profile that decreases on the swept radii raises
/// PreconditionError, or only adds a warning under MonotoneCheck::warn.
ConditionReport cond_radial(const DiscreteSpace& space, const PointFunction& p,
                            const PointFunction& q, const RadialProfile& v,
                            const RadialProfile& w, double alpha, RadialVariant variant,
                            double a, MonotoneCheck check = MonotoneCheck::enforce);

/// Variable-order potential conditions (v pointwise, w radial).
std::pair<ConditionReport, ConditionReport> cond_variable_alpha(const DiscreteSpace& space,
                                                                const PointFunction& p,
                                                                const PointFunction& q,
                                                                const PointFunction& v,
                                                                const RadialProfile& w,
                                                                const PointFunction& alpha,
                                                                MonotoneCheck check =
                                                                    MonotoneCheck::enforce);

/// Maximal/singular operator conditions (exponent p on both sides).
std::pair<ConditionReport, ConditionReport> cond_maximal_singular(const DiscreteSpace& space,
                                                                  const PointFunction& p,
                                                                  const PointFunction& v,
                                                                  const PointFunction& w,
                                                                  double a);

struct CondCReport {
  double b1 = 0.0;  // sup v+(F_x) / w(x)
  double b2 = 0.0;  // sup v(x) / w-(F_x)
  PointId b1_witness = 0;
  PointId b2_witness = 0;
  std::size_t skipped = 0;  // basepoint or empty F_x
};

/// Comparison of v and w over the annuli F_x. Throws PreconditionError when w
/// is non-positive away from the basepoint.
CondCReport cond_c_check(const DiscreteSpace& space, const PointFunction& v,
                         const PointFunction& w, double A, double a1 = 1.0,
                         ScaleBranch branch = ScaleBranch::infinite_diameter);

struct MuckenhouptReport {
  double value = 0.0;
  PointId center = 0;
  double radius = 0.0;
  std::size_t dropped_terms = 0;
};

/// sup over centered balls of (avg w)(avg w^{1-r'})^{r-1}.
MuckenhouptReport muckenhoupt_Ar(const DiscreteSpace& space, const PointFunction& w, double r);

enum class ExampleVariant { ex38, ex44 };

struct ExampleParams {
  // ex38
  double p_minus = 2.0;
  double p_plus = 2.0;
  double alpha = 0.25;
  double beta = 0.25;
  std::optional<double> gamma;  // defaults to gamma_min
  // ex44
  double p_conj_at_x0 = 2.0;
  double L = 1.0;
  bool operator==(const ExampleParams&) const = default;
};

struct ExampleWeights {
  RadialProfile v;
  RadialProfile w;
  bool admissible = true;
  double gamma_min = 0.0;
  std::string reason;
};

ExampleWeights make_example_weights(ExampleVariant variant, const ExampleParams& params);

struct LogBoundFit {
  double c_inner = 0.0;  // max over t of W(t) ln(2L/t)
  double c_outer = 0.0;  // max over t of V(t) / ln(2L/t)
  std::vector<double> t, inner, outer;
};

/// W(t) = sum over r <= t of w^{-p'(x0)} mu and V(t) = sum over t < r <= L of
/// (v/mu B_{x0 x})^{p(x)} mu, with the constants fitted over the swept t.
LogBoundFit log_weight_bounds(const DiscreteSpace& space, const PointFunction& p,
                              const RadialProfile& v, const RadialProfile& w);

}  // namespace varlp

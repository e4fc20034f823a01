#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "varlp/conditions.hpp"
#include "varlp/operators.hpp"

namespace varlp {

enum class EstimateMethod { random, power_iteration, probe };
std::string_view to_string(EstimateMethod m);

struct NormEstimate {
  double ratio = 0.0;  // best |v Op f|_q / |w f|_p found
  PointFunction best_f;
  std::string best_label;
  EstimateMethod method = EstimateMethod::probe;
  std::size_t trials = 0;
  std::vector<double> history;  // per-resolution ratios when part of a study
  bool converged = true;
};

using OperatorFn = std::function<PointFunction(const PointFunction&)>;

/// The deterministic probe family: basepoint-ball indicators and their
/// complements at log-spaced radii, radial powers r^s for s = -0.4..0.9,
/// w^{-p'} restricted to the same balls and complements, then `trials` seeded
/// random mixtures of ball indicators, radial powers and point masses.
/// Non-finite probe values are set to 0.
std::vector<std::pair<std::string, PointFunction>> probe_family(const DiscreteSpace& space,
                                                                const PointFunction& p,
                                                                const PointFunction& w,
                                                                std::size_t trials,
                                                                unsigned long long seed);

/// max over the probe family of |v Op f|_q / |w f|_p; probes with |w f|_p = 0
/// are discarded.
NormEstimate empirical_ratio(const DiscreteSpace& space, const OperatorFn& op,
                             const PointFunction& p, const PointFunction& q,
                             const PointFunction& v, const PointFunction& w, std::size_t trials,
                             unsigned long long seed);

/// Nonlinear power iteration for the L^p(mu) -> L^q(mu) norm of
/// f -> sum_y A(x,y) f(y) with A >= 0. converged = false when the ratio
/// still moved by more than 1e-13 (relative) after `iters` steps.
NormEstimate power_iteration_pq(const DiscreteSpace& space, const DenseMatrix& a, double p,
                                double q, int iters = 2000);

/// v(x) A(x,y) / w(y): turns the two-weight problem for A into an unweighted one.
DenseMatrix weighted_matrix(const DenseMatrix& a, const PointFunction& v, const PointFunction& w);

enum class ProbeVariant { hardy_A1, potential_P1, potential_P2, maximal_i };
std::string_view to_string(ProbeVariant v);

struct ProbeResult {
  double probe_ratio = 0.0;
  double condition_value_at_t = 0.0;
};

/// Substitutes the test function that certifies necessity of the matching
/// condition at radius t (constant exponents p, q; q is ignored by maximal_i,
/// alpha is used by the potential variants). The basepoint is excluded from
/// the probe support; PreconditionError if w <= 0 elsewhere on it.
ProbeResult necessity_probe(const DiscreteSpace& space, ProbeVariant variant, double p, double q,
                            const PointFunction& v, const PointFunction& w, double t,
                            double alpha = 0.5);

/// One resolution of a study.
struct StudyInstance {
  std::vector<ConditionReport> conditions;
  std::optional<NormEstimate> ratio;
  std::optional<GeometryReport> geometry;
};

using StudyCase = std::function<StudyInstance(std::size_t resolution)>;

struct StudyReport {
  std::vector<std::size_t> resolutions;
  std::map<std::string, std::vector<double>> condition_values;
  std::map<std::string, Trend> condition_trend;
  std::vector<double> ratios;
  Trend ratio_trend = Trend::undecided;
  std::vector<GeometryReport> geometry;
  /// The last resolution's reports, finite_hint filled from the trend.
  std::vector<ConditionReport> final_conditions;
};

/// Runs the case at each resolution (strictly increasing, at least three) and
/// classifies every tracked quantity.
StudyReport refinement_study(const StudyCase& study, const std::vector<std::size_t>& resolutions);

}  // namespace varlp

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "varlp/exponents.hpp"

namespace varlp {

struct OperatorOutput {
  PointFunction values;
  std::optional<double> truncation_eps;
  std::size_t skipped = 0;  // kernel terms dropped as singular or non-finite
};

/// v(x) * sum over r(y) < r(x) of f w mu. Zero at the basepoint.
OperatorOutput hardy_T(const DiscreteSpace& space, const PointFunction& v, const PointFunction& w,
                       const PointFunction& f);
/// v(x) * sum over r(y) > r(x) of f w mu.
OperatorOutput hardy_T_prime(const DiscreteSpace& space, const PointFunction& v,
                             const PointFunction& w, const PointFunction& f);

/// Centered maximal function: largest average of |f| over the open balls
/// B(x, r), r running over the gaps between distinct distances from x and
/// one radius beyond the farthest point.
OperatorOutput maximal_M(const DiscreteSpace& space, const PointFunction& f);

/// sum over y != x of f(y) mu B(x, d(x,y))^{alpha(x)-1} mu(y).
OperatorOutput potential_T_alpha(const DiscreteSpace& space, const PointFunction& alpha,
                                 const PointFunction& f);
/// sum over y != x of f(y) d(x,y)^{alpha(x)-1} mu(y).
OperatorOutput potential_I_alpha(const DiscreteSpace& space, const PointFunction& alpha,
                                 const PointFunction& f);

struct KernelSpec {
  std::string type;  // "hilbert", "power-dist", "explicit-table", or user-defined
  std::function<double(PointId, PointId)> eval;
  std::string omega_type;  // "power" or "table"
  std::function<double(double)> omega;
  double cz_c = 1.0;
  double s = 2.0;
  double exponent = 1.0;  // power-dist only
  double omega_power = 1.0;

  /// k(x,y) = 1/(x - y) on a coordinate space.
  static KernelSpec hilbert(const DiscreteSpace& space);
  /// k(x,y) = d(x,y)^{-exponent}.
  static KernelSpec power_dist(const DiscreteSpace& space, double exponent);
  /// Row-major n x n table; the diagonal is never read.
  static KernelSpec table(std::size_t n, std::vector<double> values);

  KernelSpec& with_power_omega(double a);
  /// Piecewise-linear interpolation through (t, omega) knots with increasing
  /// t, constant beyond the end knots.
  KernelSpec& with_table_omega(std::vector<std::pair<double, double>> knots);
};

/// Symmetric truncation: sum over d(x,y) > eps of k(x,y) f(y) mu(y).
OperatorOutput singular_K(const DiscreteSpace& space, const KernelSpec& kernel,
                          const PointFunction& f, double eps);

struct KernelConstants {
  double size_c = 0.0;
  double smooth_c = 0.0;
  double dini_sum = 0.0;
  double delta2_c = 0.0;  // sup omega(2t)/omega(t) over t = 2^-j
  std::size_t smooth_samples = 0;
};

/// size_c = sup |k(x,y)| mu B(x, d(x,y)) over sampled pairs;
/// smooth_c = sup (|k(x1,y)-k(x2,y)| + |k(y,x1)-k(y,x2)|) mu B(x2, d(x2,y)) /
/// omega(d(x2,x1)/d(x2,y)) over sampled triples with d(x2,y) >= 2 a1 d(x1,x2);
/// dini_sum = sum_{j=1..40} omega(2^-j) ln 2.
KernelConstants kernel_cz_check(const DiscreteSpace& space, const KernelSpec& kernel,
                                std::size_t sample_pairs, unsigned long long seed = 0,
                                double a1 = 1.0);

/// Dense kernel matrix with entries A(x,y) such that (Op f)(x) = sum_y A(x,y) f(y),
/// i.e. already multiplied by mu(y) and the operator weights.
using DenseMatrix = std::vector<std::vector<double>>;

DenseMatrix hardy_matrix(const DiscreteSpace& space, const PointFunction& v,
                         const PointFunction& w);
DenseMatrix hardy_prime_matrix(const DiscreteSpace& space, const PointFunction& v,
                               const PointFunction& w);
DenseMatrix potential_T_matrix(const DiscreteSpace& space, const PointFunction& alpha);
DenseMatrix potential_I_matrix(const DiscreteSpace& space, const PointFunction& alpha);

PointFunction apply(const DenseMatrix& a, const PointFunction& f);

}  // namespace varlp

#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace varlp {

using PointId = std::size_t;
using PointSet = std::vector<PointId>;

/// Raised when an input violates a documented precondition. `witness`
/// names the offending point, pair or parameter.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(const std::string& what, std::string witness)
      : std::invalid_argument(what + " [" + witness + "]"), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

/// A finite quasimetric measure space: points, a distance (coordinates with
/// |x-y|^power, or an explicit row-major table), positive point masses and a
/// basepoint x0.
///
/// The discrete space is a quadrature of a non-atomic space; the point masses
/// are quadrature weights.
class DiscreteSpace {
 public:
  /// One-dimensional coordinates with d(x,y) = |x-y|^dist_power.
  DiscreteSpace(std::vector<double> coords, std::vector<double> mu, PointId basepoint,
                double dist_power = 1.0);
  /// Explicit n x n distance table, row-major, dist(x,y) = table[x*n+y].
  DiscreteSpace(std::size_t n, std::vector<double> dist_table, std::vector<double> mu,
                PointId basepoint);

  /// Nodes i/cells on [0,1], i = 0..cells, trapezoid weights (1/cells inside,
  /// 1/(2 cells) at the two ends), basepoint 0.
  static DiscreteSpace uniform_grid(std::size_t cells, double dist_power = 1.0);
  /// Left endpoints of the 2^depth intervals of the middle-thirds construction,
  /// each of mass 2^-depth, basepoint 0.
  static DiscreteSpace cantor(int depth);

  std::size_t size() const noexcept { return mu_.size(); }
  double dist(PointId x, PointId y) const;
  double mu(PointId x) const { return mu_[x]; }
  std::span<const double> measures() const noexcept { return mu_; }
  double total_measure() const noexcept { return total_; }
  PointId basepoint() const noexcept { return x0_; }
  /// d(x0, y).
  double radius(PointId y) const { return dist(x0_, y); }

  /// Computational diameter L (max pairwise distance unless overridden).
  double diameter() const noexcept { return diameter_; }
  void set_diameter(double L);

  /// Marks the space as a truncation of an infinite-diameter space; exponent
  /// fields must then be constant beyond `tail_radius` from x0.
  void set_infinite_model(double tail_radius);
  bool models_infinite_diameter() const noexcept { return infinite_; }
  double tail_radius() const noexcept { return tail_radius_; }

  const std::optional<std::vector<double>>& coords() const noexcept { return coords_; }
  double dist_power() const noexcept { return power_; }
  bool has_table() const noexcept { return !table_.empty(); }
  bool sorted_line() const noexcept { return sorted_line_; }

  void check_point(PointId x) const;

 private:
  void finish_construction();

  std::optional<std::vector<double>> coords_;
  std::vector<double> table_;
  std::vector<double> mu_;
  double power_ = 1.0;
  PointId x0_ = 0;
  double total_ = 0.0;
  double diameter_ = 0.0;
  bool infinite_ = false;
  bool sorted_line_ = false;
  double tail_radius_ = std::numeric_limits<double>::infinity();
};

/// Points grouped into shells of equal distance from a center, in
/// increasing order. Shell k has radius radii[k]; the open ball of radius
/// radii[k] is the union of shells 0..k-1.
struct Shells {
  PointId center = 0;
  std::vector<PointId> order;
  std::vector<double> radii;
  std::vector<std::size_t> begin;      // size radii.size()+1, offsets into order
  std::vector<std::size_t> shell_of;   // indexed by point id
  std::vector<double> closed_measure;  // mu of shells 0..k
  std::size_t shell_count() const noexcept { return radii.size(); }
  double open_measure(std::size_t k) const { return k == 0 ? 0.0 : closed_measure[k - 1]; }
  /// Midpoints between consecutive radii: the radii at which no point sits on
  /// the sphere.
  std::vector<double> gaps() const;
};

Shells shells_around(const DiscreteSpace& space, PointId center);

/// Per point y, mu B(x0, d(x0,y)) (open ball).
std::vector<double> basepoint_ball_measures(const DiscreteSpace& space);

struct BallView {
  PointId center = 0;
  double radius = 0.0;
  PointSet members;
  double measure = 0.0;
};

BallView ball(const DiscreteSpace& space, PointId center, double radius, bool closed = false);

struct GeometryReport {
  double a0 = 1.0;
  double a1 = 1.0;
  std::pair<PointId, PointId> a0_witness{0, 0};
  std::array<PointId, 3> a1_witness{0, 0, 0};
  bool a1_sampled = false;
  double doubling_c = 1.0;
  double rdc_A = 2.0;
  double rdc_B = 1.0;
  double ahlfors_upper_c1 = 0.0;
  double ahlfors_lower_c2 = 0.0;
  double ahlfors_exponent = 1.0;
  bool annuli_nonempty = false;
};

struct QuasiConstants {
  double a0 = 1.0;
  double a1 = 1.0;
  std::pair<PointId, PointId> a0_witness{0, 0};
  std::array<PointId, 3> a1_witness{0, 0, 0};
  bool sampled = false;
};

/// a0 = max d(x,y)/d(y,x); a1 = max d(x,y)/(d(x,z)+d(z,y)). Exhaustive for
/// n <= 512, otherwise 10^6 seeded random triples.
QuasiConstants quasi_constants(const DiscreteSpace& space, unsigned long long seed = 0);

struct DoublingReport {
  double doubling_c = 1.0;
  double rdc_B = std::numeric_limits<double>::infinity();
  std::pair<PointId, double> doubling_witness{0, 0.0};
  std::pair<PointId, double> rdc_witness{0, 0.0};
  std::size_t swept = 0;
  std::size_t skipped = 0;
};

/// Sweeps balls B(x, r) at every center, r over the gaps between consecutive
/// distinct distances with r <= L/A, skipping the ball that holds only its
/// center. Throws std::domain_error when nothing can
/// be swept (a single point, say).
DoublingReport doubling_reverse_doubling(const DiscreteSpace& space, double A = 2.0);

struct AhlforsReport {
  double c1 = 0.0;
  double c2 = std::numeric_limits<double>::infinity();
  std::size_t swept = 0;
  std::string diagnostics;
};

AhlforsReport ahlfors_regularity(const DiscreteSpace& space, double exponent_q);

/// Every center: consecutive distinct distances grow by at most a factor A, so
/// annuli B(x,Ar) \ B(x,r) above the finest scale are nonempty.
bool annuli_nonempty(const DiscreteSpace& space, double A);

GeometryReport geometry_constants(const DiscreteSpace& space, double A = 2.0,
                                  double ahlfors_q = 1.0);

enum class ScaleBranch { finite_diameter, infinite_diameter };

struct PartitionSets {
  PointSet inner, middle, outer, annulus;
  bool degenerate = false;  // every set is empty or all of X
};

/// Scale-k layers around the basepoint with s = L (finite branch) or 1:
/// inner r < A^{k-1}s/a1, middle A^{k-1}s/a1 <= r <= A^{k+2}a1 s,
/// outer r >= A^{k+2}a1 s, annulus A^k s <= r <= A^{k+1}s.
PartitionSets partition_sets(const DiscreteSpace& space, double A, int k, double a1,
                             ScaleBranch branch = ScaleBranch::finite_diameter);

struct FSet {
  PointSet members;
  bool degenerate = false;
};

/// Points y with s r(x)/(A^2 a1) <= r(y) <= A^2 a1 s r(x), r = d(x0,.), s = L on
/// the finite-diameter branch and 1 otherwise.
FSet set_F(const DiscreteSpace& space, PointId x, double A, double a1,
           ScaleBranch branch = ScaleBranch::infinite_diameter);

/// Integral of (mu B_{x0 y})^beta over X \ B(x0, r).
double tail_power_integral(const DiscreteSpace& space, double beta, double r);

struct ShellRatio {
  int k = 0;
  double ratio = 0.0;  // mu(annulus_k) / mu B(x0, A^k L)
};

/// Annulus-to-ball measure ratio at every scale k <= -1 where the annulus is
/// nonempty and the ball holds more than the basepoint.
std::vector<ShellRatio> annulus_ball_ratios(const DiscreteSpace& space, double A);

}  // namespace varlp

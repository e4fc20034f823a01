#include "varlp/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace varlp {

namespace {

bool same_radius(double a, double b) { return b <= a * (1.0 + 1e-12); }

}  // namespace

DiscreteSpace::DiscreteSpace(std::vector<double> coords, std::vector<double> mu,
                             PointId basepoint, double dist_power)
    : coords_(std::move(coords)), mu_(std::move(mu)), power_(dist_power), x0_(basepoint) {
  if (coords_->size() != mu_.size())
    throw std::invalid_argument("coordinate and measure lists differ in length");
  if (!(power_ > 0.0)) throw std::invalid_argument("distance power must be positive");
  sorted_line_ = std::is_sorted(coords_->begin(), coords_->end());
  finish_construction();
}

DiscreteSpace::DiscreteSpace(std::size_t n, std::vector<double> dist_table, std::vector<double> mu,
                             PointId basepoint)
    : table_(std::move(dist_table)), mu_(std::move(mu)), x0_(basepoint) {
  if (mu_.size() != n || table_.size() != n * n)
    throw std::invalid_argument("distance table must be n x n with n measures");
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      double d = table_[x * n + y];
      if (!std::isfinite(d) || d < 0.0)
        throw PreconditionError("distances must be finite and nonnegative",
                                std::to_string(x) + "," + std::to_string(y));
      if ((x == y) != (d == 0.0))
        throw PreconditionError("dist(x,y) = 0 must hold iff x = y",
                                std::to_string(x) + "," + std::to_string(y));
    }
  finish_construction();
}

void DiscreteSpace::finish_construction() {
  if (mu_.empty()) throw std::invalid_argument("a space needs at least one point");
  for (std::size_t i = 0; i < mu_.size(); ++i)
    if (!(mu_[i] > 0.0) || !std::isfinite(mu_[i]))
      throw PreconditionError("point measures must be positive and finite", std::to_string(i));
  check_point(x0_);
  total_ = std::accumulate(mu_.begin(), mu_.end(), 0.0);
  if (coords_) {
    auto [lo, hi] = std::minmax_element(coords_->begin(), coords_->end());
    diameter_ = std::pow(*hi - *lo, power_);
    std::vector<double> sorted = *coords_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw PreconditionError("coincident coordinates give dist(x,y) = 0 with x != y",
                              "coords");
  } else {
    diameter_ = *std::max_element(table_.begin(), table_.end());
  }
}

DiscreteSpace DiscreteSpace::uniform_grid(std::size_t cells, double dist_power) {
  if (cells == 0) throw std::invalid_argument("grid needs at least one cell");
  std::vector<double> coords(cells + 1), mu(cells + 1, 1.0 / static_cast<double>(cells));
  for (std::size_t i = 0; i <= cells; ++i)
    coords[i] = static_cast<double>(i) / static_cast<double>(cells);
  mu.front() *= 0.5;
  mu.back() *= 0.5;
  return DiscreteSpace(std::move(coords), std::move(mu), 0, dist_power);
}

DiscreteSpace DiscreteSpace::cantor(int depth) {
  if (depth < 0 || depth > 20) throw std::invalid_argument("cantor depth must lie in [0, 20]");
  const std::size_t count = std::size_t{1} << depth;
  const double scale = std::pow(3.0, depth);
  std::vector<double> coords(count), mu(count, 1.0 / static_cast<double>(count));
  for (std::size_t m = 0; m < count; ++m) {
    // binary digits of m select the left (0) or right (2) third, most
    // significant digit first
    double ternary = 0.0;
    for (int j = 0; j < depth; ++j)
      if ((m >> (depth - 1 - j)) & 1U) ternary += 2.0 * std::pow(3.0, depth - 1 - j);
    coords[m] = ternary / scale;
  }
  return DiscreteSpace(std::move(coords), std::move(mu), 0, 1.0);
}

double DiscreteSpace::dist(PointId x, PointId y) const {
  if (coords_) {
    double d = std::abs((*coords_)[x] - (*coords_)[y]);
    return power_ == 1.0 ? d : std::pow(d, power_);
  }
  return table_[x * mu_.size() + y];
}

void DiscreteSpace::set_diameter(double L) {
  if (!(L > 0.0)) throw std::invalid_argument("diameter must be positive");
  diameter_ = L;
}

void DiscreteSpace::set_infinite_model(double tail_radius) {
  if (!(tail_radius > 0.0)) throw std::invalid_argument("tail radius must be positive");
  infinite_ = true;
  tail_radius_ = tail_radius;
}

void DiscreteSpace::check_point(PointId x) const {
  if (x >= mu_.size()) throw std::domain_error("invalid point id " + std::to_string(x));
}

std::vector<double> Shells::gaps() const {
  std::vector<double> out;
  out.reserve(radii.size());
  for (std::size_t k = 0; k + 1 < radii.size(); ++k) out.push_back(0.5 * (radii[k] + radii[k + 1]));
  return out;
}

Shells shells_around(const DiscreteSpace& space, PointId center) {
  space.check_point(center);
  const std::size_t n = space.size();
  Shells s;
  s.center = center;
  s.order.reserve(n);
  std::vector<double> d(n);
  if (space.sorted_line()) {
    // merge the two sides of the center on a sorted line
    s.order.push_back(center);
    std::size_t left = center, right = center + 1;
    while (left > 0 || right < n) {
      if (left == 0) {
        s.order.push_back(right++);
      } else if (right == n) {
        s.order.push_back(--left);
      } else if (space.dist(center, left - 1) <= space.dist(center, right)) {
        s.order.push_back(--left);
      } else {
        s.order.push_back(right++);
      }
    }
    for (PointId y : s.order) d[y] = space.dist(center, y);
  } else {
    for (PointId y = 0; y < n; ++y) d[y] = space.dist(center, y);
    s.order.resize(n);
    std::iota(s.order.begin(), s.order.end(), PointId{0});
    std::stable_sort(s.order.begin(), s.order.end(),
                     [&](PointId a, PointId b) { return d[a] < d[b]; });
  }
  s.shell_of.assign(n, 0);
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    PointId y = s.order[i];
    if (s.radii.empty() || !same_radius(s.radii.back(), d[y])) {
      if (!s.radii.empty()) s.closed_measure.push_back(running);
      s.radii.push_back(d[y]);
      s.begin.push_back(i);
    }
    s.shell_of[y] = s.radii.size() - 1;
    running += space.mu(y);
  }
  s.closed_measure.push_back(running);
  s.begin.push_back(n);
  return s;
}

std::vector<double> basepoint_ball_measures(const DiscreteSpace& space) {
  Shells s = shells_around(space, space.basepoint());
  std::vector<double> out(space.size());
  for (PointId y = 0; y < space.size(); ++y) out[y] = s.open_measure(s.shell_of[y]);
  return out;
}

BallView ball(const DiscreteSpace& space, PointId center, double radius, bool closed) {
  space.check_point(center);
  if (radius < 0.0) throw std::domain_error("ball radius must be nonnegative");
  BallView b{center, radius, {}, 0.0};
  for (PointId y = 0; y < space.size(); ++y) {
    double d = space.dist(center, y);
    if (d < radius || (closed && d == radius)) {
      b.members.push_back(y);
      b.measure += space.mu(y);
    }
  }
  return b;
}

QuasiConstants quasi_constants(const DiscreteSpace& space, unsigned long long seed) {
  const std::size_t n = space.size();
  QuasiConstants q;
  for (PointId x = 0; x < n; ++x)
    for (PointId y = 0; y < n; ++y) {
      if (x == y) continue;
      const double ratio = space.dist(x, y) / space.dist(y, x);
      if (ratio > q.a0) {
        q.a0 = ratio;
        q.a0_witness = {x, y};
      }
    }
  if (n < 2) return q;
  q.a1 = 1.0;  // attained at z = x
  q.a1_witness = {0, 1, 0};
  auto probe = [&](PointId x, PointId y, PointId z) {
    double ratio = space.dist(x, y) / (space.dist(x, z) + space.dist(z, y));
    if (ratio > q.a1) {
      q.a1 = ratio;
      q.a1_witness = {x, y, z};
    }
  };
  if (n <= 512) {
    std::vector<double> table(n * n);
    for (PointId x = 0; x < n; ++x)
      for (PointId y = 0; y < n; ++y) table[x * n + y] = space.dist(x, y);
    for (PointId x = 0; x < n; ++x)
      for (PointId y = 0; y < n; ++y) {
        if (x == y) continue;
        const double dxy = table[x * n + y];
        for (PointId z = 0; z < n; ++z) {
          double ratio = dxy / (table[x * n + z] + table[z * n + y]);
          if (ratio > q.a1) {
            q.a1 = ratio;
            q.a1_witness = {x, y, z};
          }
        }
      }
  } else {
    q.sampled = true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<PointId> pick(0, n - 1);
    for (int t = 0; t < 1'000'000; ++t) {
      PointId x = pick(rng), y = pick(rng), z = pick(rng);
      if (x != y) probe(x, y, z);
    }
  }
  return q;
}

DoublingReport doubling_reverse_doubling(const DiscreteSpace& space, double A) {
  if (!(A > 1.0)) throw std::domain_error("reverse doubling needs A > 1");
  DoublingReport rep;
  const double rmax = space.diameter() / A;
  for (PointId x = 0; x < space.size(); ++x) {
    Shells s = shells_around(space, x);
    const auto gaps = s.gaps();
    std::size_t j2 = 0, jA = 0;
    for (std::size_t k = 0; k < gaps.size(); ++k) {
      const double r = gaps[k];
      if (r > rmax) break;
      const double inner = s.closed_measure[k];
      // k = 0 is the center atom alone, an artifact of the discretization.
      if (k == 0 || !(inner > 0.0)) {
        ++rep.skipped;
        continue;
      }
      while (j2 + 1 < s.shell_count() && s.radii[j2 + 1] < 2.0 * r) ++j2;
      while (jA + 1 < s.shell_count() && s.radii[jA + 1] < A * r) ++jA;
      const double dbl = s.closed_measure[j2] / inner;
      const double rdc = s.closed_measure[jA] / inner;
      if (dbl > rep.doubling_c) {
        rep.doubling_c = dbl;
        rep.doubling_witness = {x, r};
      }
      if (rdc < rep.rdc_B) {
        rep.rdc_B = rdc;
        rep.rdc_witness = {x, r};
      }
      ++rep.swept;
    }
  }
  if (rep.swept == 0) throw std::domain_error("no ball could be swept: degenerate space");
  return rep;
}

AhlforsReport ahlfors_regularity(const DiscreteSpace& space, double exponent_q) {
  if (!(exponent_q > 0.0)) throw std::domain_error("Ahlfors exponent must be positive");
  AhlforsReport rep;
  const double L = space.diameter();
  auto take = [&](double mass, double r) {
    const double ratio = mass / std::pow(r, exponent_q);
    rep.c1 = std::max(rep.c1, ratio);
    rep.c2 = std::min(rep.c2, ratio);
    ++rep.swept;
  };
  std::size_t sparse_centers = 0;
  for (PointId x = 0; x < space.size(); ++x) {
    Shells s = shells_around(space, x);
    const auto gaps = s.gaps();
    const std::size_t before = rep.swept;
    for (std::size_t k = 0; k < gaps.size() && gaps[k] <= L; ++k) take(s.closed_measure[k], gaps[k]);
    if (L > 0.0) {
      std::size_t j = 0;
      while (j + 1 < s.shell_count() && s.radii[j + 1] < L) ++j;
      take(s.closed_measure[j], L);
    }
    if (rep.swept - before < 3) ++sparse_centers;
  }
  if (sparse_centers > 0)
    rep.diagnostics = "sparse sweep: " + std::to_string(sparse_centers) +
                      " centers with fewer than three radii";
  return rep;
}

bool annuli_nonempty(const DiscreteSpace& space, double A) {
  for (PointId x = 0; x < space.size(); ++x) {
    Shells s = shells_around(space, x);
    for (std::size_t k = 1; k + 1 < s.shell_count(); ++k)
      if (s.radii[k + 1] > A * s.radii[k]) return false;
  }
  return true;
}

GeometryReport geometry_constants(const DiscreteSpace& space, double A, double ahlfors_q) {
  GeometryReport g;
  QuasiConstants q = quasi_constants(space);
  g.a0 = q.a0;
  g.a1 = q.a1;
  g.a0_witness = q.a0_witness;
  g.a1_witness = q.a1_witness;
  g.a1_sampled = q.sampled;
  g.rdc_A = A;
  try {
    DoublingReport d = doubling_reverse_doubling(space, A);
    g.doubling_c = d.doubling_c;
    g.rdc_B = d.rdc_B;
  } catch (const std::domain_error&) {
    g.doubling_c = std::numeric_limits<double>::quiet_NaN();
    g.rdc_B = std::numeric_limits<double>::quiet_NaN();
  }
  AhlforsReport a = ahlfors_regularity(space, ahlfors_q);
  g.ahlfors_upper_c1 = a.c1;
  g.ahlfors_lower_c2 = a.c2;
  g.ahlfors_exponent = ahlfors_q;
  g.annuli_nonempty = annuli_nonempty(space, A);
  return g;
}

namespace {

// Boundary radii come out of products like A^k L that round differently from
// the grid coordinates; a point within this relative distance of a sphere is
// taken to lie on it.
constexpr double kSphereTol = 1e-12;
bool on_or_above(double r, double bound) { return r >= bound * (1.0 - kSphereTol); }
bool on_or_below(double r, double bound) { return r <= bound * (1.0 + kSphereTol); }

}  // namespace

PartitionSets partition_sets(const DiscreteSpace& space, double A, int k, double a1,
                             ScaleBranch branch) {
  if (!(A > 1.0)) throw std::domain_error("partition sets need A > 1");
  if (!(a1 > 0.0)) throw std::domain_error("quasi-triangle constant must be positive");
  const double s = branch == ScaleBranch::finite_diameter ? space.diameter() : 1.0;
  const double inner = std::pow(A, k - 1) * s / a1;
  const double outer = std::pow(A, k + 2) * a1 * s;
  const double e_lo = std::pow(A, k) * s, e_hi = std::pow(A, k + 1) * s;
  PartitionSets out;
  for (PointId y = 0; y < space.size(); ++y) {
    const double r = space.radius(y);
    if (!on_or_above(r, inner)) out.inner.push_back(y);
    if (on_or_above(r, inner) && on_or_below(r, outer)) out.middle.push_back(y);
    if (on_or_above(r, outer)) out.outer.push_back(y);
    if (on_or_above(r, e_lo) && on_or_below(r, e_hi)) out.annulus.push_back(y);
  }
  auto trivial = [&](const PointSet& p) { return p.empty() || p.size() == space.size(); };
  out.degenerate = trivial(out.inner) && trivial(out.middle) && trivial(out.outer) &&
                   trivial(out.annulus);
  return out;
}

FSet set_F(const DiscreteSpace& space, PointId x, double A, double a1, ScaleBranch branch) {
  space.check_point(x);
  if (!(A > 1.0)) throw std::domain_error("F_x needs A > 1");
  const double s = branch == ScaleBranch::finite_diameter ? space.diameter() : 1.0;
  const double rx = space.radius(x);
  const double lo = s * rx / (A * A * a1), hi = A * A * a1 * s * rx;
  FSet f;
  f.degenerate = rx == 0.0;
  for (PointId y = 0; y < space.size(); ++y) {
    const double r = space.radius(y);
    if (on_or_above(r, lo) && on_or_below(r, hi)) f.members.push_back(y);
  }
  return f;
}

double tail_power_integral(const DiscreteSpace& space, double beta, double r) {
  const auto ball_mu = basepoint_ball_measures(space);
  double sum = 0.0;
  for (PointId y = 0; y < space.size(); ++y)
    if (space.radius(y) >= r && ball_mu[y] > 0.0) sum += std::pow(ball_mu[y], beta) * space.mu(y);
  return sum;
}

std::vector<ShellRatio> annulus_ball_ratios(const DiscreteSpace& space, double A) {
  if (!(A > 1.0)) throw std::domain_error("annulus ratios need A > 1");
  const double L = space.diameter();
  double rmin = std::numeric_limits<double>::infinity();
  for (PointId y = 0; y < space.size(); ++y)
    if (space.radius(y) > 0.0) rmin = std::min(rmin, space.radius(y));
  std::vector<ShellRatio> out;
  // k = 0 would be the sphere r = L alone.
  for (int k = -1; std::pow(A, k + 1) * L >= rmin; --k) {
    const double lo = std::pow(A, k) * L, hi = std::pow(A, k + 1) * L;
    double e = 0.0, b = 0.0;
    for (PointId y = 0; y < space.size(); ++y) {
      const double r = space.radius(y);
      if (on_or_above(r, lo) && on_or_below(r, hi)) e += space.mu(y);
      if (!on_or_above(r, lo)) b += space.mu(y);
    }
    // A ball holding only the basepoint atom says nothing about the scale.
    if (e > 0.0 && b > space.mu(space.basepoint())) out.push_back({k, e / b});
  }
  return out;
}

}  // namespace varlp

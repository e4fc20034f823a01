#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace varlp {

/// Behaviour of a quantity under grid refinement.
enum class Trend { bounded, divergent, undecided };

inline std::string_view to_string(Trend t) {
  switch (t) {
    case Trend::bounded: return "bounded";
    case Trend::divergent: return "divergent";
    case Trend::undecided: return "undecided";
  }
  return "undecided";
}

/// Ratio of consecutive refinement values; 0/0 counts as flat, x/0 as growth.
inline double refinement_ratio(double coarse, double fine) {
  if (!std::isfinite(fine)) return std::numeric_limits<double>::infinity();
  if (coarse == 0.0) return fine == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return fine / coarse;
}

/// values[i] is taken at the i-th (increasing) resolution. The last step
/// decides "bounded" (ratio <= 1.25); "divergent" needs ratio >= 2 on each of
/// the last two steps.
inline Trend classify_trend(std::span<const double> values) {
  if (values.size() < 2) return Trend::undecided;
  for (double v : values)
    if (!std::isfinite(v)) return Trend::divergent;
  const std::size_t m = values.size();
  const double last = refinement_ratio(values[m - 2], values[m - 1]);
  if (last <= 1.25) return Trend::bounded;
  if (m >= 3 && last >= 2.0 && refinement_ratio(values[m - 3], values[m - 2]) >= 2.0)
    return Trend::divergent;
  return Trend::undecided;
}

inline Trend classify_trend(const std::vector<double>& values) {
  return classify_trend(std::span<const double>(values));
}

}  // namespace varlp

#pragma once

#include <array>
#include <string>

namespace firesl {

// Seven-level ordinal burn severity scale. The order below is the total
// order used everywhere (comparisons, accuracy tables).
enum class SeverityCategory : int {
  HighEnhancedGrowth = 0,
  LowEnhancedRegrowth = 1,
  Unburned = 2,
  Low = 3,
  ModerateLow = 4,
  ModerateHigh = 5,
  High = 6,
};

inline constexpr int kSeverityCount = 7;

const std::string& severity_name(SeverityCategory c);
SeverityCategory severity_from_name(const std::string& name);

// Normalized burn ratio (NIR - SWIR) / (NIR + SWIR).
double nbr(double nir, double swir);

// Scaled differenced NBR: 1000 * (pre - post).
double dnbr(double nbr_pre, double nbr_post);

// Bins a continuous dNBR value into its severity category. Boundaries sit at
// the midpoints between the integer interval endpoints (-250.5, -100.5,
// 99.5, 269.5, 439.5, 659.5); values beyond the extreme intervals clamp into
// the extreme categories.
SeverityCategory categorize(double dnbr_value);

}  // namespace firesl

#include "firesl/severity.hpp"

#include <array>
#include <cmath>

#include "firesl/errors.hpp"
#include "firesl/text.hpp"

namespace firesl {

namespace {

const std::array<std::string, kSeverityCount> kNames = {
    "high_enhanced_growth", "low_enhanced_regrowth", "unburned", "low",
    "moderate_low",         "moderate_high",         "high"};

// Upper (exclusive) boundary of each category except the last.
constexpr std::array<double, kSeverityCount - 1> kUpper = {
    -250.5, -100.5, 99.5, 269.5, 439.5, 659.5};

}  // namespace

const std::string& severity_name(SeverityCategory c) {
  return kNames[static_cast<int>(c)];
}

SeverityCategory severity_from_name(const std::string& name) {
  for (int i = 0; i < kSeverityCount; ++i)
    if (kNames[i] == name) return static_cast<SeverityCategory>(i);
  throw ParseError("unknown severity category '" + name + "'");
}

double nbr(double nir, double swir) {
  if (!std::isfinite(nir) || !std::isfinite(swir))
    throw NonFinite("nbr: reflectances must be finite");
  const double denom = nir + swir;
  if (denom == 0.0)
    throw DegenerateInput("nbr: nir + swir = 0");
  return (nir - swir) / denom;
}

double dnbr(double nbr_pre, double nbr_post) {
  if (!std::isfinite(nbr_pre) || !std::isfinite(nbr_post))
    throw NonFinite("dnbr: inputs must be finite");
  return 1000.0 * (nbr_pre - nbr_post);
}

SeverityCategory categorize(double dnbr_value) {
  if (!std::isfinite(dnbr_value))
    throw NonFinite("categorize: dNBR value is not finite");
  int i = 0;
  while (i < kSeverityCount - 1 && dnbr_value >= kUpper[i]) ++i;
  return static_cast<SeverityCategory>(i);
}

}  // namespace firesl

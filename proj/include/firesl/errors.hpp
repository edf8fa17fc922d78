#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace firesl {

// All library failures throw Error (or a subclass below). `kind()` is a
// stable machine-parseable class name; what() carries human detail.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define FIRESL_DEFINE_ERROR(Name)                              \
  struct Name : Error {                                        \
    explicit Name(const std::string& detail)                   \
        : Error(#Name, detail) {}                              \
  }

FIRESL_DEFINE_ERROR(DegenerateInput);
FIRESL_DEFINE_ERROR(NonFinite);
FIRESL_DEFINE_ERROR(SchemaMismatch);
FIRESL_DEFINE_ERROR(DuplicateId);
FIRESL_DEFINE_ERROR(ParseError);
FIRESL_DEFINE_ERROR(AllColumnsDropped);
FIRESL_DEFINE_ERROR(InsufficientDonors);
FIRESL_DEFINE_ERROR(EmptySeries);
FIRESL_DEFINE_ERROR(NoOverlap);
FIRESL_DEFINE_ERROR(DegenerateDesign);
FIRESL_DEFINE_ERROR(NotFitted);
FIRESL_DEFINE_ERROR(TooFewRows);
FIRESL_DEFINE_ERROR(ConstantColumn);
FIRESL_DEFINE_ERROR(SingularConditioning);
FIRESL_DEFINE_ERROR(RankDeficientDesign);
FIRESL_DEFINE_ERROR(SingularNeighborhood);
FIRESL_DEFINE_ERROR(EmptyTestSet);
FIRESL_DEFINE_ERROR(NotTreeEnsemble);
FIRESL_DEFINE_ERROR(ConstantCovariate);
FIRESL_DEFINE_ERROR(SizeTooLarge);
FIRESL_DEFINE_ERROR(ConfigError);
FIRESL_DEFINE_ERROR(IoError);

#undef FIRESL_DEFINE_ERROR

}  // namespace firesl

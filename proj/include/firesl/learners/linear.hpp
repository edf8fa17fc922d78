#pragma once

#include "firesl/learners/learner.hpp"

namespace firesl::learn {

// Elastic-net family fit by cyclic coordinate descent on standardized
// covariates with an unpenalized intercept:
//   (1/2n) * ||y - b0 - X b||^2 + penalty * (mixing*|b|_1 + (1-mixing)/2*|b|_2^2)
// mixing 0 = ridge, 1 = lasso.
class PenalizedLinear final : public Learner {
 public:
  PenalizedLinear(std::string type_tag, double penalty, double mixing);

  std::string type() const override { return type_tag_; }
  std::string fingerprint() const override;
  std::unique_ptr<Learner> clone_config() const override;

  const Eigen::VectorXd& coefficients() const { return beta_; }  // standardized scale
  double intercept() const { return intercept_; }

 protected:
  void do_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
              std::uint64_t seed) override;
  Eigen::VectorXd do_predict(const Eigen::MatrixXd& X) const override;
  void save_state(std::ostream& out) const override;
  void load_state(std::istream& in) override;

 private:
  std::string type_tag_;
  double penalty_;
  double mixing_;

  Standardizer scaler_;
  Eigen::VectorXd beta_;
  double intercept_ = 0.0;
};

}  // namespace firesl::learn

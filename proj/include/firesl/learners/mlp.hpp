#pragma once

#include "firesl/learners/learner.hpp"

namespace firesl::learn {

// Fully connected ReLU network with a single linear output, trained by
// mini-batch Adam on squared error. Covariates and response are
// standardized internally (training statistics); a zero-variance response
// short-circuits to predicting the mean exactly.
class MlpRegressor final : public Learner {
 public:
  explicit MlpRegressor(MlpSpec spec);

  std::string type() const override { return "mlp"; }
  std::string fingerprint() const override;
  std::unique_ptr<Learner> clone_config() const override;

  const MlpSpec& spec() const { return spec_; }

 protected:
  void do_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
              std::uint64_t seed) override;
  Eigen::VectorXd do_predict(const Eigen::MatrixXd& X) const override;
  void save_state(std::ostream& out) const override;
  void load_state(std::istream& in) override;

 private:
  Eigen::VectorXd forward(const Eigen::MatrixXd& X) const;

  MlpSpec spec_;
  Standardizer scaler_;
  double y_mean_ = 0.0;
  double y_sd_ = 1.0;
  bool constant_response_ = false;
  std::vector<Eigen::MatrixXd> weights_;  // layer l: out x in
  std::vector<Eigen::VectorXd> biases_;
};

}  // namespace firesl::learn

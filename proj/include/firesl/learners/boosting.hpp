#pragma once

#include "firesl/learners/learner.hpp"
#include "firesl/learners/tree.hpp"

namespace firesl::learn {

// Stagewise gradient boosting on squared error. `second_order` switches to
// regularized second-order leaf weights (-G/(H+lambda)) with split-gain
// threshold gamma; first-order mode is plain residual fitting with mean
// leaves (lambda = gamma = 0).
class GradientBoost final : public Learner {
 public:
  GradientBoost(bool second_order, int n_trees, double shrinkage, int depth,
                double lambda, double gamma);

  std::string type() const override {
    return second_order_ ? "reg_gradient_boost" : "gradient_boost";
  }
  std::string fingerprint() const override;
  std::unique_ptr<Learner> clone_config() const override;

  bool impurity_importances(Eigen::VectorXd& out) const override;
  const std::vector<RegressionTree>& trees() const { return trees_; }

 protected:
  void do_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
              std::uint64_t seed) override;
  Eigen::VectorXd do_predict(const Eigen::MatrixXd& X) const override;
  void save_state(std::ostream& out) const override;
  void load_state(std::istream& in) override;

 private:
  bool second_order_;
  int n_trees_;
  double shrinkage_;
  int depth_;
  double lambda_;
  double gamma_;

  double base_ = 0.0;
  std::vector<RegressionTree> trees_;
};

}  // namespace firesl::learn

#pragma once

#include <memory>

#include "firesl/kdtree.hpp"
#include "firesl/learners/learner.hpp"

namespace firesl::learn {

// k-nearest-neighbor regression on standardized covariates, uniform
// weights. Distance ties resolve to the lower training-row index.
class KnnRegressor final : public Learner {
 public:
  explicit KnnRegressor(int k);

  std::string type() const override { return "knn"; }
  std::string fingerprint() const override;
  std::unique_ptr<Learner> clone_config() const override;

 protected:
  void do_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
              std::uint64_t seed) override;
  Eigen::VectorXd do_predict(const Eigen::MatrixXd& X) const override;
  void save_state(std::ostream& out) const override;
  void load_state(std::istream& in) override;

 private:
  void rebuild_tree();

  int k_;
  Standardizer scaler_;
  Eigen::MatrixXd train_;  // standardized
  Eigen::VectorXd y_;
  std::unique_ptr<KdTree> tree_;
};

}  // namespace firesl::learn

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "firesl/rng.hpp"

namespace firesl::learn {

// Shared regression-tree builder. Trees are grown greedily on a
// second-order objective: each row carries a gradient g and hessian h, a
// leaf takes weight -G/(H + lambda), and a split is kept when
//   0.5 * (G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda)) - gamma
// is positive. With g = -y, h = 1, lambda = gamma = 0 this is exactly CART
// variance-reduction splitting with mean leaves, so one builder serves the
// plain tree, the forests, and both boosting variants.
struct TreeOptions {
  int max_depth = -1;            // -1 = unlimited
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  int max_features = -1;         // per-split subsample; -1 = all
  bool random_thresholds = false;  // one uniform cut per candidate feature
  double lambda = 0.0;
  double gamma = 0.0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  double gain = 0.0;  // split objective improvement
  std::int64_t count = 0;
};

class RegressionTree {
 public:
  // Rows listed in `rows` participate (duplicates allowed — bootstrap).
  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& grad,
           const Eigen::VectorXd& hess, const std::vector<int>& rows,
           const TreeOptions& options, Rng& rng);

  double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;

  // Adds each split's gain to totals[feature].
  void accumulate_gains(Eigen::VectorXd& totals) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }

  void save(std::ostream& out) const;
  void load(std::istream& in);

 private:
  std::vector<TreeNode> nodes_;
};

// Convenience: plain CART fit to a response (g = -y, h = 1).
void fit_cart(RegressionTree& tree, const Eigen::MatrixXd& X,
              const Eigen::VectorXd& y, const std::vector<int>& rows,
              const TreeOptions& options, Rng& rng);

}  // namespace firesl::learn

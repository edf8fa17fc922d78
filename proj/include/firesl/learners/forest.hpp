#pragma once

#include "firesl/learners/learner.hpp"
#include "firesl/learners/tree.hpp"

namespace firesl::learn {

// Averaged tree ensembles: bagging (bootstrap, exact splits, all features),
// random forest (bootstrap, exact splits, p/3 features per split), and
// extremely randomized trees (full sample, one random cut per feature).
class TreeEnsemble final : public Learner {
 public:
  enum class Kind { Bagging, RandomForest, ExtraTrees };

  TreeEnsemble(Kind kind, int n_trees);

  std::string type() const override;
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
  Kind kind_;
  int n_trees_;
  std::vector<RegressionTree> trees_;
};

// Single CART decision tree (variance-reduction splits, unlimited depth by
// default).
class DecisionTree final : public Learner {
 public:
  DecisionTree(int max_depth, int min_samples_split);

  std::string type() const override { return "decision_tree"; }
  std::string fingerprint() const override;
  std::unique_ptr<Learner> clone_config() const override;

  bool impurity_importances(Eigen::VectorXd& out) const override;
  const RegressionTree& tree() const { return tree_; }

 protected:
  void do_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
              std::uint64_t seed) override;
  Eigen::VectorXd do_predict(const Eigen::MatrixXd& X) const override;
  void save_state(std::ostream& out) const override;
  void load_state(std::istream& in) override;

 private:
  int max_depth_;
  int min_samples_split_;
  RegressionTree tree_;
};

}  // namespace firesl::learn

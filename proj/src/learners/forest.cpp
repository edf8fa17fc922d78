#include "firesl/learners/forest.hpp"

#include <istream>
#include <ostream>

#include "firesl/errors.hpp"
#include "firesl/rng.hpp"
#include "firesl/text.hpp"

namespace firesl::learn {

TreeEnsemble::TreeEnsemble(Kind kind, int n_trees)
    : kind_(kind), n_trees_(n_trees) {
  if (n_trees_ < 1) throw ConfigError("ensemble needs trees >= 1");
}

std::string TreeEnsemble::type() const {
  switch (kind_) {
    case Kind::Bagging: return "bagging";
    case Kind::RandomForest: return "random_forest";
    case Kind::ExtraTrees: return "extra_trees";
  }
  return "";
}

std::string TreeEnsemble::fingerprint() const {
  return type() + ";trees=" + std::to_string(n_trees_);
}

std::unique_ptr<Learner> TreeEnsemble::clone_config() const {
  auto c = std::make_unique<TreeEnsemble>(kind_, n_trees_);
  c->set_name(name());
  return c;
}

void TreeEnsemble::do_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          std::uint64_t seed) {
  const Eigen::Index n = X.rows();
  TreeOptions opt;
  if (kind_ == Kind::RandomForest)
    opt.max_features = std::max(1, static_cast<int>(X.cols() / 3));
  if (kind_ == Kind::ExtraTrees) opt.random_thresholds = true;
  const bool bootstrap = kind_ != Kind::ExtraTrees;

  Rng rng(derive_seed(seed, {hash_string(fingerprint())}));
  trees_.assign(static_cast<std::size_t>(n_trees_), RegressionTree{});
  std::vector<int> rows(static_cast<std::size_t>(n));
  for (auto& tree : trees_) {
    if (bootstrap) {
      for (auto& r : rows)
        r = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    } else {
      for (Eigen::Index i = 0; i < n; ++i)
        rows[static_cast<std::size_t>(i)] = static_cast<int>(i);
    }
    fit_cart(tree, X, y, rows, opt, rng);
  }
}

Eigen::VectorXd TreeEnsemble::do_predict(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double first = trees_.front().predict_row(X.row(i));
    double sum = 0.0;
    bool all_equal = true;
    for (const auto& tree : trees_) {
      const double v = tree.predict_row(X.row(i));
      sum += v;
      if (v != first) all_equal = false;
    }
    out(i) = all_equal ? first : sum / static_cast<double>(trees_.size());
  }
  return out;
}

bool TreeEnsemble::impurity_importances(Eigen::VectorXd& out) const {
  out = Eigen::VectorXd::Zero(n_features());
  Eigen::VectorXd per_tree(n_features());
  // Average of per-tree normalized importances.
  for (const auto& tree : trees_) {
    per_tree.setZero();
    tree.accumulate_gains(per_tree);
    const double total = per_tree.sum();
    if (total > 0.0) out += per_tree / total;
  }
  const double total = out.sum();
  if (total > 0.0) out /= total;
  return true;
}

void TreeEnsemble::save_state(std::ostream& out) const {
  out << "kind " << static_cast<int>(kind_) << " ntrees " << trees_.size() << '\n';
  for (const auto& t : trees_) t.save(out);
}

void TreeEnsemble::load_state(std::istream& in) {
  std::string tag;
  int kind = 0;
  std::size_t count = 0;
  in >> tag >> kind >> tag >> count;
  kind_ = static_cast<Kind>(kind);
  trees_.assign(count, RegressionTree{});
  for (auto& t : trees_) t.load(in);
}

DecisionTree::DecisionTree(int max_depth, int min_samples_split)
    : max_depth_(max_depth), min_samples_split_(min_samples_split) {}

std::string DecisionTree::fingerprint() const {
  return "decision_tree;max_depth=" + std::to_string(max_depth_) +
         ";min_samples_split=" + std::to_string(min_samples_split_);
}

std::unique_ptr<Learner> DecisionTree::clone_config() const {
  auto c = std::make_unique<DecisionTree>(max_depth_, min_samples_split_);
  c->set_name(name());
  return c;
}

void DecisionTree::do_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          std::uint64_t seed) {
  TreeOptions opt;
  opt.max_depth = max_depth_;
  opt.min_samples_split = min_samples_split_;
  std::vector<int> rows(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    rows[static_cast<std::size_t>(i)] = static_cast<int>(i);
  Rng rng(derive_seed(seed, {hash_string(fingerprint())}));
  fit_cart(tree_, X, y, rows, opt, rng);
}

Eigen::VectorXd DecisionTree::do_predict(const Eigen::MatrixXd& X) const {
  return tree_.predict(X);
}

bool DecisionTree::impurity_importances(Eigen::VectorXd& out) const {
  out = Eigen::VectorXd::Zero(n_features());
  tree_.accumulate_gains(out);
  const double total = out.sum();
  if (total > 0.0) out /= total;
  return true;
}

void DecisionTree::save_state(std::ostream& out) const {
  out << "max_depth " << max_depth_ << " min_split " << min_samples_split_ << '\n';
  tree_.save(out);
}

void DecisionTree::load_state(std::istream& in) {
  std::string tag;
  in >> tag >> max_depth_ >> tag >> min_samples_split_;
  tree_.load(in);
}

}  // namespace firesl::learn

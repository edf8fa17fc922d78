#include "firesl/learners/boosting.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "firesl/errors.hpp"
#include "firesl/text.hpp"

namespace firesl::learn {

GradientBoost::GradientBoost(bool second_order, int n_trees, double shrinkage,
                             int depth, double lambda, double gamma)
    : second_order_(second_order), n_trees_(n_trees), shrinkage_(shrinkage),
      depth_(depth), lambda_(lambda), gamma_(gamma) {
  if (n_trees_ < 1) throw ConfigError("boosting needs trees >= 1");
  if (!(shrinkage_ > 0.0)) throw ConfigError("shrinkage must be positive");
}

std::string GradientBoost::fingerprint() const {
  std::ostringstream ss;
  ss << (second_order_ ? "reg_gradient_boost" : "gradient_boost")
     << ";trees=" << n_trees_ << ";shrinkage=" << format_double(shrinkage_)
     << ";depth=" << depth_;
  if (second_order_)
    ss << ";lambda=" << format_double(lambda_) << ";gamma=" << format_double(gamma_);
  return ss.str();
}

std::unique_ptr<Learner> GradientBoost::clone_config() const {
  auto c = std::make_unique<GradientBoost>(second_order_, n_trees_, shrinkage_,
                                           depth_, lambda_, gamma_);
  c->set_name(name());
  return c;
}

void GradientBoost::do_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           std::uint64_t seed) {
  const Eigen::Index n = X.rows();
  // Exact base score for a constant response (no rounding drift).
  base_ = (y.minCoeff() == y.maxCoeff()) ? y(0) : y.mean();

  TreeOptions opt;
  opt.max_depth = depth_;
  opt.lambda = second_order_ ? lambda_ : 0.0;
  opt.gamma = second_order_ ? gamma_ : 0.0;

  std::vector<int> rows(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = static_cast<int>(i);

  Eigen::VectorXd pred = Eigen::VectorXd::Constant(n, base_);
  const Eigen::VectorXd hess = Eigen::VectorXd::Ones(n);
  Rng rng(derive_seed(seed, {hash_string(fingerprint())}));

  trees_.clear();
  trees_.reserve(static_cast<std::size_t>(n_trees_));
  for (int t = 0; t < n_trees_; ++t) {
    // Squared-error loss: g = pred - y, h = 1 for both modes; modes differ
    // only in the leaf/gain regularization inside the tree.
    const Eigen::VectorXd grad = pred - y;
    RegressionTree tree;
    tree.fit(X, grad, hess, rows, opt, rng);
    for (Eigen::Index i = 0; i < n; ++i)
      pred(i) += shrinkage_ * tree.predict_row(X.row(i));
    trees_.push_back(std::move(tree));
  }
}

Eigen::VectorXd GradientBoost::do_predict(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), base_);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double acc = 0.0;
    for (const auto& tree : trees_) acc += tree.predict_row(X.row(i));
    out(i) += shrinkage_ * acc;
  }
  return out;
}

bool GradientBoost::impurity_importances(Eigen::VectorXd& out) const {
  out = Eigen::VectorXd::Zero(n_features());
  for (const auto& tree : trees_) tree.accumulate_gains(out);
  const double total = out.sum();
  if (total > 0.0) out /= total;
  return true;
}

void GradientBoost::save_state(std::ostream& out) const {
  out << "config " << (second_order_ ? 1 : 0) << ' ' << n_trees_ << ' '
      << format_double(shrinkage_) << ' ' << depth_ << ' '
      << format_double(lambda_) << ' ' << format_double(gamma_) << '\n';
  out << "base " << format_double(base_) << '\n';
  out << "ntrees " << trees_.size() << '\n';
  for (const auto& t : trees_) t.save(out);
}

void GradientBoost::load_state(std::istream& in) {
  std::string tag;
  int so = 0;
  in >> tag >> so >> n_trees_ >> shrinkage_ >> depth_ >> lambda_ >> gamma_;
  second_order_ = so != 0;
  in >> tag >> base_;
  std::size_t count = 0;
  in >> tag >> count;
  if (tag != "ntrees") throw ParseError("expected 'ntrees'");
  trees_.assign(count, RegressionTree{});
  for (auto& t : trees_) t.load(in);
}

}  // namespace firesl::learn

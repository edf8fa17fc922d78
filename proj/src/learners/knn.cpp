#include "firesl/learners/knn.hpp"

#include <istream>
#include <ostream>

#include "firesl/errors.hpp"
#include "firesl/text.hpp"

namespace firesl::learn {

KnnRegressor::KnnRegressor(int k) : k_(k) {
  if (k_ < 1) throw ConfigError("knn needs k >= 1");
}

std::string KnnRegressor::fingerprint() const {
  return "knn;k=" + std::to_string(k_);
}

std::unique_ptr<Learner> KnnRegressor::clone_config() const {
  auto c = std::make_unique<KnnRegressor>(k_);
  c->set_name(name());
  return c;
}

void KnnRegressor::rebuild_tree() {
  std::vector<double> pts(static_cast<std::size_t>(train_.size()));
  for (Eigen::Index i = 0; i < train_.rows(); ++i)
    for (Eigen::Index j = 0; j < train_.cols(); ++j)
      pts[static_cast<std::size_t>(i * train_.cols() + j)] = train_(i, j);
  tree_ = std::make_unique<KdTree>(static_cast<std::size_t>(train_.cols()), pts);
}

void KnnRegressor::do_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          std::uint64_t) {
  scaler_.fit(X);
  train_ = scaler_.transform(X);
  y_ = y;
  rebuild_tree();
}

Eigen::VectorXd KnnRegressor::do_predict(const Eigen::MatrixXd& X) const {
  const Eigen::MatrixXd Q = scaler_.transform(X);
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_),
                                              static_cast<std::size_t>(train_.rows()));
  Eigen::VectorXd out(Q.rows());
  std::vector<double> q(static_cast<std::size_t>(Q.cols()));
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    for (Eigen::Index j = 0; j < Q.cols(); ++j)
      q[static_cast<std::size_t>(j)] = Q(i, j);
    auto nb = tree_->nearest(q.data(), k);
    double first = y_(static_cast<Eigen::Index>(nb[0].index));
    bool all_equal = true;
    double sum = 0.0;
    for (const auto& h : nb) {
      const double v = y_(static_cast<Eigen::Index>(h.index));
      sum += v;
      if (v != first) all_equal = false;
    }
    out(i) = all_equal ? first : sum / static_cast<double>(nb.size());
  }
  return out;
}

void KnnRegressor::save_state(std::ostream& out) const {
  out << "k " << k_ << '\n';
  scaler_.save(out);
  out << "data " << train_.rows() << ' ' << train_.cols() << '\n';
  for (Eigen::Index i = 0; i < train_.rows(); ++i) {
    for (Eigen::Index j = 0; j < train_.cols(); ++j)
      out << format_double(train_(i, j)) << ' ';
    out << format_double(y_(i)) << '\n';
  }
}

void KnnRegressor::load_state(std::istream& in) {
  std::string tag;
  in >> tag >> k_;
  scaler_.load(in);
  Eigen::Index n = 0, p = 0;
  in >> tag >> n >> p;
  if (tag != "data") throw ParseError("expected 'data' block");
  train_.resize(n, p);
  y_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) in >> train_(i, j);
    in >> y_(i);
  }
  if (!in) throw ParseError("truncated knn state");
  rebuild_tree();
}

}  // namespace firesl::learn

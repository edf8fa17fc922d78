#include "firesl/learners/tree.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>

#include "firesl/errors.hpp"
#include "firesl/text.hpp"

namespace firesl::learn {

namespace {

struct BuildItem {
  int node;
  std::size_t begin, end;  // range in the shared row buffer
  int depth;
};

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  bool valid() const { return feature >= 0; }
};

double leaf_objective(double g, double h, double lambda) {
  return g * g / (h + lambda);
}

}  // namespace

void RegressionTree::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& grad,
                         const Eigen::VectorXd& hess,
                         const std::vector<int>& rows,
                         const TreeOptions& opt, Rng& rng) {
  nodes_.clear();
  std::vector<int> buf = rows;

  std::vector<int> feature_pool(static_cast<std::size_t>(X.cols()));
  for (std::size_t f = 0; f < feature_pool.size(); ++f)
    feature_pool[f] = static_cast<int>(f);

  // Scratch for exact-split scans.
  std::vector<std::pair<double, int>> sorted;

  std::vector<BuildItem> stack;
  nodes_.push_back(TreeNode{});
  stack.push_back({0, 0, buf.size(), 0});

  while (!stack.empty()) {
    BuildItem item = stack.back();
    stack.pop_back();
    TreeNode& node = nodes_[static_cast<std::size_t>(item.node)];
    const std::size_t n = item.end - item.begin;
    node.count = static_cast<std::int64_t>(n);

    double G = 0.0, H = 0.0;
    bool pure = true;
    const double g0 = grad(buf[item.begin]), h0 = hess(buf[item.begin]);
    for (std::size_t i = item.begin; i < item.end; ++i) {
      const int r = buf[i];
      G += grad(r);
      H += hess(r);
      if (grad(r) != g0 || hess(r) != h0) pure = false;
    }
    // Pure nodes short-circuit so constant targets are reproduced exactly.
    node.value = pure && opt.lambda == 0.0 ? -g0 / h0 : -G / (H + opt.lambda);

    const bool depth_ok = opt.max_depth < 0 || item.depth < opt.max_depth;
    if (pure || !depth_ok ||
        n < static_cast<std::size_t>(opt.min_samples_split) ||
        n < 2 * static_cast<std::size_t>(opt.min_samples_leaf))
      continue;

    // Candidate features, ascending so equal gains break toward the lowest
    // feature index regardless of row order.
    int n_candidates = static_cast<int>(feature_pool.size());
    if (opt.max_features > 0 &&
        opt.max_features < static_cast<int>(feature_pool.size())) {
      for (int c = 0; c < opt.max_features; ++c) {
        const std::size_t j =
            c + static_cast<std::size_t>(
                    rng.uniform_index(feature_pool.size() - static_cast<std::size_t>(c)));
        std::swap(feature_pool[static_cast<std::size_t>(c)], feature_pool[j]);
      }
      n_candidates = opt.max_features;
      std::sort(feature_pool.begin(), feature_pool.begin() + n_candidates);
    }

    const double parent_obj = leaf_objective(G, H, opt.lambda);
    SplitChoice best;
    const std::size_t min_leaf = static_cast<std::size_t>(opt.min_samples_leaf);

    for (int c = 0; c < n_candidates; ++c) {
      const int f = feature_pool[static_cast<std::size_t>(c)];
      if (opt.random_thresholds) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t i = item.begin; i < item.end; ++i) {
          const double v = X(buf[i], f);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        if (!(hi > lo)) continue;
        const double thr = rng.uniform(lo, hi);
        double GL = 0.0, HL = 0.0;
        std::size_t nl = 0;
        for (std::size_t i = item.begin; i < item.end; ++i) {
          if (X(buf[i], f) < thr) {
            GL += grad(buf[i]);
            HL += hess(buf[i]);
            ++nl;
          }
        }
        if (nl < min_leaf || n - nl < min_leaf || nl == 0 || nl == n) continue;
        const double gain = 0.5 * (leaf_objective(GL, HL, opt.lambda) +
                                   leaf_objective(G - GL, H - HL, opt.lambda) -
                                   parent_obj) -
                            opt.gamma;
        if (gain > best.gain) best = {f, thr, gain};
      } else {
        sorted.clear();
        sorted.reserve(n);
        for (std::size_t i = item.begin; i < item.end; ++i)
          sorted.emplace_back(X(buf[i], f), buf[i]);
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (sorted.front().first == sorted.back().first) continue;
        double GL = 0.0, HL = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
          GL += grad(sorted[i].second);
          HL += hess(sorted[i].second);
          if (sorted[i].first == sorted[i + 1].first) continue;
          const std::size_t nl = i + 1;
          if (nl < min_leaf || n - nl < min_leaf) continue;
          const double gain = 0.5 * (leaf_objective(GL, HL, opt.lambda) +
                                     leaf_objective(G - GL, H - HL, opt.lambda) -
                                     parent_obj) -
                              opt.gamma;
          if (gain > best.gain) {
            double thr = sorted[i].first + 0.5 * (sorted[i + 1].first - sorted[i].first);
            if (thr <= sorted[i].first) thr = sorted[i + 1].first;
            best = {f, thr, gain};
          }
        }
      }
    }

    if (!best.valid() || !(best.gain > 0.0)) continue;

    // Partition the row range (stable, keeps relative order on both sides).
    std::vector<int> right_rows;
    std::size_t write = item.begin;
    for (std::size_t i = item.begin; i < item.end; ++i) {
      if (X(buf[i], best.feature) < best.threshold)
        buf[write++] = buf[i];
      else
        right_rows.push_back(buf[i]);
    }
    std::copy(right_rows.begin(), right_rows.end(),
              buf.begin() + static_cast<std::ptrdiff_t>(write));
    const std::size_t mid = write;
    if (mid == item.begin || mid == item.end) continue;  // numeric guard

    const int left = static_cast<int>(nodes_.size());
    const int right = left + 1;
    nodes_.push_back(TreeNode{});
    nodes_.push_back(TreeNode{});
    // re-acquire: push_back may have reallocated
    TreeNode& parent = nodes_[static_cast<std::size_t>(item.node)];
    parent.feature = best.feature;
    parent.threshold = best.threshold;
    parent.gain = best.gain;
    parent.left = left;
    parent.right = right;
    stack.push_back({right, mid, item.end, item.depth + 1});
    stack.push_back({left, item.begin, mid, item.depth + 1});
  }
}

double RegressionTree::predict_row(
    const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  int cur = 0;
  for (;;) {
    const TreeNode& nd = nodes_[static_cast<std::size_t>(cur)];
    if (nd.feature < 0) return nd.value;
    cur = x(nd.feature) < nd.threshold ? nd.left : nd.right;
  }
}

Eigen::VectorXd RegressionTree::predict(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) = predict_row(X.row(i));
  return out;
}

void RegressionTree::accumulate_gains(Eigen::VectorXd& totals) const {
  for (const TreeNode& nd : nodes_)
    if (nd.feature >= 0) totals(nd.feature) += nd.gain;
}

void RegressionTree::save(std::ostream& out) const {
  out << "tree " << nodes_.size() << '\n';
  for (const TreeNode& nd : nodes_)
    out << nd.feature << ' ' << format_double(nd.threshold) << ' ' << nd.left
        << ' ' << nd.right << ' ' << format_double(nd.value) << ' '
        << format_double(nd.gain) << ' ' << nd.count << '\n';
}

void RegressionTree::load(std::istream& in) {
  std::string tag;
  std::size_t count = 0;
  in >> tag >> count;
  if (tag != "tree") throw ParseError("expected 'tree' block");
  nodes_.assign(count, TreeNode{});
  for (std::size_t i = 0; i < count; ++i) {
    TreeNode& nd = nodes_[i];
    in >> nd.feature >> nd.threshold >> nd.left >> nd.right >> nd.value >>
        nd.gain >> nd.count;
  }
  if (!in) throw ParseError("truncated tree block");
}

void fit_cart(RegressionTree& tree, const Eigen::MatrixXd& X,
              const Eigen::VectorXd& y, const std::vector<int>& rows,
              const TreeOptions& options, Rng& rng) {
  tree.fit(X, -y, Eigen::VectorXd::Ones(y.size()), rows, options, rng);
}

}  // namespace firesl::learn

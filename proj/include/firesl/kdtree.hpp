#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace firesl {

// k-d tree over points of arbitrary (runtime) dimension. Supports bulk
// construction by recursive median split and incremental insertion; queries
// return the k nearest points with ties at equal distance broken by lower
// point index, which keeps every consumer deterministic.
class KdTree {
 public:
  explicit KdTree(std::size_t dim) : dim_(dim) {}

  // Bulk build over `points` (row-major, n x dim).
  KdTree(std::size_t dim, const std::vector<double>& points) : dim_(dim) {
    const std::size_t n = points.size() / dim;
    coords_ = points;
    nodes_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) nodes_.push_back(Node{});
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    root_ = build(idx, 0, n, 0);
  }

  std::size_t size() const { return nodes_.size(); }
  std::size_t dim() const { return dim_; }

  // Appends a point; returns its index. The tree is not rebalanced —
  // insertion order is expected to be well spread (maxmin ordering is).
  std::size_t insert(const double* point) {
    const std::size_t id = nodes_.size();
    coords_.insert(coords_.end(), point, point + dim_);
    nodes_.push_back(Node{});
    if (root_ == kNull) {
      root_ = id;
      return id;
    }
    std::size_t cur = root_;
    std::size_t axis = 0;
    for (;;) {
      Node& nd = nodes_[cur];
      const bool left = point[axis] < coord(cur, axis);
      std::size_t& child = left ? nd.left : nd.right;
      if (child == kNull) {
        child = id;
        nodes_[id].axis = (axis + 1) % dim_;
        return id;
      }
      cur = child;
      axis = nodes_[cur].axis;
    }
  }

  struct Neighbor {
    double dist2;
    std::size_t index;
    bool operator<(const Neighbor& o) const {
      return dist2 != o.dist2 ? dist2 < o.dist2 : index < o.index;
    }
  };

  // k nearest neighbors of `query`, sorted by (distance, index).
  // `exclude` skips one point index (self-queries).
  std::vector<Neighbor> nearest(const double* query, std::size_t k,
                                std::size_t exclude = kNull) const {
    std::vector<Neighbor> heap;  // max-heap on (dist2, index)
    heap.reserve(k + 1);
    if (root_ != kNull && k > 0) search(root_, query, k, exclude, heap);
    std::sort_heap(heap.begin(), heap.end());
    return heap;
  }

  // Distance^2 to the single nearest point (infinity if empty).
  double nearest_dist2(const double* query) const {
    auto nb = nearest(query, 1);
    return nb.empty() ? std::numeric_limits<double>::infinity() : nb[0].dist2;
  }

  const double* point(std::size_t i) const { return &coords_[i * dim_]; }

  static constexpr std::size_t kNull = static_cast<std::size_t>(-1);

 private:
  struct Node {
    std::size_t left = kNull;
    std::size_t right = kNull;
    std::size_t axis = 0;
  };

  double coord(std::size_t i, std::size_t axis) const {
    return coords_[i * dim_ + axis];
  }

  double dist2(std::size_t i, const double* q) const {
    double d = 0.0;
    const double* p = point(i);
    for (std::size_t a = 0; a < dim_; ++a) {
      const double diff = p[a] - q[a];
      d += diff * diff;
    }
    return d;
  }

  std::size_t build(std::vector<std::size_t>& idx, std::size_t lo,
                    std::size_t hi, std::size_t axis) {
    if (lo >= hi) return kNull;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(idx.begin() + static_cast<std::ptrdiff_t>(lo),
                     idx.begin() + static_cast<std::ptrdiff_t>(mid),
                     idx.begin() + static_cast<std::ptrdiff_t>(hi),
                     [&](std::size_t a, std::size_t b) {
                       const double ca = coord(a, axis), cb = coord(b, axis);
                       return ca != cb ? ca < cb : a < b;
                     });
    const std::size_t node = idx[mid];
    nodes_[node].axis = axis;
    const std::size_t next = (axis + 1) % dim_;
    nodes_[node].left = build(idx, lo, mid, next);
    nodes_[node].right = build(idx, mid + 1, hi, next);
    return node;
  }

  void search(std::size_t cur, const double* q, std::size_t k,
              std::size_t exclude, std::vector<Neighbor>& heap) const {
    const Node& nd = nodes_[cur];
    if (cur != exclude) {
      Neighbor cand{dist2(cur, q), cur};
      if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end());
      } else if (cand < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    const std::size_t axis = nd.axis;
    const double delta = q[axis] - coord(cur, axis);
    const std::size_t near = delta < 0.0 ? nd.left : nd.right;
    const std::size_t far = delta < 0.0 ? nd.right : nd.left;
    if (near != kNull) search(near, q, k, exclude, heap);
    // Visit the far side on exact equality too, so index tie-breaks see
    // every point at the boundary distance.
    if (far != kNull &&
        (heap.size() < k || delta * delta <= heap.front().dist2))
      search(far, q, k, exclude, heap);
  }

  std::size_t dim_;
  std::size_t root_ = kNull;
  std::vector<double> coords_;
  std::vector<Node> nodes_;
};

}  // namespace firesl

#include "squirrel/rf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "squirrel/parallel.hpp"

namespace squirrel {

RfModel RfModel::fit(const std::vector<UnitVector> &x,
                     const std::vector<double> &z, Rng &rng,
                     const RfFitOptions &options) {
  if (x.empty() || x.size() != z.size()) {
    throw std::invalid_argument(
        "RfModel::fit: need n >= 1 inputs with matching targets");
  }
  const std::size_t n = x.size();
  const std::size_t d = x[0].size();
  for (const auto &row : x) {
    if (row.size() != d) {
      throw std::invalid_argument("RfModel::fit: ragged input rows");
    }
  }
  for (double v : z) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("RfModel::fit: targets must be finite");
    }
  }

  RfModel model;
  model.x_ = x;
  model.z_ = z;
  const int tree_count = std::max(1, options.tree_count);
  model.trees_.resize(static_cast<std::size_t>(tree_count));

  std::vector<std::uint64_t> tree_seeds(static_cast<std::size_t>(tree_count));
  for (auto &s : tree_seeds) {
    s = rng.next_u64();
  }

  const std::size_t dims_per_split = (d + 1) / 2;

  parallel::for_each_index(model.trees_.size(), [&](std::size_t t) {
    Rng tree_rng(tree_seeds[t]);
    Tree &tree = model.trees_[t];

    std::vector<std::size_t> sample(n);
    for (auto &idx : sample) {
      idx = tree_rng.next_index(n);
    }

    // Recursive builder; preorder node allocation, left subtree first, so
    // the rng consumption order is a deterministic function of the data.
    auto build = [&](auto &&self, std::vector<std::size_t> points) -> int {
      double sum = 0.0;
      double lo_z = std::numeric_limits<double>::infinity();
      double hi_z = -std::numeric_limits<double>::infinity();
      for (std::size_t idx : points) {
        sum += z[idx];
        lo_z = std::min(lo_z, z[idx]);
        hi_z = std::max(hi_z, z[idx]);
      }
      double mean = sum / static_cast<double>(points.size());

      auto make_leaf = [&] {
        Node leaf;
        leaf.value = mean;
        tree.push_back(leaf);
        return static_cast<int>(tree.size() - 1);
      };

      if (points.size() <= static_cast<std::size_t>(options.min_leaf_size) ||
          lo_z == hi_z) {
        return make_leaf();
      }

      // Candidate splits: dims_per_split random coordinates, each with
      // random thresholds inside the node's coordinate range; best variance
      // reduction (lowest summed child SSE) wins, first seen on ties.
      auto dims = tree_rng.sample_distinct(d, std::min(dims_per_split, d));
      int best_dim = -1;
      double best_thr = 0.0;
      double best_cost = std::numeric_limits<double>::infinity();
      for (std::size_t dim : dims) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t idx : points) {
          lo = std::min(lo, x[idx][dim]);
          hi = std::max(hi, x[idx][dim]);
        }
        if (lo == hi) {
          continue; // cannot separate on this coordinate
        }
        for (int k = 0; k < options.thresholds_per_dim; ++k) {
          double thr = lo + tree_rng.next_double() * (hi - lo);
          double sum_l = 0.0, sum_sq_l = 0.0;
          double sum_r = 0.0, sum_sq_r = 0.0;
          std::size_t n_l = 0;
          for (std::size_t idx : points) {
            if (x[idx][dim] <= thr) {
              sum_l += z[idx];
              sum_sq_l += z[idx] * z[idx];
              ++n_l;
            } else {
              sum_r += z[idx];
              sum_sq_r += z[idx] * z[idx];
            }
          }
          std::size_t n_r = points.size() - n_l;
          if (n_l == 0 || n_r == 0) {
            continue;
          }
          double cost = (sum_sq_l - sum_l * sum_l / static_cast<double>(n_l)) +
                        (sum_sq_r - sum_r * sum_r / static_cast<double>(n_r));
          if (cost < best_cost) {
            best_cost = cost;
            best_dim = static_cast<int>(dim);
            best_thr = thr;
          }
        }
      }
      if (best_dim < 0) {
        return make_leaf();
      }

      std::vector<std::size_t> left_pts, right_pts;
      for (std::size_t idx : points) {
        (x[idx][static_cast<std::size_t>(best_dim)] <= best_thr ? left_pts
                                                                : right_pts)
            .push_back(idx);
      }
      points.clear();
      points.shrink_to_fit();

      Node node;
      node.split_dim = best_dim;
      node.threshold = best_thr;
      tree.push_back(node);
      int node_idx = static_cast<int>(tree.size() - 1);
      int left = self(self, std::move(left_pts));
      int right = self(self, std::move(right_pts));
      tree[static_cast<std::size_t>(node_idx)].left = left;
      tree[static_cast<std::size_t>(node_idx)].right = right;
      return node_idx;
    };

    build(build, std::move(sample));
  });

  return model;
}

double RfModel::predict_tree(const Tree &tree, const UnitVector &x) const {
  int idx = 0;
  while (tree[static_cast<std::size_t>(idx)].split_dim >= 0) {
    const Node &node = tree[static_cast<std::size_t>(idx)];
    idx = x[static_cast<std::size_t>(node.split_dim)] <= node.threshold
              ? node.left
              : node.right;
  }
  return tree[static_cast<std::size_t>(idx)].value;
}

std::pair<double, double> RfModel::predict(const UnitVector &x) const {
  if (x.size() != x_[0].size()) {
    throw std::invalid_argument("RfModel::predict: wrong input dimension");
  }
  std::vector<double> preds(trees_.size());
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    preds[t] = predict_tree(trees_[t], x);
  }

  bool all_equal = true;
  for (double p : preds) {
    if (p != preds[0]) {
      all_equal = false;
      break;
    }
  }
  if (all_equal) {
    return {preds[0], 0.0};
  }

  double mean = 0.0;
  for (double p : preds) {
    mean += p;
  }
  mean /= static_cast<double>(preds.size());
  double var = 0.0;
  for (double p : preds) {
    var += (p - mean) * (p - mean);
  }
  var /= static_cast<double>(preds.size());
  return {mean, var};
}

} // namespace squirrel

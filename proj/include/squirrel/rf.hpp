#pragma once

#include <utility>
#include <vector>

#include "squirrel/rng.hpp"
#include "squirrel/space.hpp"

namespace squirrel {

struct RfFitOptions {
  int tree_count = 64;
  int min_leaf_size = 3;      // nodes at or below this size become leaves
  int thresholds_per_dim = 10; // random split candidates per chosen coordinate
};

/// Regression forest over unit-cube inputs: bootstrap resamples,
/// random-coordinate random-threshold splits maximizing variance reduction,
/// leaf prediction = mean of its training targets. Predictive variance is
/// the population variance of the per-tree predictions.
class RfModel {
public:
  static RfModel fit(const std::vector<UnitVector> &x,
                     const std::vector<double> &z, Rng &rng,
                     const RfFitOptions &options = {});

  std::pair<double, double> predict(const UnitVector &x) const;

  const std::vector<UnitVector> &train_x() const { return x_; }
  const std::vector<double> &train_z() const { return z_; }
  std::size_t tree_count() const { return trees_.size(); }

private:
  struct Node {
    int split_dim = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };
  using Tree = std::vector<Node>;

  double predict_tree(const Tree &tree, const UnitVector &x) const;

  std::vector<UnitVector> x_;
  std::vector<double> z_;
  std::vector<Tree> trees_;
};

} // namespace squirrel

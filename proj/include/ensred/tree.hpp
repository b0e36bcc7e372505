#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ensred/matrix.hpp"

namespace ensred {

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    std::int32_t left = -1;
    std::int32_t right = -1;
    double threshold = 0.0;
    double value = 0.0;

    bool is_leaf() const { return feature < 0; }
};

/// Binary regression tree; x goes left when x[feature] <= threshold.
class RegressionTree {
public:
    double predict(std::span<const double> x) const {
        int n = 0;
        while (!nodes_[n].is_leaf())
            n = x[nodes_[n].feature] <= nodes_[n].threshold ? nodes_[n].left
                                                            : nodes_[n].right;
        return nodes_[n].value;
    }

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::vector<TreeNode>& nodes() { return nodes_; }
    int depth() const;

private:
    std::vector<TreeNode> nodes_;
};

struct TreeParams {
    int max_depth = 80;
    int min_samples_split = 2;
};

/// Computes a leaf's prediction from the indices of the samples it holds.
/// When empty, the trainer uses the sorted mean of the fitting target.
using LeafValueFn = std::function<double(std::span<const int>)>;

/// Greedy variance-reduction tree trainer over a fixed design matrix.
///
/// Feature columns are sorted once per trainer (keyed by value, then by the
/// caller's sort key) and the sorted index lists are partitioned down the
/// tree, so each node's split search is a single linear scan per feature
/// over unique-value boundaries with thresholds at midpoints. Sums always
/// accumulate in the presorted order and leaf statistics sort their inputs,
/// which makes a fitted tree independent of the order training rows were
/// supplied in (provided no two rows share both a feature value and a sort
/// key). Split search runs in parallel across features; the chosen split is
/// identical to the sequential scan because candidates merge in feature
/// order.
class TreeTrainer {
public:
    /// sort_key must be aligned with X's rows and constant across fits
    /// (gradient targets may change per fit). Typically the training labels.
    TreeTrainer(const FeatureMatrix& X, std::span<const double> sort_key);

    RegressionTree fit(std::span<const double> target, const TreeParams& params,
                       const LeafValueFn& leaf_value = {});

private:
    std::size_t n_, n_features_;
    std::vector<double> columns_;       // column-major copy, indexed by sample id
    std::vector<std::int32_t> sorted_;  // per-feature presorted sample ids
};

/// One-shot convenience wrapper; uses the target itself as the sort key.
RegressionTree fit_regression_tree(const FeatureMatrix& X,
                                   std::span<const double> target,
                                   const TreeParams& params,
                                   const LeafValueFn& leaf_value = {});

}  // namespace ensred

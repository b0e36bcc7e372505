#include "ensred/tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ensred/parallel.hpp"

namespace ensred {

int RegressionTree::depth() const {
    if (nodes_.empty()) return 0;
    std::vector<int> d(nodes_.size(), 0);
    int deepest = 0;
    // Parents precede children (pre-order layout).
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!nodes_[i].is_leaf()) {
            d[nodes_[i].left] = d[i] + 1;
            d[nodes_[i].right] = d[i] + 1;
        }
        deepest = std::max(deepest, d[i]);
    }
    return deepest;
}

TreeTrainer::TreeTrainer(const FeatureMatrix& X, std::span<const double> sort_key)
    : n_(X.rows()), n_features_(X.cols()) {
    if (n_ == 0) throw std::invalid_argument("TreeTrainer: empty design matrix");
    if (sort_key.size() != n_)
        throw std::invalid_argument("TreeTrainer: sort_key length mismatch");

    columns_.resize(n_features_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t f = 0; f < n_features_; ++f)
            columns_[f * n_ + i] = X.at(i, f);

    sorted_.resize(n_features_ * n_);
    const long long nf = static_cast<long long>(n_features_);
#pragma omp parallel for schedule(static) if (!par::in_parallel())
    for (long long f = 0; f < nf; ++f) {
        std::int32_t* idx = sorted_.data() + f * n_;
        std::iota(idx, idx + n_, 0);
        const double* col = columns_.data() + f * n_;
        std::sort(idx, idx + n_, [&](std::int32_t a, std::int32_t b) {
            if (col[a] != col[b]) return col[a] < col[b];
            return sort_key[a] < sort_key[b];
        });
    }
}

namespace {

struct SplitCandidate {
    double improvement = 0.0;
    int feature = -1;
    double threshold = 0.0;
    std::size_t n_left = 0;
};

// Mean over a sorted copy; summation order is content-determined.
double sorted_mean(std::vector<double>& buf) {
    std::sort(buf.begin(), buf.end());
    double s = 0.0;
    for (double v : buf) s += v;
    return s / static_cast<double>(buf.size());
}

struct Builder {
    const double* columns = nullptr;
    const double* target = nullptr;
    std::size_t n = 0;
    std::size_t n_features = 0;
    TreeParams params;
    const LeafValueFn* leaf_value = nullptr;
    std::vector<TreeNode>* nodes = nullptr;

    std::vector<std::int32_t> work;     // per-feature index segments, partitioned
    std::vector<std::int32_t> scratch;  // per-feature partition buffers
    std::vector<char> is_left;
    std::vector<int> member_buf;
    std::vector<double> leaf_buf;

    int make_leaf(std::size_t begin, std::size_t end) {
        member_buf.clear();
        for (std::size_t k = begin; k < end; ++k)
            member_buf.push_back(work[k]);  // feature 0 segment
        double value;
        if (*leaf_value) {
            value = (*leaf_value)(member_buf);
        } else {
            leaf_buf.clear();
            for (int s : member_buf) leaf_buf.push_back(target[s]);
            value = sorted_mean(leaf_buf);
        }
        TreeNode node;
        node.value = value;
        nodes->push_back(node);
        return static_cast<int>(nodes->size()) - 1;
    }

    // Scans one feature's sorted segment for the boundary with the largest
    // variance reduction. total is the node's target sum computed once, in
    // feature 0 order, so every feature sees the same baseline.
    SplitCandidate scan_feature(std::size_t f, std::size_t begin, std::size_t end,
                                double total) const {
        const double* col = columns + f * n;
        const std::int32_t* idx = work.data() + f * n + begin;
        const std::size_t count = end - begin;
        const double parent = total * total / static_cast<double>(count);

        SplitCandidate best;
        double left_sum = 0.0;
        for (std::size_t k = 0; k + 1 < count; ++k) {
            left_sum += target[idx[k]];
            const double v = col[idx[k]];
            const double next = col[idx[k + 1]];
            if (v == next) continue;  // split only between distinct values
            const double nl = static_cast<double>(k + 1);
            const double nr = static_cast<double>(count - k - 1);
            const double right_sum = total - left_sum;
            const double improvement =
                left_sum * left_sum / nl + right_sum * right_sum / nr - parent;
            if (improvement > best.improvement) {
                double thr = 0.5 * (v + next);
                if (!(thr < next)) thr = v;  // keep both sides non-empty
                best = {improvement, static_cast<int>(f), thr, k + 1};
            }
        }
        return best;
    }

    int build(std::size_t begin, std::size_t end, int depth) {
        const std::size_t count = end - begin;
        if (depth >= params.max_depth ||
            count < static_cast<std::size_t>(params.min_samples_split))
            return make_leaf(begin, end);

        double total = 0.0, tmin = target[work[begin]], tmax = tmin;
        for (std::size_t k = begin; k < end; ++k) {
            const double t = target[work[k]];
            total += t;
            tmin = std::min(tmin, t);
            tmax = std::max(tmax, t);
        }
        if (tmin == tmax) return make_leaf(begin, end);  // zero impurity

        const long long nf = static_cast<long long>(n_features);
        std::vector<SplitCandidate> per_feature(n_features);
#pragma omp parallel for schedule(static) if (count >= 4096 && !par::in_parallel())
        for (long long f = 0; f < nf; ++f)
            per_feature[f] = scan_feature(static_cast<std::size_t>(f), begin, end, total);

        SplitCandidate best;
        for (const auto& cand : per_feature)
            if (cand.feature >= 0 && cand.improvement > best.improvement) best = cand;
        if (best.feature < 0) return make_leaf(begin, end);

        // Flag left membership from the chosen feature, then stable-partition
        // every feature's segment so children keep their presorted order.
        {
            const double* col = columns + static_cast<std::size_t>(best.feature) * n;
            const std::int32_t* idx =
                work.data() + static_cast<std::size_t>(best.feature) * n + begin;
            for (std::size_t k = 0; k < count; ++k)
                is_left[idx[k]] = col[idx[k]] <= best.threshold ? 1 : 0;
        }
#pragma omp parallel for schedule(static) if (count >= 4096 && !par::in_parallel())
        for (long long f = 0; f < nf; ++f) {
            std::int32_t* seg = work.data() + f * n + begin;
            std::int32_t* right_buf = scratch.data() + f * n;
            std::size_t l = 0, r = 0;
            for (std::size_t k = 0; k < count; ++k) {
                const std::int32_t s = seg[k];
                if (is_left[s])
                    seg[l++] = s;
                else
                    right_buf[r++] = s;
            }
            std::copy(right_buf, right_buf + r, seg + l);
        }

        const int node_index = static_cast<int>(nodes->size());
        {
            TreeNode node;
            node.feature = best.feature;
            node.threshold = best.threshold;
            nodes->push_back(node);
        }
        const int left = build(begin, begin + best.n_left, depth + 1);
        const int right = build(begin + best.n_left, end, depth + 1);
        (*nodes)[node_index].left = left;
        (*nodes)[node_index].right = right;
        return node_index;
    }
};

}  // namespace

RegressionTree TreeTrainer::fit(std::span<const double> target,
                                const TreeParams& params,
                                const LeafValueFn& leaf_value) {
    if (target.size() != n_)
        throw std::invalid_argument("TreeTrainer::fit: target length mismatch");
    if (params.max_depth < 0 || params.min_samples_split < 2)
        throw std::invalid_argument("TreeTrainer::fit: bad params");

    Builder b;
    b.columns = columns_.data();
    b.target = target.data();
    b.n = n_;
    b.n_features = n_features_;
    b.params = params;
    b.leaf_value = &leaf_value;
    b.work = sorted_;  // fresh copy; partitioning consumes it
    b.scratch.resize(n_features_ * n_);
    b.is_left.assign(n_, 0);

    RegressionTree tree;
    b.nodes = &tree.nodes();
    b.build(0, n_, 0);
    return tree;
}

RegressionTree fit_regression_tree(const FeatureMatrix& X,
                                   std::span<const double> target,
                                   const TreeParams& params,
                                   const LeafValueFn& leaf_value) {
    TreeTrainer trainer(X, target);
    return trainer.fit(target, params, leaf_value);
}

}  // namespace ensred

#include "ensred/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace ensred {

void DbscanParams::validate() const {
    if (!(eps > 0.0)) throw std::invalid_argument("DbscanParams: eps must be > 0");
    if (min_samples < 1)
        throw std::invalid_argument("DbscanParams: min_samples must be >= 1");
}

HistogramClustering equi_width_histogram(std::span<const double> values,
                                         int n_bins) {
    if (values.empty())
        throw std::invalid_argument("equi_width_histogram: empty input");
    if (n_bins < 1)
        throw std::invalid_argument("equi_width_histogram: n_bins must be >= 1");
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mx == mn && n_bins > 1)
        throw std::invalid_argument(
            "equi_width_histogram: all values equal, bins would be empty");

    HistogramClustering h;
    h.n_bins = n_bins;
    h.edges.resize(n_bins + 1);
    for (int i = 0; i <= n_bins; ++i)
        h.edges[i] = mn + (mx - mn) * static_cast<double>(i) / n_bins;
    h.edges.front() = mn;
    h.edges.back() = mx;

    const double width = (mx - mn) / n_bins;
    h.labeling.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        int bin;
        if (values[i] == mx) {
            bin = n_bins - 1;  // top value joins the last bin
        } else {
            bin = static_cast<int>(std::floor((values[i] - mn) / width));
            bin = std::clamp(bin, 0, n_bins - 1);
        }
        h.labeling[i] = bin;
    }
    return h;
}

namespace {

constexpr int kUnclassified = -2;

// Indices within eps of point q, in ascending index order, q included.
// The distance scan is the data-parallel part; collection stays ordered.
std::vector<int> region_query(const FeatureMatrix& points, int q, double eps,
                              const MetricFn& metric, std::vector<char>& in_range) {
    const int n = static_cast<int>(points.rows());
    const auto pq = points.row(q);
    // Parallel pays only once the scan is long enough to amortise the fork.
#pragma omp parallel for schedule(static) if (n >= 1024)
    for (int i = 0; i < n; ++i)
        in_range[i] = metric(pq, points.row(i)) <= eps ? 1 : 0;
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (in_range[i]) out.push_back(i);
    return out;
}

}  // namespace

Labeling dbscan(const FeatureMatrix& points, const DbscanParams& params,
                const MetricFn& metric) {
    params.validate();
    if (points.rows() == 0) throw std::invalid_argument("dbscan: empty input");

    const int n = static_cast<int>(points.rows());
    const std::size_t min_samples = static_cast<std::size_t>(params.min_samples);
    Labeling labels(n, kUnclassified);
    std::vector<char> scratch(n);
    int next_cluster = 0;

    for (int i = 0; i < n; ++i) {
        if (labels[i] != kUnclassified) continue;
        const auto seeds = region_query(points, i, params.eps, metric, scratch);
        if (seeds.size() < min_samples) {
            labels[i] = kNoise;
            continue;
        }
        const int c = next_cluster++;
        labels[i] = c;
        std::deque<int> frontier;
        for (int q : seeds) {
            if (q == i) continue;
            if (labels[q] == kNoise) labels[q] = c;  // border point
            if (labels[q] == kUnclassified) {
                labels[q] = c;
                frontier.push_back(q);
            }
        }
        while (!frontier.empty()) {
            const int q = frontier.front();
            frontier.pop_front();
            const auto nq = region_query(points, q, params.eps, metric, scratch);
            if (nq.size() < min_samples) continue;  // border, do not expand
            for (int r : nq) {
                if (labels[r] == kNoise) labels[r] = c;
                if (labels[r] == kUnclassified) {
                    labels[r] = c;
                    frontier.push_back(r);
                }
            }
        }
    }
    return labels;
}

Labeling dbscan_reference(const FeatureMatrix& points, const DbscanParams& params,
                          const MetricFn& metric) {
    params.validate();
    if (points.rows() == 0)
        throw std::invalid_argument("dbscan_reference: empty input");

    const int n = static_cast<int>(points.rows());

    // Precompute every neighborhood with plain serial loops.
    std::vector<std::vector<int>> neighbors(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (metric(points.row(i), points.row(j)) <= params.eps)
                neighbors[i].push_back(j);

    std::vector<bool> core(n);
    for (int i = 0; i < n; ++i)
        core[i] = neighbors[i].size() >= static_cast<std::size_t>(params.min_samples);

    Labeling labels(n, kNoise);
    std::vector<bool> visited(n, false);
    int next_cluster = 0;
    for (int i = 0; i < n; ++i) {
        if (!core[i] || visited[i]) continue;
        const int c = next_cluster++;
        std::vector<int> stack{i};
        visited[i] = true;
        labels[i] = c;
        while (!stack.empty()) {
            const int q = stack.back();
            stack.pop_back();
            for (int r : neighbors[q]) {
                if (labels[r] == kNoise) labels[r] = c;  // first cluster claims it
                if (core[r] && !visited[r]) {
                    visited[r] = true;
                    stack.push_back(r);
                }
            }
        }
    }
    return labels;
}

SpreadSummary cluster_oip_spread(const Labeling& labeling,
                                 std::span<const double> oip) {
    if (labeling.size() != oip.size())
        throw std::invalid_argument("cluster_oip_spread: length mismatch");

    std::map<int, ClusterSpread> by_cluster;
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        const int c = labeling[i];
        if (c == kNoise) continue;
        auto [it, inserted] = by_cluster.try_emplace(c);
        ClusterSpread& s = it->second;
        if (inserted) {
            s.cluster = c;
            s.min = s.max = oip[i];
        } else {
            s.min = std::min(s.min, oip[i]);
            s.max = std::max(s.max, oip[i]);
        }
        ++s.size;
    }
    if (by_cluster.empty())
        throw std::invalid_argument("cluster_oip_spread: no non-noise cluster");

    SpreadSummary out;
    double weighted = 0.0;
    std::size_t total = 0;
    for (auto& [c, s] : by_cluster) {
        s.range = s.max - s.min;
        weighted += static_cast<double>(s.size) * s.range;
        total += s.size;
        out.clusters.push_back(s);
    }
    out.mean_range = weighted / static_cast<double>(total);
    return out;
}

double compare_labelings(const Labeling& a, const Labeling& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("compare_labelings: length mismatch");
    const std::size_t n = a.size();
    if (n < 2) return 1.0;

    // Remap labels to dense indices, giving each noise point its own
    // singleton cluster.
    const auto densify = [n](const Labeling& l) {
        std::vector<int> dense(n);
        std::unordered_map<int, int> ids;
        int next = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (l[i] == kNoise) {
                dense[i] = next++;
            } else {
                auto [it, inserted] = ids.try_emplace(l[i], next);
                if (inserted) ++next;
                dense[i] = it->second;
            }
        }
        return std::pair{dense, next};
    };
    const auto [da, ka] = densify(a);
    const auto [db, kb] = densify(b);

    const auto choose2 = [](std::int64_t m) { return m * (m - 1) / 2; };

    std::vector<std::int64_t> count_a(ka, 0), count_b(kb, 0);
    std::unordered_map<std::uint64_t, std::int64_t> joint;
    joint.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ++count_a[da[i]];
        ++count_b[db[i]];
        ++joint[(static_cast<std::uint64_t>(da[i]) << 32) |
                static_cast<std::uint32_t>(db[i])];
    }

    std::int64_t same_a = 0, same_b = 0, same_both = 0;
    for (std::int64_t c : count_a) same_a += choose2(c);
    for (std::int64_t c : count_b) same_b += choose2(c);
    for (const auto& [key, c] : joint) same_both += choose2(c);

    const std::int64_t total = choose2(static_cast<std::int64_t>(n));
    const std::int64_t disagreements = (same_a - same_both) + (same_b - same_both);
    return static_cast<double>(total - disagreements) / static_cast<double>(total);
}

}  // namespace ensred

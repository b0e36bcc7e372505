#pragma once

#include <span>
#include <vector>

#include "ensred/matrix.hpp"
#include "ensred/metric.hpp"

namespace ensred {

/// Cluster id for points that belong to no cluster.
inline constexpr int kNoise = -1;

/// Per-model cluster assignment, aligned with model ids. Cluster ids are
/// non-negative; kNoise marks outliers. DBSCAN and the histogram emit ids
/// from a dense range; SOFM labelings use neuron indices, which may have
/// gaps, so consumers must not assume contiguity.
using Labeling = std::vector<int>;

struct DbscanParams {
    double eps = 0.6;
    int min_samples = 10;
    void validate() const;
};

/// Ground-truth clustering: one cluster per equi-width bin of the target
/// values.
struct HistogramClustering {
    int n_bins = 0;
    std::vector<double> edges;  // n_bins + 1, strictly increasing
    Labeling labeling;
};

/// Bins values into n_bins equal-width intervals spanning [min, max]; the
/// maximum joins the top bin so that every value is clustered. Throws
/// std::invalid_argument on empty input, n_bins < 1, or all-equal values
/// with n_bins > 1.
HistogramClustering equi_width_histogram(std::span<const double> values,
                                         int n_bins);

/// Classic DBSCAN over an explicit metric. Neighborhoods are recomputed by
/// full pairwise scan (O(n^2) time, O(n) memory); no all-pairs matrix is
/// ever materialised and no spatial index is used, so any symmetric metric
/// is acceptable. Cluster ids follow the order in which seed core points
/// are discovered scanning the input; border points go to the first cluster
/// that reaches them. Neighborhood scans run in parallel; the labeling is
/// identical to the serial reference for any thread count.
Labeling dbscan(const FeatureMatrix& points, const DbscanParams& params,
                const MetricFn& metric);

/// Textbook serial implementation kept as the correctness reference for
/// tests and benchmarks.
Labeling dbscan_reference(const FeatureMatrix& points, const DbscanParams& params,
                          const MetricFn& metric);

struct ClusterSpread {
    int cluster = 0;
    std::size_t size = 0;
    double min = 0.0;
    double max = 0.0;
    double range = 0.0;
};

struct SpreadSummary {
    std::vector<ClusterSpread> clusters;  // ascending cluster id, noise excluded
    double mean_range = 0.0;              // weighted by cluster size
};

/// Per-cluster (min, max, range) of the target values plus the size-weighted
/// mean range. Quantifies how wide a spread of OIP each cluster covers.
/// Throws std::invalid_argument on length mismatch or when there is no
/// non-noise cluster.
SpreadSummary cluster_oip_spread(const Labeling& labeling,
                                 std::span<const double> oip);

/// Pair-counting Rand index in [0, 1]: the fraction of unordered point pairs
/// on which the two labelings agree (same-cluster vs different-cluster).
/// Noise is treated as a singleton cluster per point. Computed from the
/// contingency table, not by pair enumeration.
double compare_labelings(const Labeling& a, const Labeling& b);

}  // namespace ensred

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ensred/clustering.hpp"
#include "ensred/matrix.hpp"
#include "ensred/metric.hpp"

namespace ensred {

/// Rectangular self-organising feature map. Neuron (row, col) lives at
/// weight row `row * width + col`; weight vectors are genome-shaped
/// pseudo-models.
struct SofmGrid {
    int width = 0;
    int height = 0;
    FeatureMatrix weights;

    int neurons() const { return width * height; }
    std::span<const double> neuron(int row, int col) const {
        return weights.row(static_cast<std::size_t>(row) * width + col);
    }
};

struct SofmParams {
    int width = 8;
    int height = 8;
    int epochs = 3;
    double alpha_start = 0.5;
    double alpha_end = 0.01;
    // Initial neighbourhood radius. Kept small by default: weights start as
    // a sample of the data, so no global ordering phase is needed, and a
    // wide early neighbourhood collapses all neuron scores to the centre
    // under a scalar learned metric, which the map cannot recover from.
    double radius_start = 1.0;
    double radius_end = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Neuron weights drawn as a seeded sample of the inputs without
/// replacement, so initial neurons are valid-looking pseudo-models.
/// Throws std::invalid_argument when there are fewer inputs than neurons.
SofmGrid init_grid(const FeatureMatrix& genomes, int width, int height,
                   std::uint64_t seed);

/// Neuron minimising metric(weight, x); ties go to the smallest row-major
/// index.
std::pair<int, int> best_matching_unit(const SofmGrid& grid,
                                       std::span<const double> x,
                                       const MetricFn& metric);

/// One Kohonen learning step: every neuron moves toward x by
/// alpha * exp(-g^2 / (2 radius^2)), with g the Euclidean distance between
/// grid coordinates of the neuron and the BMU.
void kohonen_update(SofmGrid& grid, std::span<const double> x,
                    std::pair<int, int> bmu, double alpha, double radius);

/// Kohonen training: per epoch the inputs are presented in a seeded shuffled
/// order; learning rate and neighbourhood radius decay linearly per
/// presentation from their start to their end values. Deterministic given
/// the seed; training is inherently order-dependent and runs sequentially.
SofmGrid fit(const FeatureMatrix& genomes, const SofmParams& params,
             const MetricFn& metric);

/// Same training loop under the learned pseudo-metric
/// d(x, y) = |score(x) - score(y)|. Input scores are precomputed once and
/// neuron scores are cached and refreshed after every update, so BMU search
/// sees exactly the scores a fresh evaluation would produce.
SofmGrid fit_scored(const FeatureMatrix& genomes, const SofmParams& params,
                    const ScorerFn& scorer);

/// Cluster id = row * width + col of each genome's BMU. At most
/// width * height distinct clusters; no noise. Ids keep grid positions, so
/// the range may have gaps.
Labeling assign_clusters(const SofmGrid& grid, const FeatureMatrix& genomes,
                         const MetricFn& metric);
Labeling assign_clusters_serial(const SofmGrid& grid,
                                const FeatureMatrix& genomes,
                                const MetricFn& metric);

/// assign_clusters under the scored pseudo-metric, with scores computed once
/// per genome and per neuron.
Labeling assign_clusters_scored(const SofmGrid& grid,
                                const FeatureMatrix& genomes,
                                const ScorerFn& scorer);

/// Evaluates each neuron's pseudo-model, row-major. Feeds the map-colouring
/// plot data.
std::vector<double> neuron_oip(const SofmGrid& grid, const ScorerFn& scorer);

}  // namespace ensred

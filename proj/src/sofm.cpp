#include "ensred/sofm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ensred/rng.hpp"

namespace ensred {

namespace {
// Distinct sub-streams of the SOFM seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kOrderStream = 2;
}  // namespace

void SofmParams::validate() const {
    if (width < 1 || height < 1)
        throw std::invalid_argument("SofmParams: grid must be at least 1x1");
    if (epochs < 1) throw std::invalid_argument("SofmParams: epochs must be >= 1");
    if (!(alpha_end > 0.0) || alpha_start < alpha_end)
        throw std::invalid_argument("SofmParams: need alpha_start >= alpha_end > 0");
    if (!(radius_end > 0.0) || radius_start < radius_end)
        throw std::invalid_argument(
            "SofmParams: need radius_start >= radius_end > 0");
}

SofmGrid init_grid(const FeatureMatrix& genomes, int width, int height,
                   std::uint64_t seed) {
    const int neurons = width * height;
    if (static_cast<std::size_t>(neurons) > genomes.rows())
        throw std::invalid_argument(
            "init_grid: fewer input genomes than neurons");

    SplitMix64 rng(mix64(seed + kInitStream));
    const auto picks =
        sample_without_replacement(static_cast<int>(genomes.rows()), neurons, rng);

    SofmGrid grid;
    grid.width = width;
    grid.height = height;
    grid.weights = FeatureMatrix(neurons, genomes.cols());
    for (int n = 0; n < neurons; ++n) {
        const auto src = genomes.row(picks[n]);
        std::copy(src.begin(), src.end(), grid.weights.row(n).begin());
    }
    return grid;
}

std::pair<int, int> best_matching_unit(const SofmGrid& grid,
                                       std::span<const double> x,
                                       const MetricFn& metric) {
    double best = std::numeric_limits<double>::infinity();
    int best_n = 0;
    for (int n = 0; n < grid.neurons(); ++n) {
        const double d = metric(grid.weights.row(n), x);
        if (d < best) {
            best = d;
            best_n = n;
        }
    }
    return {best_n / grid.width, best_n % grid.width};
}

void kohonen_update(SofmGrid& grid, std::span<const double> x,
                    std::pair<int, int> bmu, double alpha, double radius) {
    const double two_r2 = 2.0 * radius * radius;
    for (int r = 0; r < grid.height; ++r) {
        for (int c = 0; c < grid.width; ++c) {
            const double dr = r - bmu.first;
            const double dc = c - bmu.second;
            const double h = std::exp(-(dr * dr + dc * dc) / two_r2);
            const double step = alpha * h;
            auto w = grid.weights.row(static_cast<std::size_t>(r) * grid.width + c);
            for (std::size_t j = 0; j < w.size(); ++j)
                w[j] += step * (x[j] - w[j]);
        }
    }
}

namespace {

// Shared presentation loop; find_bmu sees the presentation's input index and
// must return the winning neuron. on_updated runs after each Kohonen step.
template <typename FindBmu, typename OnUpdated>
SofmGrid run_fit(const FeatureMatrix& genomes, const SofmParams& params,
                 FindBmu&& find_bmu, OnUpdated&& on_updated, SofmGrid grid) {
    const int n = static_cast<int>(genomes.rows());
    const long long total = static_cast<long long>(params.epochs) * n;
    const double r_start = params.radius_start;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    SplitMix64 order_rng(mix64(params.seed + kOrderStream));

    long long t = 0;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        fisher_yates_shuffle(order, order_rng);
        for (int idx : order) {
            const double frac =
                total > 1 ? static_cast<double>(t) / static_cast<double>(total - 1)
                          : 0.0;
            const double alpha =
                params.alpha_start + (params.alpha_end - params.alpha_start) * frac;
            const double radius = r_start + (params.radius_end - r_start) * frac;
            const auto bmu = find_bmu(grid, idx);
            kohonen_update(grid, genomes.row(idx), bmu, alpha, radius);
            on_updated(grid);
            ++t;
        }
    }
    return grid;
}

}  // namespace

SofmGrid fit(const FeatureMatrix& genomes, const SofmParams& params,
             const MetricFn& metric) {
    params.validate();
    if (genomes.rows() == 0) throw std::invalid_argument("fit: empty input");
    SofmGrid grid = init_grid(genomes, params.width, params.height, params.seed);
    return run_fit(
        genomes, params,
        [&](const SofmGrid& g, int idx) {
            return best_matching_unit(g, genomes.row(idx), metric);
        },
        [](const SofmGrid&) {}, std::move(grid));
}

SofmGrid fit_scored(const FeatureMatrix& genomes, const SofmParams& params,
                    const ScorerFn& scorer) {
    params.validate();
    if (genomes.rows() == 0) throw std::invalid_argument("fit_scored: empty input");

    const int n = static_cast<int>(genomes.rows());
    std::vector<double> input_score(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) input_score[i] = scorer(genomes.row(i));

    SofmGrid grid = init_grid(genomes, params.width, params.height, params.seed);
    const int neurons = grid.neurons();
    std::vector<double> neuron_score(neurons);
    const auto rescore = [&](const SofmGrid& g) {
#pragma omp parallel for schedule(static)
        for (int m = 0; m < neurons; ++m) neuron_score[m] = scorer(g.weights.row(m));
    };
    rescore(grid);

    return run_fit(
        genomes, params,
        [&](const SofmGrid& g, int idx) {
            double best = std::numeric_limits<double>::infinity();
            int best_n = 0;
            for (int m = 0; m < neurons; ++m) {
                const double d = std::abs(input_score[idx] - neuron_score[m]);
                if (d < best) {
                    best = d;
                    best_n = m;
                }
            }
            return std::pair{best_n / g.width, best_n % g.width};
        },
        rescore, std::move(grid));
}

namespace {

template <typename BmuOf>
Labeling assign_impl(const SofmGrid& grid, std::size_t n, BmuOf&& bmu_of,
                     bool parallel) {
    Labeling labels(n);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            const auto [r, c] = bmu_of(static_cast<std::size_t>(i));
            labels[i] = r * grid.width + c;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const auto [r, c] = bmu_of(i);
            labels[i] = r * grid.width + c;
        }
    }
    return labels;
}

}  // namespace

Labeling assign_clusters(const SofmGrid& grid, const FeatureMatrix& genomes,
                         const MetricFn& metric) {
    return assign_impl(
        grid, genomes.rows(),
        [&](std::size_t i) { return best_matching_unit(grid, genomes.row(i), metric); },
        true);
}

Labeling assign_clusters_serial(const SofmGrid& grid, const FeatureMatrix& genomes,
                                const MetricFn& metric) {
    return assign_impl(
        grid, genomes.rows(),
        [&](std::size_t i) { return best_matching_unit(grid, genomes.row(i), metric); },
        false);
}

Labeling assign_clusters_scored(const SofmGrid& grid, const FeatureMatrix& genomes,
                                const ScorerFn& scorer) {
    const int neurons = grid.neurons();
    std::vector<double> neuron_score(neurons);
#pragma omp parallel for schedule(static)
    for (int m = 0; m < neurons; ++m) neuron_score[m] = scorer(grid.weights.row(m));

    const int n = static_cast<int>(genomes.rows());
    std::vector<double> input_score(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) input_score[i] = scorer(genomes.row(i));

    return assign_impl(
        grid, genomes.rows(),
        [&](std::size_t i) {
            double best = std::numeric_limits<double>::infinity();
            int best_n = 0;
            for (int m = 0; m < neurons; ++m) {
                const double d = std::abs(input_score[i] - neuron_score[m]);
                if (d < best) {
                    best = d;
                    best_n = m;
                }
            }
            return std::pair{best_n / grid.width, best_n % grid.width};
        },
        true);
}

std::vector<double> neuron_oip(const SofmGrid& grid, const ScorerFn& scorer) {
    std::vector<double> out(grid.neurons());
    for (int m = 0; m < grid.neurons(); ++m) out[m] = scorer(grid.weights.row(m));
    return out;
}

}  // namespace ensred

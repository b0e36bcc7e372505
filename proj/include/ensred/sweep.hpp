#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ensred/gb.hpp"
#include "ensred/matrix.hpp"
#include "ensred/mlp.hpp"

namespace ensred {

enum class RegressorKind { gradient_boosting, mlp };

struct SweepParams {
    std::vector<double> fractions;  // empty selects the default 0.05..0.80 grid
    int repeats = 5;
    RegressorKind regressor = RegressorKind::gradient_boosting;
    std::uint64_t seed = 0;
    GbParams gb;
    MlpParams mlp;

    void validate() const;
};

/// 0.05, 0.10, ..., 0.80.
std::vector<double> default_sweep_fractions();

struct SweepRow {
    double fraction = 0.0;
    int repeats = 0;
    double rmse_mean = 0.0;  // sqrt of the mean MSE across repeats
    std::vector<double> rmse_per_repeat;
};

using SweepResult = std::vector<SweepRow>;

/// Training-fraction sweep: per (fraction, repeat) cell, a seeded random
/// sample without replacement becomes the training set and its complement
/// the test set. Each cell owns a random stream keyed by (seed, fraction,
/// repeat), so a cell's result does not depend on which other cells run and
/// cells can execute concurrently.
SweepResult sample_size_sweep(const FeatureMatrix& genomes,
                              std::span<const double> oip,
                              const SweepParams& params);

}  // namespace ensred

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ensred/matrix.hpp"

namespace ensred {

struct MlpParams {
    int hidden_units = 30;
    double learning_rate = 1e-3;  // adam step size
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int batch_size = 32;
    int epochs = 200;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Single-hidden-layer perceptron (input -> hidden relu -> linear output).
/// Parameters live in one flat vector, laid out W1 (hidden x input,
/// row-major), b1, W2, b2. Targets are standardized during training; the
/// fitted mean/scale are stored so predict() returns original units.
struct MlpModel {
    int input_dim = 0;
    int hidden_units = 0;
    std::vector<double> params;
    double target_mean = 0.0;
    double target_scale = 1.0;

    std::size_t w1_offset() const { return 0; }
    std::size_t b1_offset() const {
        return static_cast<std::size_t>(hidden_units) * input_dim;
    }
    std::size_t w2_offset() const { return b1_offset() + hidden_units; }
    std::size_t b2_offset() const { return w2_offset() + hidden_units; }
    std::size_t parameter_count() const { return b2_offset() + 1; }

    /// Raw network output in standardized target space.
    double forward_standardized(std::span<const double> x) const;

    /// De-standardized prediction. Throws std::invalid_argument on a
    /// dimension mismatch.
    double predict(std::span<const double> x) const;
};

/// Glorot-uniform weights (seeded), zero biases.
MlpModel init_mlp(int input_dim, const MlpParams& params);

struct MlpBatchGradient {
    double loss = 0.0;  // mean squared error over the batch, standardized space
    std::vector<double> grad;
};

/// Loss and full-parameter gradient for one mini-batch of standardized
/// targets. Exposed so the analytic gradient can be checked against finite
/// differences.
MlpBatchGradient mlp_batch_gradient(const MlpModel& model, const FeatureMatrix& X,
                                    std::span<const double> y_standardized,
                                    std::span<const int> batch);

/// Mini-batch adam on mean squared error over standardized targets.
/// Deterministic given the seed.
MlpModel train_mlp(const FeatureMatrix& X, std::span<const double> y,
                   const MlpParams& params);

double predict_mlp(const MlpModel& model, std::span<const double> x);

void save_mlp(const MlpModel& model, const std::string& path);
MlpModel load_mlp(const std::string& path);

}  // namespace ensred

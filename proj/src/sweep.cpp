#include "ensred/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ensred/metrics.hpp"
#include "ensred/parallel.hpp"
#include "ensred/rng.hpp"

namespace ensred {

std::vector<double> default_sweep_fractions() {
    std::vector<double> f;
    for (int i = 1; i <= 16; ++i) f.push_back(0.05 * i);
    return f;
}

void SweepParams::validate() const {
    if (repeats < 1) throw std::invalid_argument("SweepParams: repeats must be >= 1");
    const auto& fr = fractions.empty() ? default_sweep_fractions() : fractions;
    for (double f : fr)
        if (!(f > 0.0 && f < 1.0))
            throw std::invalid_argument("SweepParams: fractions must lie in (0, 1)");
    for (std::size_t i = 1; i < fr.size(); ++i)
        if (!(fr[i] > fr[i - 1]))
            throw std::invalid_argument("SweepParams: fractions must be increasing");
    gb.validate();
    mlp.validate();
}

namespace {

double run_cell(const FeatureMatrix& genomes, std::span<const double> oip,
                const SweepParams& params, double fraction, int repeat) {
    const int n = static_cast<int>(genomes.rows());
    const int k = static_cast<int>(fraction * n);

    // Stream keyed by value, not position, so a cell is reproducible on its own.
    const CounterStream key(params.seed,
                            static_cast<std::uint64_t>(std::llround(fraction * 1e6)),
                            static_cast<std::uint64_t>(repeat));
    SplitMix64 rng(key.bits(0));
    auto train_ids = sample_without_replacement(n, k, rng);
    std::sort(train_ids.begin(), train_ids.end());

    std::vector<char> in_train(n, 0);
    for (int id : train_ids) in_train[id] = 1;

    FeatureMatrix x_train(k, genomes.cols());
    std::vector<double> y_train(k);
    for (int i = 0; i < k; ++i) {
        const auto src = genomes.row(train_ids[i]);
        std::copy(src.begin(), src.end(), x_train.row(i).begin());
        y_train[i] = oip[train_ids[i]];
    }

    std::vector<double> y_test, y_hat;
    y_test.reserve(n - k);
    y_hat.reserve(n - k);
    if (params.regressor == RegressorKind::gradient_boosting) {
        GbParams gp = params.gb;
        gp.seed = key.bits(1);
        const GbModel model = train_gb(x_train, y_train, gp);
        for (int i = 0; i < n; ++i) {
            if (in_train[i]) continue;
            y_test.push_back(oip[i]);
            y_hat.push_back(predict_gb(model, genomes.row(i)));
        }
    } else {
        MlpParams mp = params.mlp;
        mp.seed = key.bits(1);
        const MlpModel model = train_mlp(x_train, y_train, mp);
        for (int i = 0; i < n; ++i) {
            if (in_train[i]) continue;
            y_test.push_back(oip[i]);
            y_hat.push_back(model.predict(genomes.row(i)));
        }
    }
    return error_metrics(y_test, y_hat).mse;
}

}  // namespace

SweepResult sample_size_sweep(const FeatureMatrix& genomes,
                              std::span<const double> oip,
                              const SweepParams& params) {
    params.validate();
    if (genomes.rows() != oip.size())
        throw std::invalid_argument("sample_size_sweep: genomes/labels mismatch");

    const std::vector<double> fractions =
        params.fractions.empty() ? default_sweep_fractions() : params.fractions;

    // Exceptions must not escape the parallel loop, so split sizes are
    // checked up front.
    for (double f : fractions) {
        const int k = static_cast<int>(f * static_cast<double>(genomes.rows()));
        if (k < 1 || k >= static_cast<int>(genomes.rows()))
            throw std::invalid_argument(
                "sample_size_sweep: fraction leaves an empty split");
    }

    const int n_cells = static_cast<int>(fractions.size()) * params.repeats;
    std::vector<double> cell_mse(n_cells);
#pragma omp parallel for schedule(dynamic, 1)
    for (int c = 0; c < n_cells; ++c) {
        const double fraction = fractions[c / params.repeats];
        const int repeat = c % params.repeats;
        cell_mse[c] = run_cell(genomes, oip, params, fraction, repeat);
    }

    SweepResult result;
    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
        SweepRow row;
        row.fraction = fractions[fi];
        row.repeats = params.repeats;
        double mse_sum = 0.0;
        for (int r = 0; r < params.repeats; ++r) {
            const double mse = cell_mse[fi * params.repeats + r];
            row.rmse_per_repeat.push_back(std::sqrt(mse));
            mse_sum += mse;
        }
        row.rmse_mean = std::sqrt(mse_sum / params.repeats);
        result.push_back(std::move(row));
    }
    return result;
}

}  // namespace ensred

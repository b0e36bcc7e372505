// Times each parallel kernel against its serial reference on the seed-42
// ensemble and checks the outputs agree bit for bit.
//
//   bench_kernels [n_models]
//
// n_models caps the subset used by the quadratic kernels (default 2048).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "ensred/clustering.hpp"
#include "ensred/gb.hpp"
#include "ensred/genome.hpp"
#include "ensred/mlp.hpp"
#include "ensred/oilfield.hpp"
#include "ensred/parallel.hpp"
#include "ensred/pipeline.hpp"
#include "ensred/sofm.hpp"
#include "ensred/sweep.hpp"

using namespace ensred;
using clock_type = std::chrono::steady_clock;

namespace {

double time_call(const std::function<void()>& fn) {
    const auto start = clock_type::now();
    fn();
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

void report(const std::string& name, double serial, double parallel, bool identical) {
    std::printf("%-28s %9.3f s %9.3f s %7.2fx   %s\n", name.c_str(), serial,
                parallel, serial / parallel, identical ? "identical" : "MISMATCH");
}

FeatureMatrix head_rows(const FeatureMatrix& m, std::size_t n) {
    FeatureMatrix out(n, m.cols());
    for (std::size_t i = 0; i < n; ++i) {
        const auto src = m.row(i);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t subset = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 2048;
    std::printf("threads available: %d\n", par::max_threads());
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    OilfieldConfig cfg;  // seed 42
    const auto lib = generate_gene_library(cfg);
    const auto genomes = ensemble_matrix(enumerate_ensemble(lib));

    // Full-ensemble oracle evaluation.
    {
        std::vector<OipLabel> a, b;
        const double ts = time_call([&] { a = evaluate_ensemble_serial(lib, cfg); });
        const double tp = time_call([&] { b = evaluate_ensemble(lib, cfg); });
        bool same = a.size() == b.size();
        for (std::size_t i = 0; same && i < a.size(); ++i)
            same = a[i].id == b[i].id && a[i].oip == b[i].oip;
        report("evaluate_ensemble", ts, tp, same);
    }

    const auto labels = evaluate_ensemble(lib, cfg);
    std::vector<double> oip(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) oip[i] = labels[i].oip;

    // GB model shared by the prediction kernels below.
    GbModel model;
    {
        const auto ids = reduction_sample_ids(ReductionConfig{});
        FeatureMatrix x(ids.size(), genomes.cols());
        std::vector<double> y(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const auto src = genomes.row(ids[i]);
            std::copy(src.begin(), src.end(), x.row(i).begin());
            y[i] = oip[ids[i]];
        }
        model = train_gb(x, y, {});
    }

    // Sweep cells: independent (fraction, repeat) trainings in parallel.
    {
        SweepParams sp;
        sp.fractions = {0.05, 0.10};
        sp.repeats = 2;
        sp.seed = 42;
        SweepResult a, b;
        const int threads = par::max_threads();
        par::set_threads(1);
        const double ts = time_call([&] { a = sample_size_sweep(genomes, oip, sp); });
        par::set_threads(threads);
        const double tp = time_call([&] { b = sample_size_sweep(genomes, oip, sp); });
        bool same = a.size() == b.size();
        for (std::size_t i = 0; same && i < a.size(); ++i)
            same = a[i].rmse_mean == b[i].rmse_mean &&
                   a[i].rmse_per_repeat == b[i].rmse_per_repeat;
        report("sweep cells (4 trainings)", ts, tp, same);
    }

    // Batch prediction over the full ensemble.
    {
        std::vector<double> a, b;
        const double ts = time_call([&] { a = predict_gb_batch_serial(model, genomes); });
        const double tp = time_call([&] { b = predict_gb_batch(model, genomes); });
        report("predict_gb_batch", ts, tp, a == b);
    }

    // DBSCAN on a subset (both sides are O(n^2) scans).
    {
        const auto pts = head_rows(genomes, std::min(subset, genomes.rows()));
        const DbscanParams params{2.5, 5};
        Labeling a, b;
        const double ts =
            time_call([&] { a = dbscan_reference(pts, params, euclidean_metric()); });
        const double tp = time_call([&] { b = dbscan(pts, params, euclidean_metric()); });
        report("dbscan (n=" + std::to_string(pts.rows()) + ")", ts, tp, a == b);
    }

    // SOFM cluster assignment over the full ensemble.
    {
        const auto grid = init_grid(genomes, 8, 8, cfg.seed);
        Labeling a, b;
        const double ts = time_call(
            [&] { a = assign_clusters_serial(grid, genomes, euclidean_metric()); });
        const double tp =
            time_call([&] { b = assign_clusters(grid, genomes, euclidean_metric()); });
        report("assign_clusters", ts, tp, a == b);
    }

    // MLP batch gradients (parallel across batch samples).
    {
        MlpParams mp;
        mp.seed = 1;
        const MlpModel mlp = init_mlp(static_cast<int>(genomes.cols()), mp);
        std::vector<double> y_std(genomes.rows(), 0.0);
        std::vector<int> batch(256);
        std::iota(batch.begin(), batch.end(), 0);
        MlpBatchGradient a, b;
        const int threads = par::max_threads();
        par::set_threads(1);
        const double ts = time_call([&] {
            for (int r = 0; r < 50; ++r) a = mlp_batch_gradient(mlp, genomes, y_std, batch);
        });
        par::set_threads(threads);
        const double tp = time_call([&] {
            for (int r = 0; r < 50; ++r) b = mlp_batch_gradient(mlp, genomes, y_std, batch);
        });
        report("mlp_batch_gradient (x50)", ts, tp,
               a.loss == b.loss && a.grad == b.grad);
    }

    return 0;
}

#include "ensred/gb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ensred/loss.hpp"
#include "ensred/parallel.hpp"

namespace ensred {

void GbParams::validate() const {
    if (n_stages < 1) throw std::invalid_argument("GbParams: n_stages must be >= 1");
    if (max_depth < 0) throw std::invalid_argument("GbParams: max_depth must be >= 0");
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("GbParams: learning_rate must be > 0");
    if (!(huber_alpha > 0.0 && huber_alpha <= 1.0))
        throw std::invalid_argument("GbParams: huber_alpha must be in (0, 1]");
    if (min_samples_split < 2)
        throw std::invalid_argument("GbParams: min_samples_split must be >= 2");
}

double sorted_quantile(std::span<const double> sorted_values, double q) {
    if (sorted_values.empty())
        throw std::invalid_argument("sorted_quantile: empty input");
    const double pos = q * static_cast<double>(sorted_values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted_values.size()) return sorted_values.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

namespace {

constexpr double kDeltaFloor = 1e-12;

double sorted_median(std::vector<double>& buf) {
    std::sort(buf.begin(), buf.end());
    const std::size_t m = buf.size();
    return m % 2 == 1 ? buf[m / 2] : 0.5 * (buf[m / 2 - 1] + buf[m / 2]);
}

double mean_huber(std::span<const double> residuals, double delta) {
    double s = 0.0;
    for (double r : residuals) s += huber_loss(r, delta).loss;
    return s / static_cast<double>(residuals.size());
}

double current_delta(std::span<const double> residuals, double alpha,
                     std::vector<double>& abs_buf) {
    abs_buf.clear();
    for (double r : residuals) abs_buf.push_back(std::abs(r));
    std::sort(abs_buf.begin(), abs_buf.end());
    return std::max(sorted_quantile(abs_buf, alpha), kDeltaFloor);
}

}  // namespace

GbModel train_gb(const FeatureMatrix& X, std::span<const double> y,
                 const GbParams& params, GbDiagnostics* diagnostics) {
    params.validate();
    if (X.rows() == 0 || y.empty())
        throw std::invalid_argument("train_gb: empty training data");
    if (X.rows() != y.size())
        throw std::invalid_argument("train_gb: X/y size mismatch");

    const std::size_t n = X.rows();

    GbModel model;
    model.n_features = static_cast<int>(X.cols());
    model.learning_rate = params.learning_rate;
    model.huber_alpha = params.huber_alpha;
    {
        std::vector<double> buf(y.begin(), y.end());
        model.init_prediction = sorted_median(buf);
    }
    model.trees.reserve(params.n_stages);

    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - model.init_prediction;

    std::vector<double> abs_buf, gradient(n), leaf_res, dev;
    abs_buf.reserve(n);

    if (diagnostics) {
        diagnostics->initial_loss =
            mean_huber(residual, current_delta(residual, params.huber_alpha, abs_buf));
        diagnostics->stage_loss.clear();
        diagnostics->stage_delta.clear();
    }

    TreeTrainer trainer(X, y);
    const TreeParams tree_params{params.max_depth, params.min_samples_split};

    for (int stage = 0; stage < params.n_stages; ++stage) {
        const double delta = current_delta(residual, params.huber_alpha, abs_buf);

        for (std::size_t i = 0; i < n; ++i)
            gradient[i] = huber_loss(residual[i], delta).gradient;

        // Huber terminal update: median of the leaf's residuals plus the mean
        // deviation clipped to [-delta, delta], summed over sorted values so
        // the result does not depend on row order.
        const LeafValueFn leaf_value = [&](std::span<const int> members) {
            leaf_res.clear();
            for (int s : members) leaf_res.push_back(residual[s]);
            const double med = sorted_median(leaf_res);  // sorts leaf_res
            double s = 0.0;
            for (double r : leaf_res) s += std::clamp(r - med, -delta, delta);
            return med + s / static_cast<double>(leaf_res.size());
        };

        RegressionTree tree = trainer.fit(gradient, tree_params, leaf_value);

        const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static) if (!par::in_parallel())
        for (long long i = 0; i < nn; ++i)
            residual[i] -= params.learning_rate * tree.predict(X.row(i));

        model.trees.push_back(std::move(tree));

        if (diagnostics) {
            diagnostics->stage_delta.push_back(delta);
            diagnostics->stage_loss.push_back(mean_huber(
                residual, current_delta(residual, params.huber_alpha, abs_buf)));
        }
    }
    return model;
}

double predict_gb(const GbModel& model, std::span<const double> x) {
    if (static_cast<int>(x.size()) != model.n_features)
        throw std::invalid_argument("predict_gb: dimension mismatch");
    double s = 0.0;
    for (const auto& tree : model.trees) s += tree.predict(x);
    return model.init_prediction + model.learning_rate * s;
}

std::vector<double> predict_gb_batch(const GbModel& model, const FeatureMatrix& X) {
    std::vector<double> out(X.rows());
    const long long n = static_cast<long long>(X.rows());
#pragma omp parallel for schedule(static) if (!par::in_parallel())
    for (long long i = 0; i < n; ++i) out[i] = predict_gb(model, X.row(i));
    return out;
}

std::vector<double> predict_gb_batch_serial(const GbModel& model,
                                            const FeatureMatrix& X) {
    std::vector<double> out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) out[i] = predict_gb(model, X.row(i));
    return out;
}

ScorerFn gb_scorer(const GbModel& model) {
    return [&model](std::span<const double> x) { return predict_gb(model, x); };
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void save_gb(const GbModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_gb: cannot open " + path);
    out << "gb_model 1\n";
    out << "n_features " << model.n_features << "\n";
    out << "init_prediction " << fmt(model.init_prediction) << "\n";
    out << "learning_rate " << fmt(model.learning_rate) << "\n";
    out << "huber_alpha " << fmt(model.huber_alpha) << "\n";
    out << "n_trees " << model.trees.size() << "\n";
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
        const auto& nodes = model.trees[t].nodes();
        out << "tree " << t << " " << nodes.size() << "\n";
        for (const auto& nd : nodes)
            out << nd.feature << " " << fmt(nd.threshold) << " " << nd.left << " "
                << nd.right << " " << fmt(nd.value) << "\n";
    }
    if (!out) throw std::runtime_error("save_gb: write failed for " + path);
}

GbModel load_gb(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_gb: cannot open " + path);
    const auto fail = [&path](const std::string& what) -> std::runtime_error {
        return std::runtime_error("load_gb: " + what + " in " + path);
    };

    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "gb_model" || version != 1)
        throw fail("bad header");

    GbModel model;
    std::size_t n_trees = 0;
    if (!(in >> tag >> model.n_features) || tag != "n_features") throw fail("n_features");
    if (!(in >> tag >> model.init_prediction) || tag != "init_prediction")
        throw fail("init_prediction");
    if (!(in >> tag >> model.learning_rate) || tag != "learning_rate")
        throw fail("learning_rate");
    if (!(in >> tag >> model.huber_alpha) || tag != "huber_alpha")
        throw fail("huber_alpha");
    if (!(in >> tag >> n_trees) || tag != "n_trees") throw fail("n_trees");

    model.trees.resize(n_trees);
    for (std::size_t t = 0; t < n_trees; ++t) {
        std::size_t index = 0, n_nodes = 0;
        if (!(in >> tag >> index >> n_nodes) || tag != "tree" || index != t)
            throw fail("tree header");
        auto& nodes = model.trees[t].nodes();
        nodes.resize(n_nodes);
        for (auto& nd : nodes)
            if (!(in >> nd.feature >> nd.threshold >> nd.left >> nd.right >> nd.value))
                throw fail("node row");
    }
    return model;
}

}  // namespace ensred

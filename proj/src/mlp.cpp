#include "ensred/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "ensred/parallel.hpp"
#include "ensred/rng.hpp"

namespace ensred {

void MlpParams::validate() const {
    if (hidden_units < 1)
        throw std::invalid_argument("MlpParams: hidden_units must be >= 1");
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("MlpParams: learning_rate must be > 0");
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
        throw std::invalid_argument("MlpParams: betas must be in (0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("MlpParams: epsilon must be > 0");
    if (batch_size < 1) throw std::invalid_argument("MlpParams: batch_size must be >= 1");
    if (epochs < 1) throw std::invalid_argument("MlpParams: epochs must be >= 1");
}

double MlpModel::forward_standardized(std::span<const double> x) const {
    const double* w1 = params.data() + w1_offset();
    const double* b1 = params.data() + b1_offset();
    const double* w2 = params.data() + w2_offset();
    double out = params[b2_offset()];
    for (int j = 0; j < hidden_units; ++j) {
        double pre = b1[j];
        const double* row = w1 + static_cast<std::size_t>(j) * input_dim;
        for (int i = 0; i < input_dim; ++i) pre += row[i] * x[i];
        if (pre > 0.0) out += w2[j] * pre;
    }
    return out;
}

double MlpModel::predict(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != input_dim)
        throw std::invalid_argument("MlpModel::predict: dimension mismatch");
    return forward_standardized(x) * target_scale + target_mean;
}

MlpModel init_mlp(int input_dim, const MlpParams& params) {
    params.validate();
    if (input_dim < 1) throw std::invalid_argument("init_mlp: input_dim must be >= 1");

    MlpModel m;
    m.input_dim = input_dim;
    m.hidden_units = params.hidden_units;
    m.params.assign(m.parameter_count(), 0.0);

    SplitMix64 rng(mix64(params.seed + 1));
    const auto glorot = [&rng](double fan_in, double fan_out) {
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        return limit * (2.0 * rng.uniform01() - 1.0);
    };
    for (std::size_t k = m.w1_offset(); k < m.b1_offset(); ++k)
        m.params[k] = glorot(input_dim, params.hidden_units);
    for (std::size_t k = m.w2_offset(); k < m.b2_offset(); ++k)
        m.params[k] = glorot(params.hidden_units, 1);
    return m;
}

MlpBatchGradient mlp_batch_gradient(const MlpModel& model, const FeatureMatrix& X,
                                    std::span<const double> y_standardized,
                                    std::span<const int> batch) {
    if (batch.empty())
        throw std::invalid_argument("mlp_batch_gradient: empty batch");

    const std::size_t n_params = model.parameter_count();
    const int batch_n = static_cast<int>(batch.size());
    const double inv_b = 1.0 / static_cast<double>(batch_n);

    // Per-sample contributions are computed independently and reduced in
    // batch order, so the gradient is identical for any thread count.
    std::vector<double> sample_loss(batch_n);
    std::vector<double> sample_grad(static_cast<std::size_t>(batch_n) * n_params);

#pragma omp parallel for schedule(static) if (!par::in_parallel())
    for (int s = 0; s < batch_n; ++s) {
        const auto x = X.row(batch[s]);
        double* g = sample_grad.data() + static_cast<std::size_t>(s) * n_params;
        std::fill(g, g + n_params, 0.0);

        const double* w1 = model.params.data() + model.w1_offset();
        const double* b1 = model.params.data() + model.b1_offset();
        const double* w2 = model.params.data() + model.w2_offset();

        std::vector<double> pre(model.hidden_units);
        double out = model.params[model.b2_offset()];
        for (int j = 0; j < model.hidden_units; ++j) {
            double p = b1[j];
            const double* row = w1 + static_cast<std::size_t>(j) * model.input_dim;
            for (int i = 0; i < model.input_dim; ++i) p += row[i] * x[i];
            pre[j] = p;
            if (p > 0.0) out += w2[j] * p;
        }

        const double err = out - y_standardized[batch[s]];
        sample_loss[s] = err * err * inv_b;
        const double dout = 2.0 * err * inv_b;

        g[model.b2_offset()] = dout;
        double* gw1 = g + model.w1_offset();
        double* gb1 = g + model.b1_offset();
        double* gw2 = g + model.w2_offset();
        for (int j = 0; j < model.hidden_units; ++j) {
            const double h = pre[j] > 0.0 ? pre[j] : 0.0;
            gw2[j] = dout * h;
            if (pre[j] > 0.0) {
                const double dpre = dout * w2[j];
                gb1[j] = dpre;
                double* row = gw1 + static_cast<std::size_t>(j) * model.input_dim;
                for (int i = 0; i < model.input_dim; ++i) row[i] = dpre * x[i];
            }
        }
    }

    MlpBatchGradient out;
    out.grad.assign(n_params, 0.0);
    for (int s = 0; s < batch_n; ++s) {
        out.loss += sample_loss[s];
        const double* g = sample_grad.data() + static_cast<std::size_t>(s) * n_params;
        for (std::size_t k = 0; k < n_params; ++k) out.grad[k] += g[k];
    }
    return out;
}

MlpModel train_mlp(const FeatureMatrix& X, std::span<const double> y,
                   const MlpParams& params) {
    params.validate();
    if (X.rows() == 0 || y.empty())
        throw std::invalid_argument("train_mlp: empty training data");
    if (X.rows() != y.size())
        throw std::invalid_argument("train_mlp: X/y size mismatch");

    const std::size_t n = X.rows();

    MlpModel model = init_mlp(static_cast<int>(X.cols()), params);
    {
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double v : y) var += (v - mean) * (v - mean);
        var /= static_cast<double>(n);
        model.target_mean = mean;
        model.target_scale = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    std::vector<double> y_std(n);
    for (std::size_t i = 0; i < n; ++i)
        y_std[i] = (y[i] - model.target_mean) / model.target_scale;

    const std::size_t n_params = model.parameter_count();
    std::vector<double> m1(n_params, 0.0), m2(n_params, 0.0);
    double beta1_t = 1.0, beta2_t = 1.0;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    SplitMix64 shuffle_rng(mix64(params.seed + 2));

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        fisher_yates_shuffle(order, shuffle_rng);
        for (std::size_t start = 0; start < n; start += params.batch_size) {
            const std::size_t stop = std::min(n, start + params.batch_size);
            const std::span<const int> batch(order.data() + start, stop - start);
            const auto bg = mlp_batch_gradient(model, X, y_std, batch);

            beta1_t *= params.beta1;
            beta2_t *= params.beta2;
            for (std::size_t k = 0; k < n_params; ++k) {
                const double g = bg.grad[k];
                m1[k] = params.beta1 * m1[k] + (1.0 - params.beta1) * g;
                m2[k] = params.beta2 * m2[k] + (1.0 - params.beta2) * g * g;
                const double mhat = m1[k] / (1.0 - beta1_t);
                const double vhat = m2[k] / (1.0 - beta2_t);
                model.params[k] -=
                    params.learning_rate * mhat / (std::sqrt(vhat) + params.epsilon);
            }
        }
    }
    return model;
}

double predict_mlp(const MlpModel& model, std::span<const double> x) {
    return model.predict(x);
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void save_mlp(const MlpModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_mlp: cannot open " + path);
    out << "mlp_model 1\n";
    out << "input_dim " << model.input_dim << "\n";
    out << "hidden_units " << model.hidden_units << "\n";
    out << "target_mean " << fmt(model.target_mean) << "\n";
    out << "target_scale " << fmt(model.target_scale) << "\n";
    out << "params " << model.params.size() << "\n";
    for (double v : model.params) out << fmt(v) << "\n";
    if (!out) throw std::runtime_error("save_mlp: write failed for " + path);
}

MlpModel load_mlp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_mlp: cannot open " + path);
    std::string tag;
    int version = 0;
    MlpModel model;
    std::size_t count = 0;
    if (!(in >> tag >> version) || tag != "mlp_model" || version != 1)
        throw std::runtime_error("load_mlp: bad header in " + path);
    if (!(in >> tag >> model.input_dim) || tag != "input_dim" ||
        !(in >> tag >> model.hidden_units) || tag != "hidden_units" ||
        !(in >> tag >> model.target_mean) || tag != "target_mean" ||
        !(in >> tag >> model.target_scale) || tag != "target_scale" ||
        !(in >> tag >> count) || tag != "params")
        throw std::runtime_error("load_mlp: bad field in " + path);
    if (count != model.parameter_count())
        throw std::runtime_error("load_mlp: parameter count mismatch in " + path);
    model.params.resize(count);
    for (double& v : model.params)
        if (!(in >> v)) throw std::runtime_error("load_mlp: short file " + path);
    return model;
}

}  // namespace ensred

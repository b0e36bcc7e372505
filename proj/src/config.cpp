#include "ensred/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "ensred/errors.hpp"

namespace ensred {

SweepParams AppConfig::sweep() const {
    SweepParams p;
    p.fractions = sweep_fractions;
    p.repeats = sweep_repeats;
    p.regressor = sweep_regressor;
    p.seed = sweep_seed;
    p.gb = gb;
    p.mlp = mlp;
    return p;
}

ReductionConfig AppConfig::reduction() const {
    ReductionConfig c;
    c.sample_fraction = sample_fraction;
    c.oilfield = oilfield;
    c.gb = gb;
    c.sofm = sofm;
    c.n_bins_reference = histogram_bins;
    c.seed = reduce_seed;
    return c;
}

void AppConfig::validate() const {
    try {
        oilfield.validate();
        gb.validate();
        mlp.validate();
        sofm.validate();
        dbscan.validate();
        if (histogram_bins < 1)
            throw std::invalid_argument("histogram: n_bins must be >= 1");
        sweep().validate();
        reduction().validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

AppConfig default_config() { return {}; }

namespace {

using nlohmann::json;

class Section {
public:
    Section(const json& j, std::string name) : j_(&j), name_(std::move(name)) {}

    template <typename T>
    void get(const char* key, T& value) {
        seen_.insert(key);
        if (!j_->contains(key)) return;
        try {
            value = j_->at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("config: bad value for " + name_ + "." + key);
        }
    }

    // Unknown keys are rejected so typos cannot silently fall back to
    // defaults.
    void finish() const {
        for (const auto& [key, unused] : j_->items())
            if (!seen_.contains(key))
                throw ConfigError("config: unknown key " + name_ + "." + key);
    }

private:
    const json* j_;
    std::string name_;
    std::set<std::string> seen_;
};

const json& subsection(const json& root, const char* key) {
    static const json empty = json::object();
    if (!root.contains(key)) return empty;
    if (!root.at(key).is_object())
        throw ConfigError(std::string("config: section ") + key +
                          " must be an object");
    return root.at(key);
}

}  // namespace

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw ConfigError("config: parse error in " + path.string() + ": " +
                          e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");

    AppConfig cfg;
    {
        Section s(subsection(root, "oilfield"), "oilfield");
        s.get("seed", cfg.oilfield.seed);
        s.get("n_properties", cfg.oilfield.n_properties);
        s.get("n_alleles", cfg.oilfield.n_alleles);
        s.get("knot_step_sigma", cfg.oilfield.knot_step_sigma);
        s.get("volume_constant", cfg.oilfield.volume_constant);
        s.get("sw_base", cfg.oilfield.sw_base);
        s.get("ntg_base", cfg.oilfield.ntg_base);
        s.get("phi_base", cfg.oilfield.phi_base);
        s.get("base_jitter_sigma", cfg.oilfield.base_jitter_sigma);
        s.finish();
    }
    {
        Section s(subsection(root, "gb"), "gb");
        s.get("n_stages", cfg.gb.n_stages);
        s.get("max_depth", cfg.gb.max_depth);
        s.get("learning_rate", cfg.gb.learning_rate);
        s.get("huber_alpha", cfg.gb.huber_alpha);
        s.get("min_samples_split", cfg.gb.min_samples_split);
        s.get("seed", cfg.gb.seed);
        s.finish();
    }
    {
        Section s(subsection(root, "mlp"), "mlp");
        s.get("hidden_units", cfg.mlp.hidden_units);
        s.get("learning_rate", cfg.mlp.learning_rate);
        s.get("beta1", cfg.mlp.beta1);
        s.get("beta2", cfg.mlp.beta2);
        s.get("epsilon", cfg.mlp.epsilon);
        s.get("batch_size", cfg.mlp.batch_size);
        s.get("epochs", cfg.mlp.epochs);
        s.get("seed", cfg.mlp.seed);
        s.finish();
    }
    {
        Section s(subsection(root, "sofm"), "sofm");
        s.get("width", cfg.sofm.width);
        s.get("height", cfg.sofm.height);
        s.get("epochs", cfg.sofm.epochs);
        s.get("alpha_start", cfg.sofm.alpha_start);
        s.get("alpha_end", cfg.sofm.alpha_end);
        s.get("radius_start", cfg.sofm.radius_start);
        s.get("radius_end", cfg.sofm.radius_end);
        s.get("seed", cfg.sofm.seed);
        s.finish();
    }
    {
        Section s(subsection(root, "dbscan"), "dbscan");
        s.get("eps", cfg.dbscan.eps);
        s.get("min_samples", cfg.dbscan.min_samples);
        s.finish();
    }
    {
        Section s(subsection(root, "histogram"), "histogram");
        s.get("n_bins", cfg.histogram_bins);
        s.finish();
    }
    {
        Section s(subsection(root, "sweep"), "sweep");
        s.get("fractions", cfg.sweep_fractions);
        s.get("repeats", cfg.sweep_repeats);
        std::string regressor;
        s.get("regressor", regressor);
        if (!regressor.empty()) {
            if (regressor == "gb")
                cfg.sweep_regressor = RegressorKind::gradient_boosting;
            else if (regressor == "mlp")
                cfg.sweep_regressor = RegressorKind::mlp;
            else
                throw ConfigError("config: sweep.regressor must be \"gb\" or \"mlp\"");
        }
        s.get("seed", cfg.sweep_seed);
        s.finish();
    }
    {
        Section s(subsection(root, "reduce"), "reduce");
        s.get("sample_fraction", cfg.sample_fraction);
        s.get("seed", cfg.reduce_seed);
        s.finish();
    }

    static const std::set<std::string> known_sections = {
        "oilfield", "gb", "mlp", "sofm", "dbscan", "histogram", "sweep", "reduce"};
    for (const auto& [key, unused] : root.items())
        if (!known_sections.contains(key))
            throw ConfigError("config: unknown section " + key);

    cfg.validate();
    return cfg;
}

}  // namespace ensred

#pragma once

#include <filesystem>

#include "ensred/clustering.hpp"
#include "ensred/gb.hpp"
#include "ensred/mlp.hpp"
#include "ensred/oilfield.hpp"
#include "ensred/pipeline.hpp"
#include "ensred/sofm.hpp"
#include "ensred/sweep.hpp"

namespace ensred {

/// Everything the CLI can be told, one section per subsystem. Any key can be
/// omitted (defaults apply); unknown keys are rejected.
struct AppConfig {
    OilfieldConfig oilfield;
    GbParams gb;
    MlpParams mlp;
    SofmParams sofm;
    DbscanParams dbscan;
    int histogram_bins = 64;
    std::vector<double> sweep_fractions;  // empty selects the default grid
    int sweep_repeats = 5;
    RegressorKind sweep_regressor = RegressorKind::gradient_boosting;
    std::uint64_t sweep_seed = 42;
    double sample_fraction = 0.15;
    std::uint64_t reduce_seed = 42;

    SweepParams sweep() const;
    ReductionConfig reduction() const;
    void validate() const;
};

AppConfig default_config();

/// Parses the JSON config document. Throws ConfigError on unreadable files,
/// malformed JSON, unknown keys, wrong types, or out-of-contract values.
AppConfig load_config(const std::filesystem::path& path);

}  // namespace ensred

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ensred/clustering.hpp"
#include "ensred/gb.hpp"
#include "ensred/oilfield.hpp"
#include "ensred/sofm.hpp"

namespace ensred {

struct ReductionConfig {
    double sample_fraction = 0.15;
    OilfieldConfig oilfield;
    GbParams gb;
    SofmParams sofm;
    int n_bins_reference = 64;
    std::uint64_t seed = 42;  // drives the training-sample draw

    void validate() const;
};

struct Representative {
    int id = 0;
    int cluster = 0;
    double predicted_oip = 0.0;
};

/// Outcome of the semi-supervised reduction. True OIP appears only in
/// evaluation fields; training and clustering never see it beyond the
/// sampled ids, which the oracle counters prove.
struct ReductionReport {
    std::vector<int> sample_ids;                  // ascending
    std::vector<Representative> representatives;  // ascending cluster id
    Labeling labeling;                            // semi-supervised clusters
    double rand_vs_gold = 0.0;  // semi-supervised vs 64-bin gold standard
    double rand_vs_euclidean_sofm = 0.0;
    double rand_euclidean_vs_gold = 0.0;
    SpreadSummary spread_true_semi;
    SpreadSummary spread_predicted_semi;
    SpreadSummary spread_true_euclidean;
    SpreadSummary spread_true_gold;
    std::uint64_t oracle_evaluations_steps_1_8 = 0;
    std::uint64_t oracle_nonsample_evaluations_steps_1_8 = 0;
};

/// Everything the reduction run produced, for artifact and plot emission.
struct ReductionArtifacts {
    ReductionReport report;
    GbModel model;
    SofmGrid grid;  // fitted with the predicted-OIP metric
    SofmGrid euclidean_grid;
    Labeling euclidean_labeling;
    Labeling gold_labeling;
    std::vector<double> predicted_oip;  // all models
    std::vector<double> true_oip;       // all models (reporting stage only)
};

/// The full semi-supervised pipeline: draw a seeded sample, evaluate the
/// oracle on the sample only, train the GB regressor on it, predict OIP for
/// every model, fit the SOFM under d(x,y) = |predicted(x) - predicted(y)|,
/// assign clusters, pick one representative per occupied cluster (the member
/// whose prediction is closest to the cluster's median prediction, ties to
/// the lower id), then score the result against the gold standard and the
/// Euclidean-metric SOFM. Deterministic: a pure function of the config.
ReductionArtifacts run_reduction(const ReductionConfig& cfg);

ReductionReport semi_supervised_reduce(const ReductionConfig& cfg);

/// The seeded sample draw used by the reduction, ascending. Exposed so the
/// standalone regressor training works from the same sample.
std::vector<int> reduction_sample_ids(const ReductionConfig& cfg);

void write_report_json(const ReductionReport& report,
                       const std::filesystem::path& path);

}  // namespace ensred

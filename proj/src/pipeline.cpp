#include "ensred/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "ensred/errors.hpp"
#include "ensred/rng.hpp"

namespace ensred {

namespace {
constexpr std::uint64_t kSampleStream = 101;
}

void ReductionConfig::validate() const {
    if (!(sample_fraction > 0.0 && sample_fraction < 1.0))
        throw std::invalid_argument(
            "ReductionConfig: sample_fraction must lie in (0, 1)");
    if (n_bins_reference < 1)
        throw std::invalid_argument("ReductionConfig: n_bins_reference must be >= 1");
    oilfield.validate();
    gb.validate();
    sofm.validate();
}

ReductionArtifacts run_reduction(const ReductionConfig& cfg) {
    cfg.validate();

    // (1) Library and full genome ensemble.
    const GeneLibrary lib = generate_gene_library(cfg.oilfield);
    const auto ensemble = enumerate_ensemble(lib);
    const FeatureMatrix genomes = ensemble_matrix(ensemble);
    const int n = lib.n_models();

    // (2) Seeded training sample, without replacement.
    const std::vector<int> sample_ids = reduction_sample_ids(cfg);
    const int sample_size = static_cast<int>(sample_ids.size());

    // (3) True OIP for the sample only, through the counting wrapper.
    CountingOracle oracle(lib, cfg.oilfield);
    FeatureMatrix x_sample(sample_size, genomes.cols());
    std::vector<double> y_sample(sample_size);
    for (int i = 0; i < sample_size; ++i) {
        const auto src = genomes.row(sample_ids[i]);
        std::copy(src.begin(), src.end(), x_sample.row(i).begin());
        y_sample[i] = oracle.evaluate(ModelId{sample_ids[i]});
    }

    ReductionArtifacts art;
    art.report.sample_ids = sample_ids;

    // (4) Regressor on the sample; (5) predicted OIP for every model.
    art.model = train_gb(x_sample, y_sample, cfg.gb);
    art.predicted_oip = predict_gb_batch(art.model, genomes);

    // (6)-(7) SOFM under the learned metric, clusters from BMU positions.
    const ScorerFn scorer = gb_scorer(art.model);
    art.grid = fit_scored(genomes, cfg.sofm, scorer);
    art.report.labeling = assign_clusters_scored(art.grid, genomes, scorer);

    // (8) One representative per occupied cluster: member whose predicted
    // OIP is closest to the cluster's median prediction, ties to lower id.
    std::map<int, std::vector<int>> members;
    for (int id = 0; id < n; ++id)
        members[art.report.labeling[id]].push_back(id);
    for (const auto& [cluster, ids] : members) {
        std::vector<double> vals;
        vals.reserve(ids.size());
        for (int id : ids) vals.push_back(art.predicted_oip[id]);
        std::sort(vals.begin(), vals.end());
        const std::size_t m = vals.size();
        const double median =
            m % 2 == 1 ? vals[m / 2] : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
        int best = ids.front();
        double best_dist = std::abs(art.predicted_oip[best] - median);
        for (int id : ids) {
            const double d = std::abs(art.predicted_oip[id] - median);
            if (d < best_dist) {
                best = id;
                best_dist = d;
            }
        }
        art.report.representatives.push_back({best, cluster, art.predicted_oip[best]});
    }

    // End of the blind stages: snapshot what the oracle saw so far.
    art.report.oracle_evaluations_steps_1_8 = oracle.total_evaluations();
    {
        std::vector<char> in_sample(n, 0);
        for (int id : sample_ids) in_sample[id] = 1;
        std::uint64_t outside = 0;
        for (int id = 0; id < n; ++id)
            if (!in_sample[id]) outside += oracle.counts()[id];
        art.report.oracle_nonsample_evaluations_steps_1_8 = outside;
    }

    // (9) Evaluation: full truth, gold standard, Euclidean SOFM baseline.
    const auto true_labels = evaluate_ensemble(lib, cfg.oilfield);
    art.true_oip.resize(n);
    for (int id = 0; id < n; ++id) art.true_oip[id] = true_labels[id].oip;

    const auto gold = equi_width_histogram(art.true_oip, cfg.n_bins_reference);
    art.gold_labeling = gold.labeling;

    art.euclidean_grid = fit(genomes, cfg.sofm, euclidean_metric());
    art.euclidean_labeling = assign_clusters(art.euclidean_grid, genomes,
                                             euclidean_metric());

    art.report.rand_vs_gold = compare_labelings(art.report.labeling, art.gold_labeling);
    art.report.rand_vs_euclidean_sofm =
        compare_labelings(art.report.labeling, art.euclidean_labeling);
    art.report.rand_euclidean_vs_gold =
        compare_labelings(art.euclidean_labeling, art.gold_labeling);

    art.report.spread_true_semi = cluster_oip_spread(art.report.labeling, art.true_oip);
    art.report.spread_predicted_semi =
        cluster_oip_spread(art.report.labeling, art.predicted_oip);
    art.report.spread_true_euclidean =
        cluster_oip_spread(art.euclidean_labeling, art.true_oip);
    art.report.spread_true_gold = cluster_oip_spread(art.gold_labeling, art.true_oip);

    return art;
}

ReductionReport semi_supervised_reduce(const ReductionConfig& cfg) {
    return run_reduction(cfg).report;
}

std::vector<int> reduction_sample_ids(const ReductionConfig& cfg) {
    const int n = cfg.oilfield.n_alleles * cfg.oilfield.n_alleles *
                  cfg.oilfield.n_alleles;
    const int sample_size = static_cast<int>(cfg.sample_fraction * n);
    if (sample_size < 2)
        throw std::invalid_argument("reduction: sample smaller than 2 models");
    SplitMix64 rng(mix64(cfg.seed + kSampleStream));
    std::vector<int> ids = sample_without_replacement(n, sample_size, rng);
    std::sort(ids.begin(), ids.end());
    return ids;
}

namespace {

nlohmann::ordered_json spread_json(const SpreadSummary& s) {
    nlohmann::ordered_json j;
    j["mean_range"] = s.mean_range;
    auto clusters = nlohmann::ordered_json::array();
    for (const auto& c : s.clusters) {
        nlohmann::ordered_json e;
        e["cluster"] = c.cluster;
        e["size"] = c.size;
        e["min"] = c.min;
        e["max"] = c.max;
        e["range"] = c.range;
        clusters.push_back(std::move(e));
    }
    j["clusters"] = std::move(clusters);
    return j;
}

}  // namespace

void write_report_json(const ReductionReport& report,
                       const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["sample_ids"] = report.sample_ids;
    auto reps = nlohmann::ordered_json::array();
    for (const auto& r : report.representatives) {
        nlohmann::ordered_json e;
        e["id"] = r.id;
        e["cluster"] = r.cluster;
        e["predicted_oip"] = r.predicted_oip;
        reps.push_back(std::move(e));
    }
    j["representatives"] = std::move(reps);
    j["labeling"] = report.labeling;
    j["rand_vs_gold"] = report.rand_vs_gold;
    j["rand_vs_euclidean_sofm"] = report.rand_vs_euclidean_sofm;
    j["rand_euclidean_vs_gold"] = report.rand_euclidean_vs_gold;
    j["spread"]["semi_true"] = spread_json(report.spread_true_semi);
    j["spread"]["semi_predicted"] = spread_json(report.spread_predicted_semi);
    j["spread"]["euclidean_true"] = spread_json(report.spread_true_euclidean);
    j["spread"]["gold_true"] = spread_json(report.spread_true_gold);
    j["oracle_evaluations_steps_1_8"] = report.oracle_evaluations_steps_1_8;
    j["oracle_nonsample_evaluations_steps_1_8"] =
        report.oracle_nonsample_evaluations_steps_1_8;

    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace ensred

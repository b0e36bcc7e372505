// Command-line front end for the ensemble reduction toolkit. Every
// subcommand is a deterministic function of its config and writes only
// under --out.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ensred/config.hpp"
#include "ensred/csv.hpp"
#include "ensred/errors.hpp"
#include "ensred/metrics.hpp"
#include "ensred/parallel.hpp"
#include "ensred/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ensred;

namespace {

// Holds an exclusive advisory lock for the lifetime of the command, so two
// processes cannot race on one artifact directory.
class OutDir {
public:
    explicit OutDir(const std::string& dir) : path_(dir) {
        std::error_code ec;
        fs::create_directories(path_, ec);
        if (ec) throw IoError("cannot create output directory " + path_.string());
        lock_fd_ = ::open((path_ / ".lock").c_str(), O_CREAT | O_RDWR, 0644);
        if (lock_fd_ < 0)
            throw IoError("cannot open lock file in " + path_.string());
        if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
            ::close(lock_fd_);
            throw IoError("output directory is locked by another process: " +
                          path_.string());
        }
    }
    ~OutDir() {
        if (lock_fd_ >= 0) {
            ::flock(lock_fd_, LOCK_UN);
            ::close(lock_fd_);
        }
    }
    OutDir(const OutDir&) = delete;
    OutDir& operator=(const OutDir&) = delete;

    fs::path file(const std::string& name) const { return path_ / name; }
    fs::path plot(const std::string& name) const {
        std::error_code ec;
        fs::create_directories(path_ / "plotdata", ec);
        if (ec) throw IoError("cannot create plotdata directory");
        return path_ / "plotdata" / name;
    }

private:
    fs::path path_;
    int lock_fd_ = -1;
};

std::vector<double> oip_values(const std::vector<OipLabel>& labels) {
    std::vector<double> v(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) v[i] = labels[i].oip;
    return v;
}

void cmd_generate(const AppConfig& cfg, const OutDir& out) {
    const auto lib = generate_gene_library(cfg.oilfield);
    const auto ensemble = enumerate_ensemble(lib);
    write_genomes_csv(out.file("genomes.csv"), ensemble);
    const auto labels = evaluate_ensemble(lib, cfg.oilfield);
    write_labels_csv(out.file("labels.csv"), labels);
    std::cout << "generated " << ensemble.size() << " models ("
              << lib.n_alleles() << " alleles per property)\n";
}

void cmd_evaluate(const AppConfig& cfg, const OutDir& out) {
    const auto lib = generate_gene_library(cfg.oilfield);
    const auto labels = evaluate_ensemble(lib, cfg.oilfield);
    write_labels_csv(out.file("labels.csv"), labels);
    const auto v = oip_values(labels);
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    std::cout << "evaluated " << labels.size() << " models, OIP in ["
              << format_double(*mn) << ", " << format_double(*mx) << "]\n";
}

void cmd_cluster_histogram(const AppConfig& cfg, const OutDir& out) {
    const auto lib = generate_gene_library(cfg.oilfield);
    const auto oip = oip_values(evaluate_ensemble(lib, cfg.oilfield));
    const auto hist = equi_width_histogram(oip, cfg.histogram_bins);
    write_clusters_csv(out.file("clusters.csv"), hist.labeling);
    write_oip_histogram_csv(out.plot("oip_histogram.csv"), hist);
    write_id_oip_cluster_csv(out.plot("id_vs_oip_histogram.csv"), oip, hist.labeling);
    const auto spread = cluster_oip_spread(hist.labeling, oip);
    std::cout << "histogram clustering: " << spread.clusters.size() << "/"
              << hist.n_bins << " bins occupied, mean within-bin OIP range "
              << format_double(spread.mean_range) << "\n";
}

void cmd_cluster_dbscan(const AppConfig& cfg, const OutDir& out) {
    const auto lib = generate_gene_library(cfg.oilfield);
    const auto genomes = ensemble_matrix(enumerate_ensemble(lib));
    const auto labeling = dbscan(genomes, cfg.dbscan, euclidean_metric());
    write_clusters_csv(out.file("clusters.csv"), labeling);

    const auto oip = oip_values(evaluate_ensemble(lib, cfg.oilfield));
    write_id_oip_cluster_csv(out.plot("id_vs_oip_dbscan.csv"), oip, labeling);

    int clusters = 0;
    std::size_t noise = 0;
    for (int l : labeling) {
        clusters = std::max(clusters, l + 1);
        if (l == kNoise) ++noise;
    }
    std::cout << "dbscan(eps=" << cfg.dbscan.eps
              << ", min_samples=" << cfg.dbscan.min_samples << "): " << clusters
              << " clusters, " << noise << " noise points\n";
    if (clusters > 0) {
        const auto spread = cluster_oip_spread(labeling, oip);
        std::cout << "mean within-cluster OIP range "
                  << format_double(spread.mean_range) << "\n";
    }
}

void cmd_fit_sofm(const AppConfig& cfg, const OutDir& out) {
    const auto lib = generate_gene_library(cfg.oilfield);
    const auto genomes = ensemble_matrix(enumerate_ensemble(lib));
    const auto grid = fit(genomes, cfg.sofm, euclidean_metric());
    write_grid_csv(out.file("grid.csv"), grid);
    const auto labeling = assign_clusters(grid, genomes, euclidean_metric());
    write_clusters_csv(out.file("clusters.csv"), labeling);

    const auto oip = oip_values(evaluate_ensemble(lib, cfg.oilfield));
    write_id_oip_cluster_csv(out.plot("id_vs_oip_sofm.csv"), oip, labeling);

    const auto spread = cluster_oip_spread(labeling, oip);
    std::cout << "sofm(" << cfg.sofm.width << "x" << cfg.sofm.height << "): "
              << spread.clusters.size() << " occupied neurons, "
              << "mean within-cluster OIP range "
              << format_double(spread.mean_range) << "\n";
}

void cmd_train(const AppConfig& cfg, const OutDir& out, const std::string& kind) {
    const auto lib = generate_gene_library(cfg.oilfield);
    const auto genomes = ensemble_matrix(enumerate_ensemble(lib));
    const int n = lib.n_models();

    const auto sample_ids = reduction_sample_ids(cfg.reduction());
    std::vector<char> in_sample(n, 0);
    FeatureMatrix x_train(sample_ids.size(), genomes.cols());
    std::vector<double> y_train(sample_ids.size());
    for (std::size_t i = 0; i < sample_ids.size(); ++i) {
        in_sample[sample_ids[i]] = 1;
        const auto src = genomes.row(sample_ids[i]);
        std::copy(src.begin(), src.end(), x_train.row(i).begin());
        y_train[i] = oip_oracle(id_to_alleles(ModelId{sample_ids[i]}, lib.n_alleles()),
                                lib, cfg.oilfield)
                         .oip;
    }

    const auto oip = oip_values(evaluate_ensemble(lib, cfg.oilfield));
    std::vector<int> test_ids;
    std::vector<double> y_test, y_hat;
    for (int id = 0; id < n; ++id)
        if (!in_sample[id]) test_ids.push_back(id);

    if (kind == "gb") {
        const auto model = train_gb(x_train, y_train, cfg.gb);
        save_gb(model, out.file("gb_model.txt").string());
        for (int id : test_ids) {
            y_test.push_back(oip[id]);
            y_hat.push_back(predict_gb(model, genomes.row(id)));
        }
    } else {
        const auto model = train_mlp(x_train, y_train, cfg.mlp);
        save_mlp(model, out.file("mlp_model.txt").string());
        for (int id : test_ids) {
            y_test.push_back(oip[id]);
            y_hat.push_back(model.predict(genomes.row(id)));
        }
    }
    write_pred_true_csv(out.plot("pred_vs_true.csv"), test_ids, y_test, y_hat);

    const auto m = error_metrics(y_test, y_hat);
    nlohmann::ordered_json j;
    j["regressor"] = kind;
    j["train_count"] = sample_ids.size();
    j["test_count"] = test_ids.size();
    j["mse"] = m.mse;
    j["rmse"] = m.rmse;
    j["mae"] = m.mae;
    std::ofstream f(out.file("train_metrics.json"));
    if (!f) throw IoError("cannot write train_metrics.json");
    f << j.dump(2) << "\n";

    std::cout << kind << " trained on " << sample_ids.size() << " models; hold-out "
              << test_ids.size() << " models: rmse " << format_double(m.rmse)
              << ", mae " << format_double(m.mae) << "\n";
}

void cmd_sweep(const AppConfig& cfg, const OutDir& out, const std::string& kind) {
    const auto lib = generate_gene_library(cfg.oilfield);
    const auto genomes = ensemble_matrix(enumerate_ensemble(lib));
    const auto oip = oip_values(evaluate_ensemble(lib, cfg.oilfield));

    SweepParams params = cfg.sweep();
    if (!kind.empty())
        params.regressor =
            kind == "gb" ? RegressorKind::gradient_boosting : RegressorKind::mlp;

    const auto result = sample_size_sweep(genomes, oip, params);
    write_sweep_csv(out.file("sweep.csv"), result);
    write_sweep_curve_csv(out.plot("sweep_curve.csv"), result);
    for (const auto& row : result)
        std::cout << "fraction " << format_double(row.fraction) << ": mean rmse "
                  << format_double(row.rmse_mean) << " over " << row.repeats
                  << " repeats\n";
}

void cmd_reduce(const AppConfig& cfg, const OutDir& out) {
    const auto art = run_reduction(cfg.reduction());
    write_report_json(art.report, out.file("report.json"));
    write_clusters_csv(out.file("clusters.csv"), art.report.labeling);
    write_grid_csv(out.file("grid.csv"), art.grid);

    const auto hist = equi_width_histogram(art.true_oip, cfg.histogram_bins);
    write_oip_histogram_csv(out.plot("oip_histogram.csv"), hist);
    write_id_oip_cluster_csv(out.plot("id_vs_oip_gold.csv"), art.true_oip,
                             art.gold_labeling);
    write_id_oip_cluster_csv(out.plot("id_vs_oip_semi.csv"), art.true_oip,
                             art.report.labeling);
    write_id_oip_cluster_csv(out.plot("id_vs_oip_euclidean_sofm.csv"), art.true_oip,
                             art.euclidean_labeling);
    const auto scorer = gb_scorer(art.model);
    write_neuron_values_csv(out.plot("neuron_oip_semi.csv"), art.grid,
                            neuron_oip(art.grid, scorer));
    write_neuron_values_csv(out.plot("neuron_oip_euclidean.csv"), art.euclidean_grid,
                            neuron_oip(art.euclidean_grid, scorer));
    std::vector<int> ids(art.true_oip.size());
    std::iota(ids.begin(), ids.end(), 0);
    write_pred_true_csv(out.plot("pred_vs_true.csv"), ids, art.true_oip,
                        art.predicted_oip);

    std::cout << "sample size " << art.report.sample_ids.size() << "\n"
              << "representatives " << art.report.representatives.size() << "\n"
              << "rand vs gold standard " << format_double(art.report.rand_vs_gold)
              << " (euclidean sofm baseline "
              << format_double(art.report.rand_euclidean_vs_gold) << ")\n"
              << "mean true-OIP spread: semi-supervised "
              << format_double(art.report.spread_true_semi.mean_range)
              << ", euclidean sofm "
              << format_double(art.report.spread_true_euclidean.mean_range) << "\n";
}

void cmd_report(const OutDir& out) {
    std::ifstream in(out.file("report.json"));
    if (!in) throw IoError("report.json not found; run `reduce` first");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("report.json is unreadable: ") + e.what());
    }

    std::cout << "sample ids: " << j.at("sample_ids").size() << "\n";
    std::cout << "representatives: " << j.at("representatives").size() << "\n";
    std::cout << "rand vs gold: " << j.at("rand_vs_gold").get<double>() << "\n";
    std::cout << "rand vs euclidean sofm: "
              << j.at("rand_vs_euclidean_sofm").get<double>() << "\n";
    std::cout << "rand euclidean vs gold: "
              << j.at("rand_euclidean_vs_gold").get<double>() << "\n";
    for (const char* key : {"semi_true", "semi_predicted", "euclidean_true",
                            "gold_true"})
        std::cout << "mean range " << key << ": "
                  << j.at("spread").at(key).at("mean_range").get<double>() << "\n";
    std::cout << "oracle evaluations during blind stages: "
              << j.at("oracle_evaluations_steps_1_8").get<std::uint64_t>()
              << " (outside sample: "
              << j.at("oracle_nonsample_evaluations_steps_1_8").get<std::uint64_t>()
              << ")\n";
    std::cout << "representatives (id, cluster, predicted OIP):\n";
    for (const auto& r : j.at("representatives"))
        std::cout << "  " << r.at("id").get<int>() << "  " << r.at("cluster").get<int>()
                  << "  " << format_double(r.at("predicted_oip").get<double>())
                  << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seeded synthetic oilfield ensemble reduction toolkit"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "limit OpenMP threads (0 = default)");

    std::string config_path;
    std::string out_dir;
    std::string regressor = "gb";

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_dir, "output directory")->required();
        return sub;
    };

    auto* generate = add_common(app.add_subcommand(
        "generate", "write genomes.csv and labels.csv for the full ensemble"));
    auto* evaluate = add_common(
        app.add_subcommand("evaluate", "run the OIP oracle over the ensemble"));
    auto* cluster_histogram = add_common(app.add_subcommand(
        "cluster-histogram", "gold-standard equi-width OIP binning"));
    auto* cluster_dbscan = add_common(app.add_subcommand(
        "cluster-dbscan", "DBSCAN over genomes with Euclidean metric"));
    auto* fit_sofm = add_common(app.add_subcommand(
        "fit-sofm", "fit a SOFM over genomes with Euclidean metric"));
    auto* train = add_common(app.add_subcommand(
        "train", "train a regressor on the seeded sample and score hold-out"));
    train->add_option("--regressor", regressor, "gb or mlp")
        ->check(CLI::IsMember({"gb", "mlp"}));
    auto* sweep = add_common(app.add_subcommand(
        "sweep", "training-fraction sweep of regressor quality"));
    std::string sweep_regressor;
    sweep->add_option("--regressor", sweep_regressor, "gb or mlp")
        ->check(CLI::IsMember({"gb", "mlp"}));
    auto* reduce = add_common(app.add_subcommand(
        "reduce", "semi-supervised reduction to representative models"));
    auto* report = add_common(
        app.add_subcommand("report", "print a summary of an existing report.json"));

    CLI11_PARSE(app, argc, argv);
    par::set_threads(threads);

    try {
        const AppConfig cfg =
            config_path.empty() ? default_config() : load_config(config_path);
        const OutDir out(out_dir);

        if (generate->parsed()) cmd_generate(cfg, out);
        if (evaluate->parsed()) cmd_evaluate(cfg, out);
        if (cluster_histogram->parsed()) cmd_cluster_histogram(cfg, out);
        if (cluster_dbscan->parsed()) cmd_cluster_dbscan(cfg, out);
        if (fit_sofm->parsed()) cmd_fit_sofm(cfg, out);
        if (train->parsed()) cmd_train(cfg, out, regressor);
        if (sweep->parsed()) cmd_sweep(cfg, out, sweep_regressor);
        if (reduce->parsed()) cmd_reduce(cfg, out);
        if (report->parsed()) cmd_report(out);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

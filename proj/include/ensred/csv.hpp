#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ensred/clustering.hpp"
#include "ensred/genome.hpp"
#include "ensred/oilfield.hpp"
#include "ensred/sofm.hpp"
#include "ensred/sweep.hpp"

namespace ensred {

/// Round-trip-exact decimal rendering used by every CSV emitter.
std::string format_double(double v);

// Artifact files. Writers throw IoError on failure.
void write_genomes_csv(const std::filesystem::path& path,
                       const std::vector<EnsembleEntry>& ensemble);
void write_labels_csv(const std::filesystem::path& path,
                      const std::vector<OipLabel>& labels);
void write_clusters_csv(const std::filesystem::path& path, const Labeling& labeling);
void write_grid_csv(const std::filesystem::path& path, const SofmGrid& grid);
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep);

std::vector<OipLabel> read_labels_csv(const std::filesystem::path& path);
Labeling read_clusters_csv(const std::filesystem::path& path);

// Plot data (one CSV per figure).
void write_oip_histogram_csv(const std::filesystem::path& path,
                             const HistogramClustering& hist);
void write_id_oip_cluster_csv(const std::filesystem::path& path,
                              std::span<const double> oip, const Labeling& labeling);
void write_neuron_values_csv(const std::filesystem::path& path, const SofmGrid& grid,
                             std::span<const double> values);
void write_pred_true_csv(const std::filesystem::path& path,
                         std::span<const int> ids, std::span<const double> y_true,
                         std::span<const double> y_pred);
void write_sweep_curve_csv(const std::filesystem::path& path,
                           const SweepResult& sweep);

}  // namespace ensred

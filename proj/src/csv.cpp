#include "ensred/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ensred/errors.hpp"

namespace ensred {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return in;
}

}  // namespace

void write_genomes_csv(const std::filesystem::path& path,
                       const std::vector<EnsembleEntry>& ensemble) {
    auto out = open_out(path);
    out << "id";
    for (int j = 0; j < kGenomeLength; ++j) out << ",k" << j;
    out << "\n";
    for (const auto& entry : ensemble) {
        out << entry.id.value;
        for (double v : entry.genome) out << "," << format_double(v);
        out << "\n";
    }
    finish(out, path);
}

void write_labels_csv(const std::filesystem::path& path,
                      const std::vector<OipLabel>& labels) {
    auto out = open_out(path);
    out << "id,oip\n";
    for (const auto& l : labels)
        out << l.id.value << "," << format_double(l.oip) << "\n";
    finish(out, path);
}

std::vector<OipLabel> read_labels_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "id,oip")
        throw IoError("bad labels header in " + path.string());
    std::vector<OipLabel> labels;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        OipLabel l;
        char comma = 0;
        std::istringstream row(line);
        if (!(row >> l.id.value >> comma >> l.oip) || comma != ',')
            throw IoError("bad labels row in " + path.string());
        labels.push_back(l);
    }
    return labels;
}

void write_clusters_csv(const std::filesystem::path& path, const Labeling& labeling) {
    auto out = open_out(path);
    out << "id,cluster\n";
    for (std::size_t i = 0; i < labeling.size(); ++i)
        out << i << "," << labeling[i] << "\n";  // noise serialises as -1
    finish(out, path);
}

Labeling read_clusters_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "id,cluster")
        throw IoError("bad clusters header in " + path.string());
    Labeling labeling;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        long id = 0;
        int cluster = 0;
        char comma = 0;
        std::istringstream row(line);
        if (!(row >> id >> comma >> cluster) || comma != ',' ||
            id != static_cast<long>(labeling.size()))
            throw IoError("bad clusters row in " + path.string());
        labeling.push_back(cluster);
    }
    return labeling;
}

void write_grid_csv(const std::filesystem::path& path, const SofmGrid& grid) {
    auto out = open_out(path);
    out << "row,col";
    for (std::size_t j = 0; j < grid.weights.cols(); ++j) out << ",w" << j;
    out << "\n";
    for (int r = 0; r < grid.height; ++r) {
        for (int c = 0; c < grid.width; ++c) {
            out << r << "," << c;
            for (double v : grid.neuron(r, c)) out << "," << format_double(v);
            out << "\n";
        }
    }
    finish(out, path);
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep) {
    auto out = open_out(path);
    out << "fraction,repeat,rmse\n";
    for (const auto& row : sweep)
        for (int r = 0; r < row.repeats; ++r)
            out << format_double(row.fraction) << "," << r << ","
                << format_double(row.rmse_per_repeat[r]) << "\n";
    finish(out, path);
}

void write_oip_histogram_csv(const std::filesystem::path& path,
                             const HistogramClustering& hist) {
    std::vector<std::size_t> counts(hist.n_bins, 0);
    for (int bin : hist.labeling) ++counts[bin];
    auto out = open_out(path);
    out << "bin,lo,hi,count\n";
    for (int b = 0; b < hist.n_bins; ++b)
        out << b << "," << format_double(hist.edges[b]) << ","
            << format_double(hist.edges[b + 1]) << "," << counts[b] << "\n";
    finish(out, path);
}

void write_id_oip_cluster_csv(const std::filesystem::path& path,
                              std::span<const double> oip, const Labeling& labeling) {
    auto out = open_out(path);
    out << "id,oip,cluster\n";
    for (std::size_t i = 0; i < labeling.size(); ++i)
        out << i << "," << format_double(oip[i]) << "," << labeling[i] << "\n";
    finish(out, path);
}

void write_neuron_values_csv(const std::filesystem::path& path, const SofmGrid& grid,
                             std::span<const double> values) {
    auto out = open_out(path);
    out << "row,col,oip\n";
    for (int r = 0; r < grid.height; ++r)
        for (int c = 0; c < grid.width; ++c)
            out << r << "," << c << ","
                << format_double(values[static_cast<std::size_t>(r) * grid.width + c])
                << "\n";
    finish(out, path);
}

void write_pred_true_csv(const std::filesystem::path& path, std::span<const int> ids,
                         std::span<const double> y_true,
                         std::span<const double> y_pred) {
    auto out = open_out(path);
    out << "id,true_oip,predicted_oip\n";
    for (std::size_t i = 0; i < ids.size(); ++i)
        out << ids[i] << "," << format_double(y_true[i]) << ","
            << format_double(y_pred[i]) << "\n";
    finish(out, path);
}

void write_sweep_curve_csv(const std::filesystem::path& path,
                           const SweepResult& sweep) {
    auto out = open_out(path);
    out << "fraction,rmse_mean\n";
    for (const auto& row : sweep)
        out << format_double(row.fraction) << "," << format_double(row.rmse_mean)
            << "\n";
    finish(out, path);
}

}  // namespace ensred

// End-to-end checks of the CLI binary: artifact layout, exit codes,
// determinism, and the output-directory lock.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fcntl.h>
#include <sys/file.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ensred_cli_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(ENSRED_CLI_PATH) + " " + args +
                            " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t line_count(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
}

fs::path write_small_config(const fs::path& dir) {
    // 216-model ensemble; sweep section left at defaults (16 fractions, 5
    // repeats) so the full sweep shape stays cheap to exercise.
    const auto path = dir / "small.json";
    std::ofstream out(path);
    out << R"({
  "oilfield": {"n_alleles": 6},
  "gb": {"n_stages": 15},
  "mlp": {"epochs": 10},
  "sofm": {"epochs": 2}
})";
    return path;
}

}  // namespace

TEST_CASE("generate writes genomes and labels with one row per model") {
    TempDir tmp;
    const auto cfg = write_small_config(tmp.path);
    const auto out = tmp.path / "out";
    REQUIRE(run("generate --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(line_count(out / "genomes.csv") == 217);  // header + 216 models
    CHECK(line_count(out / "labels.csv") == 217);
    CHECK(slurp(out / "genomes.csv").substr(0, 8) == "id,k0,k1");
    CHECK(slurp(out / "labels.csv").substr(0, 6) == "id,oip");
}

TEST_CASE("clustering and sofm subcommands emit artifacts") {
    TempDir tmp;
    const auto cfg = write_small_config(tmp.path);
    const auto common = " --config " + cfg.string() + " --out ";

    const auto hist = tmp.path / "hist";
    REQUIRE(run("cluster-histogram" + common + hist.string()) == 0);
    CHECK(line_count(hist / "clusters.csv") == 217);
    CHECK(fs::exists(hist / "plotdata" / "oip_histogram.csv"));
    CHECK(fs::exists(hist / "plotdata" / "id_vs_oip_histogram.csv"));

    const auto db = tmp.path / "db";
    REQUIRE(run("cluster-dbscan" + common + db.string()) == 0);
    CHECK(line_count(db / "clusters.csv") == 217);
    CHECK(fs::exists(db / "plotdata" / "id_vs_oip_dbscan.csv"));

    const auto som = tmp.path / "som";
    REQUIRE(run("fit-sofm" + common + som.string()) == 0);
    CHECK(line_count(som / "grid.csv") == 65);  // header + 64 neurons
    CHECK(line_count(som / "clusters.csv") == 217);
}

TEST_CASE("evaluate writes labels only") {
    TempDir tmp;
    const auto cfg = write_small_config(tmp.path);
    const auto out = tmp.path / "eval";
    REQUIRE(run("evaluate --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(line_count(out / "labels.csv") == 217);
    CHECK(!fs::exists(out / "genomes.csv"));
}

TEST_CASE("train writes a reloadable model and metrics") {
    TempDir tmp;
    const auto cfg = write_small_config(tmp.path);
    const auto out = tmp.path / "train";
    REQUIRE(run("train --regressor gb --config " + cfg.string() + " --out " +
                out.string()) == 0);
    CHECK(fs::exists(out / "gb_model.txt"));
    CHECK(fs::exists(out / "train_metrics.json"));
    CHECK(fs::exists(out / "plotdata" / "pred_vs_true.csv"));
    // 216 models minus the 32-model training sample, plus the header.
    CHECK(line_count(out / "plotdata" / "pred_vs_true.csv") == 185);

    const auto out2 = tmp.path / "train_mlp";
    REQUIRE(run("train --regressor mlp --config " + cfg.string() + " --out " +
                out2.string()) == 0);
    CHECK(fs::exists(out2 / "mlp_model.txt"));
    CHECK(line_count(out2 / "plotdata" / "pred_vs_true.csv") == 185);
}

TEST_CASE("sweep emits 16 fractions x 5 repeats = 80 rows") {
    TempDir tmp;
    const auto cfg = write_small_config(tmp.path);
    const auto out = tmp.path / "sweep";
    REQUIRE(run("sweep --regressor gb --config " + cfg.string() + " --out " +
                out.string()) == 0);
    CHECK(line_count(out / "sweep.csv") == 81);  // header + 80 cells
    CHECK(line_count(out / "plotdata" / "sweep_curve.csv") == 17);
}

TEST_CASE("reduce is deterministic byte for byte, across thread counts") {
    TempDir tmp;
    const auto cfg = write_small_config(tmp.path);
    const auto a = tmp.path / "a";
    const auto b = tmp.path / "b";
    REQUIRE(run("reduce --config " + cfg.string() + " --out " + a.string()) == 0);
    REQUIRE(run("--threads 1 reduce --config " + cfg.string() + " --out " +
                b.string()) == 0);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "grid.csv") == slurp(b / "grid.csv"));
    CHECK(slurp(a / "clusters.csv") == slurp(b / "clusters.csv"));
    CHECK(fs::exists(a / "grid.csv"));
    CHECK(fs::exists(a / "clusters.csv"));
    for (const char* name :
         {"oip_histogram.csv", "id_vs_oip_gold.csv", "id_vs_oip_semi.csv",
          "id_vs_oip_euclidean_sofm.csv", "neuron_oip_semi.csv",
          "neuron_oip_euclidean.csv", "pred_vs_true.csv"})
        CHECK(fs::exists(a / "plotdata" / name));

    REQUIRE(run("report --out " + a.string()) == 0);
}

TEST_CASE("exit codes distinguish config, io, and usage errors") {
    TempDir tmp;
    const auto out = tmp.path / "out";

    SUBCASE("malformed config exits 2") {
        const auto bad = tmp.path / "bad.json";
        std::ofstream(bad) << "{ not json";
        CHECK(run("generate --config " + bad.string() + " --out " + out.string()) == 2);
    }
    SUBCASE("unknown config key exits 2") {
        const auto bad = tmp.path / "bad2.json";
        std::ofstream(bad) << R"({"oilfield": {"n_allele": 6}})";
        CHECK(run("generate --config " + bad.string() + " --out " + out.string()) == 2);
    }
    SUBCASE("missing report exits 3") {
        CHECK(run("report --out " + (tmp.path / "empty").string()) == 3);
    }
    SUBCASE("missing required option is a usage error") {
        CHECK(run("generate") != 0);
    }
    SUBCASE("locked output directory exits 3") {
        fs::create_directories(out);
        const int fd = ::open((out / ".lock").c_str(), O_CREAT | O_RDWR, 0644);
        REQUIRE(fd >= 0);
        REQUIRE(::flock(fd, LOCK_EX) == 0);
        const auto cfg = write_small_config(tmp.path);
        CHECK(run("evaluate --config " + cfg.string() + " --out " + out.string()) == 3);
        ::flock(fd, LOCK_UN);
        ::close(fd);
    }
}

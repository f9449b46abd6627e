#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "motrans/cli.hpp"
#include "motrans/io.hpp"
#include "motrans/motion.hpp"
#include "motrans/neural.hpp"
#include "motrans/rng.hpp"
#include "motrans/gan.hpp"

using namespace motrans;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("motrans_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& sub = "") const {
        return sub.empty() ? path.string() : (path / sub).string();
    }
};

void write_config(const fs::path& path, const std::string& extra = "") {
    std::ofstream out(path);
    out << "epochs=1\nbatch_size=4\nwindow_n=8\nwindow_d=4\n"
        << "g_hidden=8\nd_hidden=4\ndropout=0.1\nseed=7\n"
        << extra;
}

}  // namespace

TEST_CASE("no subcommand and unknown flags are usage errors") {
    CHECK(run_cli({}) == 1);
    CHECK(run_cli({"frobnicate"}) == 1);
    CHECK(run_cli({"plot", "--bogus", "x"}) == 1);
    CHECK(run_cli({"plot"}) == 1);  // missing required flags
    CHECK(run_cli({"--help"}) == 0);
}

TEST_CASE("plot maps a missing input to exit 2") {
    TempDir dir("plot_missing");
    CHECK(run_cli({"plot", "--in", dir.str("missing.csv"), "--out", dir.str("o.svg")}) == 2);
    CHECK(!fs::exists(dir.str("o.svg")));
}

TEST_CASE("synth then plot produce files") {
    TempDir dir("synth");
    CHECK(run_cli({"synth", "--out", dir.str("corpus"), "--experts", "2", "--nonexperts",
                   "2", "--seed", "3"}) == 0);
    CHECK(fs::exists(dir.str("corpus/experts/expert_000.csv")));
    CHECK(fs::exists(dir.str("corpus/nonexperts/nonexpert_000.csv")));
    CHECK(fs::exists(dir.str("corpus/holdout_expert.csv")));
    CHECK(fs::exists(dir.str("corpus/holdout_nonexpert.csv")));

    CHECK(run_cli({"plot", "--in", dir.str("corpus/holdout_expert.csv"), "--out",
                   dir.str("plot.svg")}) == 0);
    CHECK(fs::exists(dir.str("plot.svg")));
}

TEST_CASE("zero-rate training keeps the initialized generator in the checkpoint") {
    TempDir dir("train0");
    REQUIRE(run_cli({"synth", "--out", dir.str("corpus"), "--experts", "2",
                     "--nonexperts", "2", "--seed", "11"}) == 0);
    REQUIRE(run_cli({"align", "--experts", dir.str("corpus/experts"), "--nonexperts",
                     dir.str("corpus/nonexperts"), "--out", dir.str("aligned")}) == 0);
    write_config(dir.path / "config.txt", "lr_g=0\nlr_d=0\n");
    REQUIRE(run_cli({"train", "--pairs", dir.str("aligned"), "--config",
                     dir.str("config.txt"), "--out", dir.str("model.json")}) == 0);

    const Checkpoint ckpt = load_checkpoint(dir.str("model.json"));
    const std::size_t vec = 8 * kNumChannels;
    const MlpParams expected =
        init_mlp({vec, 8, vec}, {0.1}, derive_seed(7, kGeneratorSeedLabel));
    CHECK(ckpt.generator.weights == expected.weights);
    CHECK(ckpt.generator.biases == expected.biases);
    CHECK(fs::exists(dir.str("model.json.loss.csv")));
}

TEST_CASE("full pipeline runs and is byte-identical across repeats") {
    auto run_pipeline = [](const std::string& root) {
        REQUIRE(run_cli({"synth", "--out", root + "/corpus", "--experts", "2",
                         "--nonexperts", "3", "--seed", "42"}) == 0);
        REQUIRE(run_cli({"align", "--experts", root + "/corpus/experts", "--nonexperts",
                         root + "/corpus/nonexperts", "--out", root + "/aligned"}) == 0);
        {
            std::ofstream out(root + "/config.txt");
            out << "epochs=2\nbatch_size=8\nwindow_n=8\nwindow_d=4\n"
                << "g_hidden=12\nd_hidden=6\ndropout=0.2\nseed=42\n";
        }
        REQUIRE(run_cli({"train", "--pairs", root + "/aligned", "--config",
                         root + "/config.txt", "--out", root + "/model.json"}) == 0);
        REQUIRE(run_cli({"translate", "--model", root + "/model.json", "--in",
                         root + "/corpus/holdout_nonexpert.csv", "--out",
                         root + "/generated.csv"}) == 0);
        REQUIRE(run_cli({"simulate", "--leader", root + "/generated.csv", "--out",
                         root + "/follower.csv", "--report", root + "/metrics.txt"}) == 0);
        REQUIRE(run_cli({"eval", "--expert", root + "/corpus/holdout_expert.csv",
                         "--nonexpert", root + "/corpus/holdout_nonexpert.csv",
                         "--generated", root + "/generated.csv", "--out",
                         root + "/report.csv"}) == 0);
        REQUIRE(run_cli({"plot", "--in", root + "/generated.csv", "--out",
                         root + "/generated.svg"}) == 0);
    };

    TempDir a("pipe_a");
    TempDir b("pipe_b");
    run_pipeline(a.str());
    run_pipeline(b.str());

    const std::vector<std::string> outputs = {
        "corpus/holdout_expert.csv", "corpus/holdout_nonexpert.csv",
        "aligned/matches.csv",       "aligned/stats.csv",
        "aligned/pair_000_source.csv", "model.json",
        "model.json.loss.csv",       "generated.csv",
        "follower.csv",              "metrics.txt",
        "report.csv",                "generated.svg",
    };
    for (const std::string& rel : outputs) {
        CAPTURE(rel);
        CHECK(read_text_file(a.str(rel)) == read_text_file(b.str(rel)));
    }

    // The follower CSV reloads as a valid trajectory; the metrics report
    // carries the documented keys.
    CHECK(load_csv(a.str("follower.csv")).size() == load_csv(a.str("generated.csv")).size());
    const std::string metrics = read_text_file(a.str("metrics.txt"));
    CHECK(metrics.find("rms_x_m=") != std::string::npos);
    CHECK(metrics.find("rms_y_m=") != std::string::npos);
    CHECK(metrics.find("rms_z_m=") != std::string::npos);

    const std::string report = read_text_file(a.str("report.csv"));
    CHECK(report.find("channel,nonexpert_dtw,generated_dtw") == 0);
}

TEST_CASE("eval maps mismatched trajectories to exit 2, not a crash") {
    TempDir dir("eval_bad");
    std::ofstream(dir.path / "bad.csv") << "t,x,y,z,fx,fy,fz\n0,1,1,1,0,0,oops\n";
    CHECK(run_cli({"eval", "--expert", dir.str("bad.csv"), "--nonexpert",
                   dir.str("bad.csv"), "--generated", dir.str("bad.csv"), "--out",
                   dir.str("r.csv")}) == 2);
}

TEST_CASE("train reports missing pair directory as exit 2") {
    TempDir dir("train_missing");
    write_config(dir.path / "config.txt");
    CHECK(run_cli({"train", "--pairs", dir.str("nothere"), "--config",
                   dir.str("config.txt"), "--out", dir.str("m.json")}) == 2);
}

TEST_CASE("translate with a window larger than the input is exit 2") {
    TempDir dir("short");
    Checkpoint ckpt;
    ckpt.generator = init_mlp({60 * 6, 4, 60 * 6}, {0.0}, 1);
    for (std::size_t c = 0; c < kNumChannels; ++c) ckpt.corpus_stats.max[c] = 1.0;
    ckpt.window_spec = {60, 30};
    save_checkpoint(ckpt, dir.path / "model.json");
    std::ofstream(dir.path / "tiny.csv") << "t,x,y,z,fx,fy,fz\n0,0,0,0,0,0,0\n0.01,1,1,1,1,1,1\n";
    CHECK(run_cli({"translate", "--model", dir.str("model.json"), "--in",
                   dir.str("tiny.csv"), "--out", dir.str("out.csv")}) == 2);
    CHECK(!fs::exists(dir.str("out.csv")));
}

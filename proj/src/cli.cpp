#include "motrans/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "motrans/dtw.hpp"
#include "motrans/errors.hpp"
#include "motrans/gan.hpp"
#include "motrans/io.hpp"
#include "motrans/motion.hpp"
#include "motrans/neural.hpp"
#include "motrans/reconstruct.hpp"
#include "motrans/replay.hpp"
#include "motrans/synth.hpp"

namespace fs = std::filesystem;

namespace motrans {

namespace {

std::vector<fs::path> list_csv_files(const fs::path& dir) {
    if (!fs::exists(dir)) throw MissingFile(dir.string());
    if (!fs::is_directory(dir)) throw InvalidParams(dir.string() + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw EmptyList("no .csv files in " + dir.string());
    return files;
}

std::string pair_name(std::size_t index, const char* role) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "pair_%03zu_%s.csv", index, role);
    return buf;
}

struct SynthArgs {
    std::string out;
    std::size_t experts = 3;
    std::size_t nonexperts = 6;
    std::uint64_t seed = 42;
};

void run_synth(const SynthArgs& a) {
    const Corpus corpus = make_corpus(a.experts, a.nonexperts, default_stroke_params(), a.seed);
    const fs::path out(a.out);

    // The last of each list is the designated hold-out; the rest train.
    for (std::size_t i = 0; i + 1 < corpus.experts.size(); ++i) {
        char name[40];
        std::snprintf(name, sizeof(name), "expert_%03zu.csv", i);
        save_csv(corpus.experts[i], out / "experts" / name);
    }
    for (std::size_t j = 0; j + 1 < corpus.non_experts.size(); ++j) {
        char name[40];
        std::snprintf(name, sizeof(name), "nonexpert_%03zu.csv", j);
        save_csv(corpus.non_experts[j], out / "nonexperts" / name);
    }
    save_csv(corpus.experts.back(), out / "holdout_expert.csv");
    save_csv(corpus.non_experts.back(), out / "holdout_nonexpert.csv");

    std::cout << "synth: wrote " << a.experts << " expert + " << a.nonexperts
              << " nonexpert trajectories to " << a.out << " (seed " << a.seed
              << ", hold-outs at top level)\n";
}

struct AlignArgs {
    std::string experts;
    std::string nonexperts;
    std::string out;
};

void run_align(const AlignArgs& a) {
    std::vector<MotionTrajectory> experts;
    for (const fs::path& p : list_csv_files(a.experts)) experts.push_back(load_csv(p));
    std::vector<MotionTrajectory> nonexperts;
    for (const fs::path& p : list_csv_files(a.nonexperts)) nonexperts.push_back(load_csv(p));

    // Each demonstration is normalized with its own min/max, the same scale
    // translate uses for its input, so the model always sees box-filling
    // shapes. The corpus-wide union stats are recorded alongside for the
    // checkpoint.
    ChannelStats stats;
    bool first = true;
    for (const auto* list : {&nonexperts, &experts}) {
        for (const MotionTrajectory& traj : *list) {
            const ChannelStats s = compute_stats(traj);
            if (first) {
                stats = s;
                first = false;
            } else {
                for (std::size_t c = 0; c < kNumChannels; ++c) {
                    stats.min[c] = std::min(stats.min[c], s.min[c]);
                    stats.max[c] = std::max(stats.max[c], s.max[c]);
                }
            }
        }
    }

    std::vector<MotionTrajectory> norm_experts;
    norm_experts.reserve(experts.size());
    for (const MotionTrajectory& t : experts)
        norm_experts.push_back(normalize(t, compute_stats(t)));
    std::vector<MotionTrajectory> norm_nonexperts;
    norm_nonexperts.reserve(nonexperts.size());
    for (const MotionTrajectory& t : nonexperts)
        norm_nonexperts.push_back(normalize(t, compute_stats(t)));

    const auto matches = match_demonstrations(norm_nonexperts, norm_experts);

    const fs::path out(a.out);
    std::string table = "pair,nonexpert,expert,distance\n";
    static constexpr std::size_t kXyChannels[] = {kX, kY};
    for (std::size_t k = 0; k < matches.size(); ++k) {
        const auto [ne, e] = matches[k];
        const AlignedPair pair = align_pair(norm_nonexperts[ne], norm_experts[e]);
        save_csv(pair.source, out / pair_name(k, "source"));
        save_csv(pair.target, out / pair_name(k, "target"));
        const double d = dtw_distance(norm_nonexperts[ne].samples(),
                                      norm_experts[e].samples(), kXyChannels);
        table += std::to_string(k) + "," + std::to_string(ne) + "," + std::to_string(e) +
                 "," + format_g12(d) + "\n";
    }
    write_text_file_atomic(out / "matches.csv", table);
    save_stats_csv(stats, out / "stats.csv");

    std::cout << "align: wrote " << matches.size() << " aligned pairs to " << a.out
              << "\n";
}

struct TrainArgs {
    std::string pairs;
    std::string config;
    std::string out;
    std::string loss;
};

void run_train(const TrainArgs& a) {
    const TrainConfig config = load_train_config(a.config);

    const fs::path dir(a.pairs);
    std::vector<AlignedPair> pairs;
    for (std::size_t k = 0;; ++k) {
        const fs::path src = dir / pair_name(k, "source");
        const fs::path tgt = dir / pair_name(k, "target");
        if (!fs::exists(src)) break;
        MotionTrajectory source = load_csv(src);
        MotionTrajectory target = load_csv(tgt);
        if (source.size() != target.size())
            throw ShapeMismatch("aligned pair " + std::to_string(k) +
                                " has mismatched lengths");
        pairs.push_back(AlignedPair{std::move(source), std::move(target)});
    }
    if (pairs.empty()) throw EmptyList("no aligned pairs in " + a.pairs);
    const ChannelStats stats = load_stats_csv(dir / "stats.csv");

    const TrainResult result = train(pairs, config);

    Checkpoint ckpt;
    ckpt.generator = result.generator;
    ckpt.corpus_stats = stats;
    ckpt.window_spec = config.window;
    ckpt.seed = config.seed;
    ckpt.train_step = result.history.entries.size();
    save_checkpoint(ckpt, a.out);

    const std::string loss_path = a.loss.empty() ? a.out + ".loss.csv" : a.loss;
    save_loss_csv(result.history, loss_path);

    const TrainRecord::Entry& last = result.history.entries.back();
    std::cout << "train: " << ckpt.train_step << " steps on " << pairs.size()
              << " pairs, final g_total=" << format_g6(last.g_total)
              << ", checkpoint " << a.out << "\n";
}

struct TranslateArgs {
    std::string model;
    std::string in;
    std::string out;
};

void run_translate(const TranslateArgs& a) {
    const Checkpoint ckpt = load_checkpoint(a.model);
    const MotionTrajectory input = load_csv(a.in);
    // Translation I/O runs in the input trajectory's own normalization:
    // input scaled by its min/max, output rescaled to the same range.
    const MotionTrajectory output = translate_trajectory(
        ckpt.generator, input, ckpt.window_spec, compute_stats(input));
    save_csv(output, a.out);
    std::cout << "translate: " << a.in << " -> " << a.out << " (" << output.size()
              << " samples)\n";
}

struct SimulateArgs {
    std::string leader;
    std::string out;
    std::string report;
    ControllerParams controller;
    double mass = 1.0;
    double friction = 5.0;
};

void run_simulate(const SimulateArgs& a) {
    const MotionTrajectory leader = load_csv(a.leader);
    PlantState plant;
    plant.mass = a.mass;
    plant.friction = a.friction;
    for (std::size_t axis = 0; axis < 3; ++axis)
        plant.position[axis] = leader[0].ch[axis];

    const ReplayReport report = replay(leader, a.controller, plant);
    save_csv(report.follower, a.out);
    if (!a.report.empty()) save_replay_report(report, a.report);

    std::cout << "simulate: rms error [x,y,z] = [" << format_g6(report.rms_error_m[0])
              << ", " << format_g6(report.rms_error_m[1]) << ", "
              << format_g6(report.rms_error_m[2]) << "] m over " << leader.size()
              << " leader samples\n";
}

struct EvalArgs {
    std::string expert;
    std::string nonexpert;
    std::string generated;
    std::string out;
};

void run_eval(const EvalArgs& a) {
    const MotionTrajectory expert = load_csv(a.expert);
    const MotionTrajectory nonexpert = load_csv(a.nonexpert);
    const MotionTrajectory generated = load_csv(a.generated);
    const EvalReport report = evaluate(nonexpert, generated, expert);
    save_eval_csv(report, a.out);
    std::cout << format_eval_table(report);
    std::cout << "eval: report written to " << a.out << "\n";
}

struct PlotArgs {
    std::string in;
    std::string out;
};

void run_plot(const PlotArgs& a) {
    const MotionTrajectory traj = load_csv(a.in);
    render_svg(traj, a.out);
    std::size_t red = 0;
    for (std::size_t i = 0; i + 1 < traj.size(); ++i)
        if (traj[i].ch[kFz] > kForceThresholdN) ++red;
    std::cout << "plot: wrote " << a.out << " (" << traj.size() - 1 << " segments, "
              << red << " red)\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"motrans: GAN-based motion trajectory translation pipeline"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic stroke corpus");
    synth->add_option("--out", synth_args.out, "output directory")->required();
    synth->add_option("--experts", synth_args.experts, "number of expert demonstrations");
    synth->add_option("--nonexperts", synth_args.nonexperts,
                      "number of non-expert demonstrations");
    synth->add_option("--seed", synth_args.seed, "corpus seed");

    AlignArgs align_args;
    CLI::App* align = app.add_subcommand("align", "DTW-match and align demonstrations");
    align->add_option("--experts", align_args.experts, "directory of expert CSVs")
        ->required();
    align->add_option("--nonexperts", align_args.nonexperts, "directory of non-expert CSVs")
        ->required();
    align->add_option("--out", align_args.out, "output directory")->required();

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "train the translation model");
    train->add_option("--pairs", train_args.pairs, "directory written by align")
        ->required();
    train->add_option("--config", train_args.config, "key=value training config file")
        ->required();
    train->add_option("--out", train_args.out, "checkpoint JSON path")->required();
    train->add_option("--loss", train_args.loss,
                      "loss history CSV path (default: <out>.loss.csv)");

    TranslateArgs translate_args;
    CLI::App* translate = app.add_subcommand("translate", "translate a trajectory");
    translate->add_option("--model", translate_args.model, "checkpoint JSON")->required();
    translate->add_option("--in", translate_args.in, "input trajectory CSV")->required();
    translate->add_option("--out", translate_args.out, "output trajectory CSV")->required();

    SimulateArgs simulate_args;
    CLI::App* simulate =
        app.add_subcommand("simulate", "replay a trajectory on the simulated follower");
    simulate->add_option("--leader", simulate_args.leader, "leader trajectory CSV")
        ->required();
    simulate->add_option("--out", simulate_args.out, "follower trajectory CSV")->required();
    simulate->add_option("--report", simulate_args.report, "metrics report path");
    simulate->add_option("--kp", simulate_args.controller.kp, "P gain");
    simulate->add_option("--kd", simulate_args.controller.kd, "D gain");
    simulate->add_option("--ts", simulate_args.controller.ts, "control period [s]");
    simulate->add_option("--gpd", simulate_args.controller.g_pd,
                         "pseudo-derivative pole [rad/s]");
    simulate->add_option("--gf", simulate_args.controller.g_f, "force low-pass pole [rad/s]");
    simulate->add_option("--mass", simulate_args.mass, "plant mass [kg]");
    simulate->add_option("--friction", simulate_args.friction, "viscous friction [N s/m]");

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "per-channel DTW evaluation report");
    eval->add_option("--expert", eval_args.expert, "expert trajectory CSV")->required();
    eval->add_option("--nonexpert", eval_args.nonexpert, "non-expert trajectory CSV")
        ->required();
    eval->add_option("--generated", eval_args.generated, "generated trajectory CSV")
        ->required();
    eval->add_option("--out", eval_args.out, "report CSV path")->required();

    PlotArgs plot_args;
    CLI::App* plot = app.add_subcommand("plot", "render an x-y SVG plot");
    plot->add_option("--in", plot_args.in, "trajectory CSV")->required();
    plot->add_option("--out", plot_args.out, "SVG output path")->required();

    std::vector<const char*> argv;
    argv.push_back("motrans");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (synth->parsed()) run_synth(synth_args);
        if (align->parsed()) run_align(align_args);
        if (train->parsed()) run_train(train_args);
        if (translate->parsed()) run_translate(translate_args);
        if (simulate->parsed()) run_simulate(simulate_args);
        if (eval->parsed()) run_eval(eval_args);
        if (plot->parsed()) run_plot(plot_args);
    } catch (const RuntimeFailure& e) {
        std::cerr << app.get_subcommands().front()->get_name() << ": " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << app.get_subcommands().front()->get_name() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace motrans

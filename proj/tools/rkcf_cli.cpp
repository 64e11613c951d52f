// rkcf: command-line driver for tracking, comparison, the rotation benchmark,
// metric recomputation and synthetic sequence generation.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rkcf/evaluation.hpp"
#include "rkcf/io.hpp"
#include "rkcf/tracker.hpp"

namespace {

using namespace rkcf;
namespace fs = std::filesystem;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct RunOptions {
    std::string seq_dir;
    std::string config_path;
    std::string out_dir = "rkcf_out";
    std::vector<std::string> overrides;
    std::string box;
    bool no_rotation = false;
};

struct BenchOptions {
    std::string images_dir;
    int synthetic = 20;
    int per_image = 100;
    std::string envelope = "both";
    std::vector<std::string> methods{"filter", "correlation", "maxshift"};
    std::uint64_t seed = 0;
    int bins = 90;
    int patch_size = 64;
    bool no_refinement = false;
    std::string json_out;
};

struct SynthOptions {
    std::string kind;
    int frames = 60;
    std::string out_dir;
    std::uint64_t seed = 0;
    io::SyntheticParams params;
};

void add_run_options(CLI::App& cmd, RunOptions& o) {
    cmd.add_option("seq_dir", o.seq_dir, "Sequence directory (img/ + groundtruth_rect.txt)")->required();
    cmd.add_option("--config", o.config_path, "key=value config file");
    cmd.add_option("--out", o.out_dir, "Output directory")->capture_default_str();
    cmd.add_option("--set", o.overrides, "Override a config key (key=value), repeatable");
    cmd.add_option("--box", o.box, "Initial box x,y,w,h (1-indexed, like groundtruth_rect.txt)");
}

TrackerConfig effective_config(const RunOptions& o) {
    TrackerConfig config = o.config_path.empty() ? TrackerConfig{} : io::load_config(o.config_path);
    std::string text;
    for (const auto& kv : o.overrides) text += kv + "\n";
    config = io::parse_config(text, config);
    if (o.no_rotation) config.rotation_method = RotationMethod::none;
    config.validate();
    return config;
}

struct LoadedSequence {
    io::SequenceSpec spec;
    std::vector<RealGrid> frames;
    Box init_box;
};

LoadedSequence load(const RunOptions& o) {
    LoadedSequence s;
    s.spec = io::load_sequence(o.seq_dir);
    for (const auto& w : s.spec.warnings) std::cerr << "warning: " << w << "\n";
    if (s.spec.frame_paths.size() < 2) throw DataError("sequence needs at least two frames");
    if (!o.box.empty()) {
        std::vector<Box> boxes;
        try {
            boxes = io::parse_ground_truth(o.box, "--box");
        } catch (const DataError& e) {
            throw InvalidArgument(e.what());
        }
        if (boxes.size() != 1) throw InvalidArgument("--box expects one x,y,w,h");
        s.init_box = boxes.front();
    } else if (s.spec.ground_truth && !s.spec.ground_truth->empty()) {
        s.init_box = s.spec.ground_truth->front();
    } else {
        throw DataError("no ground truth in " + o.seq_dir + "; pass --box");
    }
    s.frames = io::load_frames(s.spec);
    return s;
}

std::span<const Box> ground_truth_of(const LoadedSequence& s) {
    if (!s.spec.ground_truth) return {};
    return *s.spec.ground_truth;
}

void write_run(std::vector<FrameRecord> records, const TrackerConfig& config, const fs::path& out) {
    records = io::quantize(std::move(records));
    io::write_results(records, summarize(records), io::config_to_json(config), out);
}

void print_summary(const std::string& label, const MetricsReport& m) {
    std::printf("%-10s", label.c_str());
    if (m.precision_at_20) std::printf("  precision@20=%.6f", *m.precision_at_20);
    if (m.mean_center_error) std::printf("  mean_error=%.6f", *m.mean_center_error);
    if (m.mho_deg) std::printf("  mho=%.6f", *m.mho_deg);
    if (m.success_rate) std::printf("  R=%.6f", *m.success_rate);
    std::printf("\n");
}

int cmd_track(const RunOptions& o) {
    const TrackerConfig config = effective_config(o);
    const LoadedSequence s = load(o);
    auto records = io::quantize(run_sequence(s.frames, s.init_box, config, ground_truth_of(s)));
    write_run(records, config, o.out_dir);
    print_summary(config.rotation_enabled() ? "rkcf" : "baseline", summarize(records));
    return 0;
}

int cmd_compare(const RunOptions& o) {
    TrackerConfig config = effective_config(o);
    const LoadedSequence s = load(o);
    const ComparisonReport report = compare_trackers(s.frames, s.init_box, config, ground_truth_of(s));

    TrackerConfig baseline_config = config;
    baseline_config.rotation_method = RotationMethod::none;
    if (!config.rotation_enabled()) config.rotation_method = RotationMethod::filter;

    const fs::path out = o.out_dir;
    const auto baseline = io::quantize(report.baseline_records);
    const auto rkcf = io::quantize(report.rkcf_records);
    write_run(baseline, baseline_config, out / "baseline");
    write_run(rkcf, config, out / "rkcf");

    const MetricsReport mb = summarize(baseline);
    const MetricsReport mr = summarize(rkcf);
    std::string diff = "threshold_px,baseline,rkcf,difference\n";
    if (mb.precision_curve && mr.precision_curve) {
        for (std::size_t t = 0; t < mb.precision_curve->size(); ++t) {
            const double b = (*mb.precision_curve)[t];
            const double r = (*mr.precision_curve)[t];
            char line[96];
            std::snprintf(line, sizeof line, "%zu,%.6f,%.6f,%.6f\n", t, b, r, io::quantize(r - b));
            diff += line;
        }
    }
    io::write_text(out / "precision_diff.csv", diff);
    print_summary("baseline", mb);
    print_summary("rkcf", mr);
    return 0;
}

std::string method_label(RotationMethod m) {
    switch (m) {
        case RotationMethod::filter: return "rotation filter";
        case RotationMethod::correlation: return "correlation";
        case RotationMethod::maxshift: return "max shift";
        case RotationMethod::none: break;
    }
    return "none";
}

int cmd_bench(const BenchOptions& o) {
    RotationBenchSpec spec;
    spec.rotations_per_image = o.per_image;
    spec.seed = o.seed;
    spec.bins = o.bins;
    spec.patch_size = o.patch_size;
    spec.refinement = !o.no_refinement;
    if (o.envelope == "both") spec.envelopes = {Envelope::cosine, Envelope::gaussian};
    else spec.envelopes = {parse_envelope(o.envelope)};
    spec.methods.clear();
    for (const auto& m : o.methods) {
        const RotationMethod method = parse_rotation_method(m);
        if (method == RotationMethod::none) throw InvalidArgument("--methods: 'none' is not a rotation method");
        spec.methods.push_back(method);
    }
    spec.images = o.images_dir.empty() ? synthetic_textures(o.synthetic, o.patch_size, o.seed)
                                       : io::load_image_directory(o.images_dir);
    spec.validate();

    const RotationBenchResult result = run_rotation_benchmark(spec);

    std::printf("%-18s", "boundary window");
    for (const Envelope e : spec.envelopes)
        std::printf(" %16s", e == Envelope::cosine ? "cos window" : "Gaussian window");
    std::printf("\n");
    for (const RotationMethod m : spec.methods) {
        std::printf("%-18s", method_label(m).c_str());
        for (const Envelope e : spec.envelopes) std::printf(" %16.2f", result.mae(e, m));
        std::printf("\n");
    }
    std::printf("samples per cell: %zu, absolute error in degrees\n",
                result.cells.empty() ? std::size_t{0} : result.cells.front().samples);

    if (!o.json_out.empty()) {
        MetricsReport report;
        for (const auto& c : result.cells)
            report.per_method_mae[to_string(c.envelope) + "/" + to_string(c.method)] = c.mae_deg;
        nlohmann::ordered_json echo;
        echo["images"] = o.images_dir.empty() ? "synthetic" : o.images_dir;
        echo["image_count"] = spec.images.size();
        echo["rotations_per_image"] = spec.rotations_per_image;
        echo["angle_range_deg"] = {spec.angle_min_deg, spec.angle_max_deg};
        echo["bins"] = spec.bins;
        echo["orientation_mode"] = to_string(spec.mode);
        echo["patch_size"] = spec.patch_size;
        echo["lambda2"] = spec.lambda2;
        echo["rotation_sigma_factor"] = spec.rotation_sigma_factor;
        echo["refinement"] = spec.refinement;
        echo["hog_smoothing"] = spec.smoothing;
        echo["gaussian_sigma_factor"] = spec.gaussian_sigma_factor;
        echo["seed"] = spec.seed;
        io::write_text(o.json_out, io::format_metrics(report, echo));
    }
    return 0;
}

int cmd_eval(const std::string& out_dir) {
    const io::StoredRun run = io::read_results(out_dir);
    std::cout << io::format_metrics(summarize(run.records), run.config);
    return 0;
}

int cmd_synth(const SynthOptions& o) {
    const auto kind = io::parse_synthetic_kind(o.kind);
    const auto seq = io::generate_synthetic_sequence(kind, o.frames, o.params, o.seed);
    io::write_sequence(seq, o.out_dir);
    std::printf("wrote %zu frames to %s\n", seq.frames.size(), o.out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotation-aware kernelized correlation filter tracker"};
    app.require_subcommand(1);

    RunOptions track_opts;
    auto* track = app.add_subcommand("track", "Track a sequence and write records and metrics");
    add_run_options(*track, track_opts);
    track->add_flag("--no-rotation", track_opts.no_rotation, "Run the baseline tracker");

    RunOptions compare_opts;
    auto* compare = app.add_subcommand("compare", "Paired baseline / rotation-aware run");
    add_run_options(*compare, compare_opts);

    BenchOptions bench_opts;
    auto* bench = app.add_subcommand("bench-rotation", "Rotation-detection benchmark (MAE table)");
    auto* images_opt = bench->add_option("--images", bench_opts.images_dir, "Directory of source images");
    bench->add_option("--synthetic", bench_opts.synthetic, "Number of procedural textures")
        ->check(CLI::PositiveNumber)
        ->excludes(images_opt)
        ->capture_default_str();
    bench->add_option("--per-image", bench_opts.per_image, "Rotations per image")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench->add_option("--envelope", bench_opts.envelope, "cos | gauss | both")
        ->check(CLI::IsMember({"cos", "cosine", "gauss", "gaussian", "both"}))
        ->capture_default_str();
    bench->add_option("--methods", bench_opts.methods, "filter correlation maxshift")->delimiter(',');
    bench->add_option("--seed", bench_opts.seed, "Random seed")->capture_default_str();
    bench->add_option("--bins", bench_opts.bins, "Descriptor bins")->capture_default_str();
    bench->add_option("--patch-size", bench_opts.patch_size, "Patch side in pixels")->capture_default_str();
    bench->add_flag("--no-refinement", bench_opts.no_refinement, "Disable sub-bin refinement");
    bench->add_option("--json", bench_opts.json_out, "Also write per-method MAE as JSON");

    std::string eval_dir;
    auto* eval = app.add_subcommand("eval", "Recompute metrics from stored records");
    eval->add_option("out_dir", eval_dir, "Directory written by track")->required();

    SynthOptions synth_opts;
    auto* synth = app.add_subcommand("synth", "Write a synthetic sequence to disk");
    synth->add_option("kind", synth_opts.kind, "translate | rotate | translate_rotate")
        ->required()
        ->check(CLI::IsMember({"translate", "rotate", "translate_rotate"}));
    synth->add_option("--frames", synth_opts.frames, "Frame count")->check(CLI::Range(2, 100000))->capture_default_str();
    synth->add_option("--out", synth_opts.out_dir, "Output directory")->required();
    synth->add_option("--seed", synth_opts.seed, "Random seed")->capture_default_str();
    synth->add_option("--rows", synth_opts.params.rows)->capture_default_str();
    synth->add_option("--cols", synth_opts.params.cols)->capture_default_str();
    synth->add_option("--target-size", synth_opts.params.target_size)->capture_default_str();
    synth->add_option("--velocity", synth_opts.params.velocity_dy, "Rows per frame")->capture_default_str();
    synth->add_option("--velocity-x", synth_opts.params.velocity_dx, "Columns per frame")->capture_default_str();
    synth->add_option("--rotation-rate", synth_opts.params.rotation_rate_deg)->capture_default_str();
    synth->add_option("--theta-std", synth_opts.params.theta_std_deg)->capture_default_str();
    synth->add_option("--noise", synth_opts.params.noise)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (*track) return cmd_track(track_opts);
        if (*compare) return cmd_compare(compare_opts);
        if (*bench) return cmd_bench(bench_opts);
        if (*eval) return cmd_eval(eval_dir);
        if (*synth) return cmd_synth(synth_opts);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kUsageError;
}

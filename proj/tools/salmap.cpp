// salmap: three-layer RGB-D saliency detection, evaluation and montage CLI.
//
// Exit codes: 0 success, 1 runtime/I-O failure, 2 bad flags or parameter
// values. Batch subcommands log per-image failures, keep going, and exit
// nonzero at the end so one corrupt file cannot void a run.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "salmap/centerbias.hpp"
#include "salmap/darkchannel.hpp"
#include "salmap/dataset.hpp"
#include "salmap/evaluation.hpp"
#include "salmap/imageio.hpp"
#include "salmap/montage.hpp"
#include "salmap/saliency.hpp"

namespace fs = std::filesystem;
using namespace salmap;

namespace {

struct PipelineFlags {
    PipelineParams params;
    std::string polarity = "near-low";
    std::string negation = "intent";

    void apply() {
        params.polarity = polarity == "near-high" ? DepthPolarity::NearIsHigh
                                                  : DepthPolarity::NearIsLow;
        params.negation_mode =
            negation == "literal" ? NegationMode::Literal : NegationMode::Intent;
        params.validate();
    }
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
    cmd->add_option("--k", f.params.k, "Regions per layer")->capture_default_str();
    cmd->add_option("--sigma2", f.params.sigma2, "Spatial weight strength")
        ->capture_default_str();
    cmd->add_option("--beta", f.params.beta, "Depth filter fraction")
        ->capture_default_str();
    cmd->add_option("--polarity", f.polarity, "Depth convention: near-low or near-high")
        ->check(CLI::IsMember({"near-low", "near-high"}))
        ->capture_default_str();
    cmd->add_option("--negation-mode", f.negation,
                    "Front-enhancement reading: intent or literal")
        ->check(CLI::IsMember({"intent", "literal"}))
        ->capture_default_str();
    cmd->add_option("--seed", f.params.seed, "Clustering seed")->capture_default_str();
    cmd->add_option("--n-seed-clusters", f.params.n_seed_clusters,
                    "Center-bias boundary seed clusters")
        ->capture_default_str();
    cmd->add_option("--threads", f.params.threads, "Clustering threads (0 = auto)")
        ->capture_default_str();
}

void write_intermediates(const LayerOutputs& out, const fs::path& dir) {
    fs::create_directories(dir);
    save_saliency(out.s1hat, dir / "s1hat.png");
    save_saliency(out.s2hat, dir / "s2hat.png");
    save_rgb(out.extended, dir / "extended.png");
    save_saliency(out.depth_filtered, dir / "depth_filtered.png");
    save_saliency(out.depth_polarized, dir / "depth_polarized.png");
    save_rgb(out.reprocessed, dir / "reprocessed.png");
}

// Run fn(i) for i in [0,n) on `jobs` threads; returns per-item error messages.
std::vector<std::string> for_each_indexed(std::size_t n, int jobs,
                                          const std::function<void(std::size_t)>& fn) {
    std::vector<std::string> errors;
    std::mutex mu;
    auto guarded = [&](std::size_t i) {
        try {
            fn(i);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(mu);
            errors.emplace_back(e.what());
        }
    };
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) guarded(i);
        return errors;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                guarded(i);
            }
        });
    for (auto& t : pool) t.join();
    return errors;
}

// ------------------------------------------------------------------ detect

struct DetectFlags {
    PipelineFlags pipe;
    std::string rgb, depth, out;
    std::string center_bias;
    std::string intermediates_dir;
};

int run_detect(DetectFlags& f) {
    f.pipe.apply();
    const RgbImage img = load_rgb(f.rgb);
    const DepthMap depth = load_depth(f.depth, f.pipe.params.polarity);
    std::optional<SaliencyMap> wc;
    if (!f.center_bias.empty())
        wc = load_center_bias(f.center_bias, img.width, img.height);
    const LayerOutputs out =
        detect(img, depth, f.pipe.params, wc ? &*wc : nullptr);
    save_saliency(out.s_final, f.out);
    if (!f.intermediates_dir.empty()) write_intermediates(out, f.intermediates_dir);
    return 0;
}

// ------------------------------------------------------------ detect-batch

struct BatchFlags {
    PipelineFlags pipe;
    std::string dataset, out_dir;
    std::string layout = "generic";
    std::string rgb_dir, depth_dir, gt_dir, depth_suffix, gt_suffix;
    int jobs = 1;
    bool emit_intermediates = false;
};

DatasetLayout make_layout(const BatchFlags& f) {
    DatasetLayout layout = f.layout == "rgbd1"   ? DatasetLayout::rgbd1()
                           : f.layout == "rgbd2" ? DatasetLayout::rgbd2()
                                                 : DatasetLayout::generic();
    if (!f.rgb_dir.empty()) layout.rgb_dir = f.rgb_dir;
    if (!f.depth_dir.empty()) layout.depth_dir = f.depth_dir;
    if (!f.gt_dir.empty()) layout.gt_dir = f.gt_dir;
    if (!f.depth_suffix.empty()) layout.depth_suffix = f.depth_suffix;
    if (!f.gt_suffix.empty()) layout.gt_suffix = f.gt_suffix;
    return layout;
}

int run_detect_batch(BatchFlags& f) {
    f.pipe.apply();
    PipelineParams params = f.pipe.params;
    if (f.jobs > 1) params.threads = 1;  // one clustering thread per worker

    const DatasetIndex index = scan_dataset(f.dataset, make_layout(f));
    fs::create_directories(f.out_dir);
    const fs::path out_dir = f.out_dir;
    if (f.emit_intermediates) {
        fs::create_directories(out_dir / "s1hat");
        fs::create_directories(out_dir / "s2hat");
    }

    const auto errors = for_each_indexed(index.entries.size(), f.jobs, [&](std::size_t i) {
        const DatasetEntry& entry = index.entries[i];
        const RgbImage img = load_rgb(entry.rgb);
        const DepthMap depth = load_depth(entry.depth, params.polarity);
        const LayerOutputs out = detect(img, depth, params);
        save_saliency(out.s_final, out_dir / (entry.id + ".png"));
        if (f.emit_intermediates) {
            save_saliency(out.s1hat, out_dir / "s1hat" / (entry.id + ".png"));
            save_saliency(out.s2hat, out_dir / "s2hat" / (entry.id + ".png"));
        }
    });
    for (const auto& e : errors) std::fprintf(stderr, "error: %s\n", e.c_str());
    std::fprintf(stderr, "processed %zu/%zu images\n",
                 index.entries.size() - errors.size(), index.entries.size());
    return errors.empty() ? 0 : 1;
}

// -------------------------------------------------------------------- eval

struct EvalFlags {
    std::string pred_dir, gt_dir, out_prefix;
};

int run_eval(EvalFlags& f) {
    const auto gts = list_rasters(f.gt_dir);
    if (gts.empty())
        throw IoError(IoErrorKind::Unreadable, f.gt_dir, "no ground-truth rasters found");

    std::vector<std::string> unmatched;
    MetricAccumulator acc;
    for (const auto& gt_path : gts) {
        const std::string id = gt_path.stem().string();
        fs::path pred;
        for (const char* ext : {".png", ".pgm", ".PNG", ".PGM"}) {
            fs::path candidate = fs::path(f.pred_dir) / (id + ext);
            if (fs::exists(candidate)) {
                pred = candidate;
                break;
            }
        }
        if (pred.empty()) {
            unmatched.push_back(id);
            continue;
        }
        acc.add(id, load_gray(pred), load_mask(gt_path));
    }
    if (!unmatched.empty()) {
        std::fprintf(stderr, "error: missing predictions for:");
        for (const auto& id : unmatched) std::fprintf(stderr, " %s", id.c_str());
        std::fprintf(stderr, "\n");
        return 1;
    }
    const EvalReport report = acc.report();
    for (const auto& w : report.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    write_report_csv(report, f.out_prefix);
    std::printf("mae %.6f\n", report.mae);
    std::printf("f_measure %.6f\n", report.f_adaptive);
    std::printf("f_measure_curve_max %.6f\n", report.f_curve_max);
    return 0;
}

// ------------------------------------------------------------- dark-target

struct DarkTargetFlags {
    PipelineFlags pipe;
    std::string frames, out_dir;
    int patch = 15;
    int jobs = 1;
};

int run_dark_target(DarkTargetFlags& f) {
    f.pipe.apply();
    if (f.patch < 1 || f.patch % 2 == 0)
        throw InvalidParam("patch size must be odd and >= 1");
    PipelineParams params = f.pipe.params;
    if (f.jobs > 1) params.threads = 1;

    const auto frames = list_rasters(f.frames);
    if (frames.empty())
        throw IoError(IoErrorKind::Unreadable, f.frames, "no frames found");
    fs::create_directories(f.out_dir);
    const fs::path out_dir = f.out_dir;

    const auto errors = for_each_indexed(frames.size(), f.jobs, [&](std::size_t i) {
        const RgbImage img = load_rgb(frames[i]);
        const LayerOutputs out = small_target_detect(img, params, f.patch);
        save_saliency(out.s_final, out_dir / (frames[i].stem().string() + ".png"));
    });
    for (const auto& e : errors) std::fprintf(stderr, "error: %s\n", e.c_str());
    return errors.empty() ? 0 : 1;
}

// ----------------------------------------------------------------- montage

struct MontageFlags {
    std::string rgb, saliency, color, alpha, bg, in, out;
    std::string out_color, out_alpha;
    std::string permute = "rgb";
    std::vector<double> gains{1.0, 1.0, 1.0};
    double binarize = -1.0;
    int width = 0, height = 0, x = 0, y = 0;
};

SegmentedObject load_object(const MontageFlags& f) {
    SegmentedObject obj;
    obj.color = load_rgb(f.color);
    obj.alpha = load_gray(f.alpha);
    require_same_size(obj.color.width, obj.color.height, obj.alpha.width,
                      obj.alpha.height, "object color vs alpha");
    return obj;
}

void save_object(const SegmentedObject& obj, const MontageFlags& f) {
    save_rgb(obj.color, f.out_color);
    save_saliency(obj.alpha, f.out_alpha);
}

int run_montage_segment(MontageFlags& f) {
    const RgbImage img = load_rgb(f.rgb);
    const SaliencyMap sal = load_gray(f.saliency);
    const SegmentedObject obj = f.binarize >= 0.0
                                    ? segment_object_binarized(img, sal, f.binarize)
                                    : segment_object(img, sal);
    save_object(obj, f);
    return 0;
}

int run_montage_recolor(MontageFlags& f) {
    ChannelTransform t;
    if (f.permute.size() != 3)
        throw InvalidParam("--permute must be three characters from {r,g,b}");
    for (int c = 0; c < 3; ++c) {
        const char ch = f.permute[c];
        if (ch != 'r' && ch != 'g' && ch != 'b')
            throw InvalidParam("--permute must be three characters from {r,g,b}");
        t.permutation[c] = ch == 'r' ? 0 : ch == 'g' ? 1 : 2;
    }
    if (f.gains.size() != 3) throw InvalidParam("--gains needs three values");
    for (int c = 0; c < 3; ++c) t.gains[c] = f.gains[c];
    save_object(recolor(load_object(f), t), f);
    return 0;
}

int run_montage_resize(MontageFlags& f) {
    save_rgb(resize_bilinear(load_rgb(f.in), f.width, f.height), f.out);
    return 0;
}

int run_montage_composite(MontageFlags& f) {
    const RgbImage bg = load_rgb(f.bg);
    save_rgb(composite(bg, load_object(f), f.x, f.y), f.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-layer backpropagation RGB-D saliency detection"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    const char* cfg_env = std::getenv("SALMAP_CONFIG");
    app.set_config("--config", cfg_env ? cfg_env : "",
                   "key=value config file merged with flags (flags win)");

    DetectFlags detect_f;
    CLI::App* detect_cmd = app.add_subcommand("detect", "Detect saliency for one image");
    detect_cmd->fallthrough();
    detect_cmd->add_option("--rgb", detect_f.rgb, "Input color image")->required();
    detect_cmd->add_option("--depth", detect_f.depth, "Input depth map")->required();
    detect_cmd->add_option("--out", detect_f.out, "Output saliency PNG")->required();
    detect_cmd->add_option("--center-bias-map", detect_f.center_bias,
                           "Use an externally computed center-bias map");
    detect_cmd->add_option("--emit-intermediates", detect_f.intermediates_dir,
                           "Also write per-layer maps into this directory");
    add_pipeline_flags(detect_cmd, detect_f.pipe);

    BatchFlags batch_f;
    CLI::App* batch_cmd =
        app.add_subcommand("detect-batch", "Detect saliency for a dataset");
    batch_cmd->fallthrough();
    batch_cmd->add_option("--dataset", batch_f.dataset, "Dataset root")->required();
    batch_cmd->add_option("--out-dir", batch_f.out_dir, "Output directory")->required();
    batch_cmd->add_option("--layout", batch_f.layout, "Dataset layout preset")
        ->check(CLI::IsMember({"generic", "rgbd1", "rgbd2"}))
        ->capture_default_str();
    batch_cmd->add_option("--rgb-dir", batch_f.rgb_dir, "Override RGB subdirectory");
    batch_cmd->add_option("--depth-dir", batch_f.depth_dir, "Override depth subdirectory");
    batch_cmd->add_option("--gt-dir", batch_f.gt_dir, "Override gt subdirectory");
    batch_cmd->add_option("--depth-suffix", batch_f.depth_suffix,
                          "Stem suffix of depth files");
    batch_cmd->add_option("--gt-suffix", batch_f.gt_suffix, "Stem suffix of gt files");
    batch_cmd->add_option("--jobs", batch_f.jobs, "Concurrent images")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    batch_cmd->add_flag("--emit-intermediates", batch_f.emit_intermediates,
                        "Also write s1hat/ and s2hat/ maps");
    add_pipeline_flags(batch_cmd, batch_f.pipe);

    EvalFlags eval_f;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate saved saliency maps");
    eval_cmd->fallthrough();
    eval_cmd->add_option("--pred-dir", eval_f.pred_dir, "Prediction directory")->required();
    eval_cmd->add_option("--gt-dir", eval_f.gt_dir, "Ground-truth directory")->required();
    eval_cmd->add_option("--out-prefix", eval_f.out_prefix, "CSV output prefix")->required();

    DarkTargetFlags dark_f;
    CLI::App* dark_cmd = app.add_subcommand(
        "dark-target", "Small-target mode: dark channel replaces the depth map");
    dark_cmd->fallthrough();
    dark_cmd->add_option("--frames", dark_f.frames, "Directory of frames")->required();
    dark_cmd->add_option("--out-dir", dark_f.out_dir, "Output directory")->required();
    dark_cmd->add_option("--patch", dark_f.patch, "Dark channel window (odd)")
        ->capture_default_str();
    dark_cmd->add_option("--jobs", dark_f.jobs, "Concurrent frames")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_pipeline_flags(dark_cmd, dark_f.pipe);

    MontageFlags mont_f;
    CLI::App* mont_cmd = app.add_subcommand("montage", "Saliency-driven montage tools");
    mont_cmd->fallthrough();
    mont_cmd->require_subcommand(1);

    CLI::App* seg_cmd = mont_cmd->add_subcommand("segment", "Cut out the salient object");
    seg_cmd->fallthrough();
    seg_cmd->add_option("--rgb", mont_f.rgb, "Input color image")->required();
    seg_cmd->add_option("--saliency", mont_f.saliency, "Saliency map as matte")->required();
    seg_cmd->add_option("--out-color", mont_f.out_color, "Output color PNG")->required();
    seg_cmd->add_option("--out-alpha", mont_f.out_alpha, "Output alpha PNG")->required();
    seg_cmd->add_option("--binarize", mont_f.binarize,
                        "Binarize the matte at this threshold first");

    CLI::App* rec_cmd = mont_cmd->add_subcommand("recolor", "Recolor a segmented object");
    rec_cmd->fallthrough();
    rec_cmd->add_option("--color", mont_f.color, "Object color PNG")->required();
    rec_cmd->add_option("--alpha", mont_f.alpha, "Object alpha PNG")->required();
    rec_cmd->add_option("--permute", mont_f.permute, "Channel order, e.g. bgr")
        ->capture_default_str();
    rec_cmd->add_option("--gains", mont_f.gains, "Per-channel gains in [0,2]")
        ->delimiter(',');
    rec_cmd->add_option("--out-color", mont_f.out_color, "Output color PNG")->required();
    rec_cmd->add_option("--out-alpha", mont_f.out_alpha, "Output alpha PNG")->required();

    CLI::App* res_cmd = mont_cmd->add_subcommand("resize", "Bilinear resize");
    res_cmd->fallthrough();
    res_cmd->add_option("--in", mont_f.in, "Input image")->required();
    res_cmd->add_option("--out", mont_f.out, "Output image")->required();
    res_cmd->add_option("--width", mont_f.width, "Target width")->required();
    res_cmd->add_option("--height", mont_f.height, "Target height")->required();

    CLI::App* comp_cmd = mont_cmd->add_subcommand("composite", "Place an object over a background");
    comp_cmd->fallthrough();
    comp_cmd->add_option("--bg", mont_f.bg, "Background image")->required();
    comp_cmd->add_option("--color", mont_f.color, "Object color PNG")->required();
    comp_cmd->add_option("--alpha", mont_f.alpha, "Object alpha PNG")->required();
    comp_cmd->add_option("--x", mont_f.x, "Placement x")->required();
    comp_cmd->add_option("--y", mont_f.y, "Placement y")->required();
    comp_cmd->add_option("--out", mont_f.out, "Output image")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(detect_cmd)) return run_detect(detect_f);
        if (app.got_subcommand(batch_cmd)) return run_detect_batch(batch_f);
        if (app.got_subcommand(eval_cmd)) return run_eval(eval_f);
        if (app.got_subcommand(dark_cmd)) return run_dark_target(dark_f);
        if (app.got_subcommand(mont_cmd)) {
            if (mont_cmd->got_subcommand(seg_cmd)) return run_montage_segment(mont_f);
            if (mont_cmd->got_subcommand(rec_cmd)) return run_montage_recolor(mont_f);
            if (mont_cmd->got_subcommand(res_cmd)) return run_montage_resize(mont_f);
            if (mont_cmd->got_subcommand(comp_cmd)) return run_montage_composite(mont_f);
        }
    } catch (const InvalidParam& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

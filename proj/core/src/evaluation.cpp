#include "salmap/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "salmap/imageio.hpp"

namespace fs = std::filesystem;

namespace salmap {

namespace {

inline int pred_byte(float v) {
    // floor(v*255) makes thresholding at j/255 exact for any float input
    return std::clamp(int(v * 255.f), 0, 255);
}

inline double precision_of(std::uint64_t tp, std::uint64_t fp) {
    return tp + fp == 0 ? 1.0 : double(tp) / double(tp + fp);
}

inline double f_of(double p, double r) {
    return p + r == 0 ? 0.0 : 2.0 * p * r / (p + r);
}

struct Counts {
    std::uint64_t tp = 0, fp = 0, fn = 0;
};

Counts binarize_counts(const SaliencyMap& pred, const GroundTruthMask& gt,
                       float threshold) {
    Counts c;
    for (std::size_t i = 0; i < gt.pixels(); ++i) {
        const bool p = pred.data[i] >= threshold;
        const bool g = gt.data[i] != 0;
        c.tp += p && g;
        c.fp += p && !g;
        c.fn += !p && g;
    }
    return c;
}

}  // namespace

double mae(const SaliencyMap& pred, const GroundTruthMask& gt) {
    require_same_size(pred.width, pred.height, gt.width, gt.height, "mae pred vs gt");
    double sum = 0.0;
    for (std::size_t i = 0; i < gt.pixels(); ++i)
        sum += std::abs(double(pred.data[i]) - double(gt.data[i]));
    return sum / double(gt.pixels());
}

void MetricAccumulator::add(const std::string& id, const SaliencyMap& pred,
                            const GroundTruthMask& gt) {
    require_same_size(pred.width, pred.height, gt.width, gt.height,
                      ("metrics for '" + id + "'").c_str());
    PerImageMetrics pim;
    pim.id = id;
    pim.mae = mae(pred, gt);
    mae_sum_ += pim.mae;
    ++n_images_;

    std::uint64_t positives = 0;
    for (std::size_t i = 0; i < gt.pixels(); ++i) positives += gt.data[i];
    if (positives == 0) {
        warnings_.push_back("ground truth for '" + id +
                            "' has no positive pixels; excluded from recall metrics");
        per_image_.push_back(std::move(pim));
        return;
    }

    for (std::size_t i = 0; i < gt.pixels(); ++i) {
        const int b = pred_byte(pred.data[i]);
        (gt.data[i] ? pos_ : neg_)[b]++;
    }

    double mean = 0.0;
    for (const float v : pred.data) mean += v;
    mean /= double(pred.pixels());
    // clamp so saturated maps (mean > 0.5) still predict their bright pixels
    const Counts c = binarize_counts(pred, gt, float(std::min(2.0 * mean, 1.0)));
    adaptive_tp_ += c.tp;
    adaptive_fp_ += c.fp;
    adaptive_fn_ += c.fn;
    const double p = precision_of(c.tp, c.fp);
    const double r = double(c.tp) / double(c.tp + c.fn);
    pim.f_adaptive = f_of(p, r);
    per_image_.push_back(std::move(pim));
}

EvalReport MetricAccumulator::report() const {
    EvalReport rep;
    rep.per_image = per_image_;
    std::sort(rep.per_image.begin(), rep.per_image.end(),
              [](const PerImageMetrics& a, const PerImageMetrics& b) { return a.id < b.id; });
    rep.warnings = warnings_;
    rep.mae = n_images_ ? mae_sum_ / double(n_images_) : 0.0;

    std::uint64_t pos_total = 0, neg_total = 0;
    for (int b = 0; b < 256; ++b) {
        pos_total += pos_[b];
        neg_total += neg_[b];
    }

    rep.curve.resize(256);
    std::uint64_t tp = pos_total, fp = neg_total;  // threshold 0: everything positive
    for (int j = 0; j < 256; ++j) {
        if (j > 0) {  // drop the bytes below the threshold
            tp -= pos_[j - 1];
            fp -= neg_[j - 1];
        }
        const std::uint64_t fn = pos_total - tp;
        const std::uint64_t tn = neg_total - fp;
        CurveSample& s = rep.curve[j];
        s.threshold = double(j) / 255.0;
        s.precision = precision_of(tp, fp);
        s.recall = pos_total ? double(tp) / double(tp + fn) : 0.0;
        s.tpr = s.recall;
        s.fpr = fp + tn ? double(fp) / double(fp + tn) : 0.0;
    }

    rep.max_p = rep.min_p = rep.curve[0].precision;
    rep.max_r = rep.min_r = rep.curve[0].recall;
    rep.f_curve_max = 0.0;
    for (const auto& s : rep.curve) {
        rep.max_p = std::max(rep.max_p, s.precision);
        rep.min_p = std::min(rep.min_p, s.precision);
        rep.max_r = std::max(rep.max_r, s.recall);
        rep.min_r = std::min(rep.min_r, s.recall);
        rep.f_curve_max = std::max(rep.f_curve_max, f_of(s.precision, s.recall));
    }

    const double ap = precision_of(adaptive_tp_, adaptive_fp_);
    const double ar = adaptive_tp_ + adaptive_fn_
                          ? double(adaptive_tp_) / double(adaptive_tp_ + adaptive_fn_)
                          : 0.0;
    rep.f_adaptive = f_of(ap, ar);
    return rep;
}

namespace {

EvalReport accumulate_pairs(std::span<const SaliencyMap> preds,
                            std::span<const GroundTruthMask> gts) {
    if (preds.empty() || preds.size() != gts.size())
        throw InvalidParam("evaluation: need equal, non-empty prediction/gt lists");
    MetricAccumulator acc;
    for (std::size_t i = 0; i < preds.size(); ++i)
        acc.add(std::to_string(i), preds[i], gts[i]);
    return acc.report();
}

}  // namespace

std::vector<CurveSample> pr_curve(std::span<const SaliencyMap> preds,
                                  std::span<const GroundTruthMask> gts) {
    return accumulate_pairs(preds, gts).curve;
}

std::vector<CurveSample> roc_curve(std::span<const SaliencyMap> preds,
                                   std::span<const GroundTruthMask> gts) {
    return accumulate_pairs(preds, gts).curve;
}

double f_measure(std::span<const SaliencyMap> preds, std::span<const GroundTruthMask> gts,
                 FMeasureMode mode) {
    const EvalReport rep = accumulate_pairs(preds, gts);
    return mode == FMeasureMode::AdaptiveThreshold ? rep.f_adaptive : rep.f_curve_max;
}

EvalReport evaluate_dataset(const DatasetIndex& index, const fs::path& pred_dir) {
    std::vector<std::string> missing;
    MetricAccumulator acc;
    for (const auto& entry : index.entries) {
        if (!entry.gt) {
            missing.push_back(entry.id + " (no ground truth)");
            continue;
        }
        fs::path pred_path;
        for (const char* ext : {".png", ".pgm", ".PNG", ".PGM"}) {
            fs::path candidate = pred_dir / (entry.id + ext);
            if (fs::exists(candidate)) {
                pred_path = candidate;
                break;
            }
        }
        if (pred_path.empty()) {
            missing.push_back(entry.id + " (no prediction)");
            continue;
        }
        acc.add(entry.id, load_gray(pred_path), load_mask(*entry.gt));
    }
    if (!missing.empty()) {
        std::string ids;
        for (const auto& m : missing) ids += (ids.empty() ? "" : ", ") + m;
        throw IoError(IoErrorKind::Unreadable, pred_dir.string(), "unmatched ids: " + ids);
    }
    return acc.report();
}

void write_report_csv(const EvalReport& report, const fs::path& prefix) {
    auto open = [](const fs::path& p) {
        std::FILE* f = std::fopen(p.string().c_str(), "w");
        if (!f) throw IoError(IoErrorKind::Unwritable, p.string(), "cannot write CSV");
        return f;
    };

    const fs::path summary_path = prefix.string() + "_summary.csv";
    std::FILE* f = open(summary_path);
    std::fprintf(f, "metric,value\n");
    std::fprintf(f, "mae,%.6f\n", report.mae);
    std::fprintf(f, "f_measure,%.6f\n", report.f_adaptive);
    std::fprintf(f, "f_measure_curve_max,%.6f\n", report.f_curve_max);
    std::fprintf(f, "max_p,%.6f\n", report.max_p);
    std::fprintf(f, "min_p,%.6f\n", report.min_p);
    std::fprintf(f, "max_r,%.6f\n", report.max_r);
    std::fprintf(f, "min_r,%.6f\n", report.min_r);
    std::fclose(f);

    for (const char* kind : {"_pr.csv", "_roc.csv"}) {
        f = open(prefix.string() + kind);
        std::fprintf(f, "threshold,precision,recall,tpr,fpr\n");
        for (const auto& s : report.curve)
            std::fprintf(f, "%.6f,%.6f,%.6f,%.6f,%.6f\n", s.threshold, s.precision,
                         s.recall, s.tpr, s.fpr);
        std::fclose(f);
    }

    f = open(prefix.string() + "_per_image.csv");
    std::fprintf(f, "id,mae,f_adaptive\n");
    for (const auto& pim : report.per_image) {
        if (pim.f_adaptive)
            std::fprintf(f, "%s,%.6f,%.6f\n", pim.id.c_str(), pim.mae, *pim.f_adaptive);
        else
            std::fprintf(f, "%s,%.6f,\n", pim.id.c_str(), pim.mae);
    }
    std::fclose(f);
}

}  // namespace salmap

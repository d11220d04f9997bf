#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "salmap/dataset.hpp"
#include "salmap/types.hpp"

namespace salmap {

/// Mean absolute per-pixel difference, accumulated in input order.
double mae(const SaliencyMap& pred, const GroundTruthMask& gt);

struct CurveSample {
    double threshold = 0;
    double precision = 0;
    double recall = 0;
    double tpr = 0;
    double fpr = 0;
};

enum class FMeasureMode { AdaptiveThreshold, CurveMax };

struct PerImageMetrics {
    std::string id;
    double mae = 0;
    std::optional<double> f_adaptive;  // absent when the ground truth has no positives
};

struct EvalReport {
    double mae = 0;           // mean of per-image MAEs
    double f_adaptive = 0;    // Eq-17 at per-image threshold 2*mean(pred)
    double f_curve_max = 0;   // max Eq-17 over the PR curve
    std::vector<CurveSample> curve;  // one sample per threshold {0..255}/255
    double max_p = 0, min_p = 0, max_r = 0, min_r = 0;
    std::vector<PerImageMetrics> per_image;
    std::vector<std::string> warnings;
};

/// Pools TP/FP/FN/TN over images before taking any ratio. Images whose ground
/// truth has no positive pixel are excluded from curves and F-measures (with a
/// warning) but still contribute their MAE.
class MetricAccumulator {
public:
    void add(const std::string& id, const SaliencyMap& pred, const GroundTruthMask& gt);
    EvalReport report() const;

private:
    std::array<std::uint64_t, 256> pos_{};  // pred byte histogram over gt positives
    std::array<std::uint64_t, 256> neg_{};
    std::uint64_t adaptive_tp_ = 0, adaptive_fp_ = 0, adaptive_fn_ = 0;
    double mae_sum_ = 0;
    std::size_t n_images_ = 0;
    std::vector<PerImageMetrics> per_image_;
    std::vector<std::string> warnings_;
};

std::vector<CurveSample> pr_curve(std::span<const SaliencyMap> preds,
                                  std::span<const GroundTruthMask> gts);
std::vector<CurveSample> roc_curve(std::span<const SaliencyMap> preds,
                                   std::span<const GroundTruthMask> gts);
double f_measure(std::span<const SaliencyMap> preds, std::span<const GroundTruthMask> gts,
                 FMeasureMode mode = FMeasureMode::AdaptiveThreshold);

/// Evaluate saved predictions (pred_dir/<id> with any supported extension)
/// against the indexed ground truths.
EvalReport evaluate_dataset(const DatasetIndex& index,
                            const std::filesystem::path& pred_dir);

/// Write <prefix>_summary.csv, <prefix>_pr.csv, <prefix>_roc.csv and
/// <prefix>_per_image.csv.
void write_report_csv(const EvalReport& report, const std::filesystem::path& prefix);

}  // namespace salmap

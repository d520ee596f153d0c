#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace codecstream {

// Ground-truth cycle starts for one video, strictly increasing seconds.
struct CycleAnnotations {
    std::string video_id;
    std::vector<double> starts;
};

// Predicted cycle starts; duplicates are permitted and become false
// positives once their target is taken.
struct CyclePrediction {
    std::string video_id;
    std::vector<double> starts;
};

struct MatchResult {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    std::vector<std::pair<int, int>> pairs;  // (prediction index, gt index)
};

// Greedy tolerance matching: predictions in ascending time each claim the
// nearest unmatched ground-truth start within delta seconds (ties go to the
// earlier start). Each ground truth is matched at most once.
MatchResult greedy_match(const std::vector<double>& pred, const std::vector<double>& gt,
                         double delta);

// How per-video scores aggregate precision and recall. precision_recall is
// the default; f1 is the sensitivity-analysis alternative behind a CLI flag.
enum class ApMode { precision_recall, f1 };

// AP@delta = precision * recall of the greedy match. False positives pull
// precision down, so dense enumeration cannot score well. Throws
// EmptyGroundTruth when gt is empty.
double ap_at_delta(const std::vector<double>& pred, const std::vector<double>& gt, double delta,
                   ApMode mode = ApMode::precision_recall);

struct VideoScore {
    std::string video_id;
    std::vector<double> ap_per_delta;
    double mean_ap = 0.0;
    bool missing_prediction = false;
};

struct EvalReport {
    std::vector<double> deltas;
    std::vector<VideoScore> videos;
    double map = 0.0;
};

// mAP: mean over videos of the mean over tolerance levels of AP@delta.
// Videos without a prediction score as empty lists. jobs > 1 evaluates
// videos in parallel; the aggregation order stays deterministic.
EvalReport jumpscore_map(const std::vector<CycleAnnotations>& dataset,
                         const std::vector<CyclePrediction>& predictions,
                         const std::vector<double>& deltas = {0.1, 0.2, 0.3},
                         ApMode mode = ApMode::precision_recall, int jobs = 1);

// Extracts the timestamps from free-form model output: comma / whitespace /
// newline separated decimal numbers, optional surrounding brackets,
// optional trailing "s" unit. Throws NoTimestampsFound when nothing
// numeric survives.
std::vector<double> parse_prediction_output(const std::string& text);

// --- file formats ---------------------------------------------------------

// Line-delimited records {video_id, starts:[...]}.
std::vector<CycleAnnotations> load_annotations(const std::filesystem::path& path);

// Same shape, or raw-output records {video_id, text} run through
// parse_prediction_output; unparseable raw outputs score as empty
// predictions and are reported as warnings.
struct PredictionLoad {
    std::vector<CyclePrediction> predictions;
    std::vector<std::string> warnings;
};

PredictionLoad load_predictions(const std::filesystem::path& path);

}  // namespace codecstream

#include "codecstream/jumpscore.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "codecstream/error.hpp"

namespace codecstream {

MatchResult greedy_match(const std::vector<double>& pred, const std::vector<double>& gt,
                         double delta) {
    if (delta <= 0.0) {
        throw Error(ErrorKind::invalid_config, "tolerance delta must be > 0");
    }

    // Ascending-time processing order, stable for duplicate predictions.
    std::vector<int> order(pred.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return pred[static_cast<std::size_t>(a)] <
                                                pred[static_cast<std::size_t>(b)]; });

    std::vector<bool> taken(gt.size(), false);
    MatchResult result;
    for (int p : order) {
        const double t = pred[static_cast<std::size_t>(p)];
        int best = -1;
        double best_dist = 0.0;
        for (std::size_t j = 0; j < gt.size(); ++j) {
            if (taken[j]) continue;
            const double dist = std::abs(gt[j] - t);
            if (dist > delta) continue;
            // Nearest unmatched start; equidistant ties go to the earlier one.
            if (best < 0 || dist < best_dist) {
                best = static_cast<int>(j);
                best_dist = dist;
            }
        }
        if (best >= 0) {
            taken[static_cast<std::size_t>(best)] = true;
            result.pairs.emplace_back(p, best);
        }
    }

    result.tp = static_cast<int>(result.pairs.size());
    result.fp = static_cast<int>(pred.size()) - result.tp;
    result.fn = static_cast<int>(gt.size()) - result.tp;
    return result;
}

double ap_at_delta(const std::vector<double>& pred, const std::vector<double>& gt, double delta,
                   ApMode mode) {
    if (gt.empty()) {
        throw Error(ErrorKind::empty_ground_truth, "video has no annotated cycle starts");
    }
    const MatchResult match = greedy_match(pred, gt, delta);
    const double precision =
        pred.empty() ? 1.0
                     : static_cast<double>(match.tp) / static_cast<double>(match.tp + match.fp);
    const double recall =
        static_cast<double>(match.tp) / static_cast<double>(match.tp + match.fn);
    if (mode == ApMode::f1) {
        return (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    return precision * recall;
}

EvalReport jumpscore_map(const std::vector<CycleAnnotations>& dataset,
                         const std::vector<CyclePrediction>& predictions,
                         const std::vector<double>& deltas, ApMode mode, int jobs) {
    if (deltas.empty()) {
        throw Error(ErrorKind::invalid_config, "need at least one tolerance level");
    }
    if (jobs < 1) {
        throw Error(ErrorKind::invalid_config, "jobs must be >= 1");
    }

    std::map<std::string, const CyclePrediction*> by_id;
    for (const CyclePrediction& p : predictions) {
        by_id[p.video_id] = &p;
    }

    EvalReport report;
    report.deltas = deltas;
    report.videos.resize(dataset.size());

    static const std::vector<double> kEmpty;
    auto score_video = [&](std::size_t v) {
        const CycleAnnotations& ann = dataset[v];
        VideoScore score;
        score.video_id = ann.video_id;
        auto it = by_id.find(ann.video_id);
        score.missing_prediction = (it == by_id.end());
        const std::vector<double>& pred = score.missing_prediction ? kEmpty : it->second->starts;

        double sum = 0.0;
        for (double delta : deltas) {
            const double ap = ap_at_delta(pred, ann.starts, delta, mode);
            score.ap_per_delta.push_back(ap);
            sum += ap;
        }
        score.mean_ap = sum / static_cast<double>(deltas.size());
        report.videos[v] = std::move(score);
    };

    if (jobs == 1 || dataset.size() < 2) {
        for (std::size_t v = 0; v < dataset.size(); ++v) score_video(v);
    } else {
        // Videos are independent; strided workers keep the ordering fixed.
        const std::size_t workers =
            std::min<std::size_t>(static_cast<std::size_t>(jobs), dataset.size());
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                for (std::size_t v = w; v < dataset.size(); v += workers) score_video(v);
            });
        }
        for (std::thread& t : pool) t.join();
    }

    double map_sum = 0.0;
    for (const VideoScore& score : report.videos) map_sum += score.mean_ap;
    report.map = report.videos.empty() ? 0.0 : map_sum / static_cast<double>(report.videos.size());
    return report;
}

std::vector<double> parse_prediction_output(const std::string& text) {
    std::vector<double> out;
    std::string token;
    auto flush = [&]() {
        if (token.empty()) return;
        std::string t = std::move(token);
        token.clear();
        // Strip list punctuation around the number and a trailing unit "s".
        std::size_t begin = 0;
        std::size_t end = t.size();
        while (begin < end && (t[begin] == '[' || t[begin] == '(' || t[begin] == '"')) ++begin;
        while (end > begin && (t[end - 1] == ']' || t[end - 1] == ')' || t[end - 1] == '"' ||
                               t[end - 1] == '.' || t[end - 1] == ';'))
            --end;
        if (end > begin && (t[end - 1] == 's' || t[end - 1] == 'S')) --end;
        if (begin >= end) return;
        // Cycle starts are non-negative; a leading '-' is a list bullet,
        // not a sign.
        while (begin < end && t[begin] == '-') ++begin;
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(t.data() + begin, t.data() + end, value);
        if (ec == std::errc{} && ptr == t.data() + end && std::isfinite(value)) {
            out.push_back(value);
        }
    };

    for (char c : text) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            token.push_back(c);
        }
    }
    flush();

    if (out.empty()) {
        throw Error(ErrorKind::no_timestamps_found, "no timestamps in model output");
    }
    return out;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json parse_record(const std::string& line, const std::filesystem::path& path,
                          std::size_t line_no) {
    ordered_json record = ordered_json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object() || !record.contains("video_id")) {
        throw Error(ErrorKind::malformed_record,
                    path.string() + ":" + std::to_string(line_no) + ": not a video record");
    }
    return record;
}

}  // namespace

std::vector<CycleAnnotations> load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io_failure, "cannot open annotations file " + path.string());
    }
    std::vector<CycleAnnotations> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json record = parse_record(line, path, line_no);
        CycleAnnotations ann;
        ann.video_id = record["video_id"].get<std::string>();
        if (!record.contains("starts")) {
            throw Error(ErrorKind::malformed_record,
                        path.string() + ":" + std::to_string(line_no) + ": missing starts");
        }
        ann.starts = record["starts"].get<std::vector<double>>();
        for (std::size_t i = 1; i < ann.starts.size(); ++i) {
            if (ann.starts[i] <= ann.starts[i - 1]) {
                throw Error(ErrorKind::malformed_record,
                            path.string() + ":" + std::to_string(line_no) +
                                ": cycle starts must be strictly increasing");
            }
        }
        out.push_back(std::move(ann));
    }
    return out;
}

PredictionLoad load_predictions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io_failure, "cannot open predictions file " + path.string());
    }
    PredictionLoad load;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json record = parse_record(line, path, line_no);
        CyclePrediction pred;
        pred.video_id = record["video_id"].get<std::string>();
        if (record.contains("starts")) {
            pred.starts = record["starts"].get<std::vector<double>>();
        } else if (record.contains("text")) {
            try {
                pred.starts = parse_prediction_output(record["text"].get<std::string>());
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::no_timestamps_found) throw;
                load.warnings.push_back(pred.video_id + ": " + e.what() +
                                        " (scored as empty prediction)");
            }
        } else {
            throw Error(ErrorKind::malformed_record,
                        path.string() + ":" + std::to_string(line_no) +
                            ": prediction record needs starts or text");
        }
        load.predictions.push_back(std::move(pred));
    }
    return load;
}

}  // namespace codecstream

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "codecstream/attention.hpp"
#include "codecstream/config.hpp"
#include "codecstream/error.hpp"
#include "codecstream/jumpscore.hpp"
#include "codecstream/outputs.hpp"
#include "codecstream/packer.hpp"
#include "codecstream/plot.hpp"
#include "codecstream/synth.hpp"
#include "codecstream/trace_io.hpp"

namespace {

using namespace codecstream;

// Pipeline config options shared by tokenize / plot / inspect. A --config
// file provides the base; explicitly passed flags override it.
struct ConfigOptions {
    RunConfig values;
    std::string config_path;

    CLI::Option* opt_config = nullptr;
    CLI::Option* opt_bin_duration = nullptr;
    CLI::Option* opt_target_groups = nullptr;
    CLI::Option* opt_min_span = nullptr;
    CLI::Option* opt_max_span = nullptr;
    CLI::Option* opt_valley_window = nullptr;
    CLI::Option* opt_percentile = nullptr;
    CLI::Option* opt_prior_weight = nullptr;
    CLI::Option* opt_lambda = nullptr;
    CLI::Option* opt_alpha_peak = nullptr;
    CLI::Option* opt_canvas_blocks = nullptr;
    CLI::Option* opt_p_canvases = nullptr;
    CLI::Option* opt_patch_px = nullptr;
    CLI::Option* opt_seed = nullptr;

    void attach(CLI::App* cmd) {
        opt_config = cmd->add_option("--config", config_path,
                                     "JSON config file; explicit flags override its fields");
        opt_bin_duration = cmd->add_option("--bin-duration", values.partition.bin_duration_s,
                                           "Bit-cost bin duration in seconds");
        opt_target_groups = cmd->add_option("--target-groups", values.partition.target_groups,
                                            "Target number of temporal groups");
        opt_min_span =
            cmd->add_option("--min-span", values.partition.min_span_s, "Minimum group span (s)");
        opt_max_span =
            cmd->add_option("--max-span", values.partition.max_span_s, "Maximum group span (s)");
        opt_valley_window = cmd->add_option("--valley-window", values.partition.valley_window_bins,
                                            "Valley search half-width in bins");
        opt_percentile = cmd->add_option("--percentile", values.saliency.percentile,
                                         "Robust normalization percentile");
        opt_prior_weight = cmd->add_option("--bitcost-prior-weight",
                                           values.saliency.bitcost_prior_weight,
                                           "Weight of the block-level bit-cost prior");
        opt_lambda =
            cmd->add_option("--lambda", values.packing.lambda, "Same-frame attenuation strength");
        opt_alpha_peak = cmd->add_option("--alpha-peak", values.packing.alpha_peak,
                                         "Peak term weight in frame allocation mass");
        opt_canvas_blocks = cmd->add_option("--canvas-blocks", values.packing.canvas_blocks,
                                            "Canvas capacity in 2x2 blocks");
        opt_p_canvases = cmd->add_option("--p-canvases", values.packing.p_canvases_total,
                                         "Total P-canvas budget for the video");
        opt_patch_px = cmd->add_option("--patch-px", values.packing.patch_px, "Patch size p");
        opt_seed = cmd->add_option("--seed", values.seed, "Random seed (recorded in outputs)");
    }

    RunConfig resolve() const {
        RunConfig cfg = opt_config->count() ? load_run_config(config_path) : RunConfig{};
        if (opt_bin_duration->count()) cfg.partition.bin_duration_s = values.partition.bin_duration_s;
        if (opt_target_groups->count()) cfg.partition.target_groups = values.partition.target_groups;
        if (opt_min_span->count()) cfg.partition.min_span_s = values.partition.min_span_s;
        if (opt_max_span->count()) cfg.partition.max_span_s = values.partition.max_span_s;
        if (opt_valley_window->count())
            cfg.partition.valley_window_bins = values.partition.valley_window_bins;
        if (opt_percentile->count()) cfg.saliency.percentile = values.saliency.percentile;
        if (opt_prior_weight->count())
            cfg.saliency.bitcost_prior_weight = values.saliency.bitcost_prior_weight;
        if (opt_lambda->count()) cfg.packing.lambda = values.packing.lambda;
        if (opt_alpha_peak->count()) cfg.packing.alpha_peak = values.packing.alpha_peak;
        if (opt_canvas_blocks->count()) cfg.packing.canvas_blocks = values.packing.canvas_blocks;
        if (opt_p_canvases->count())
            cfg.packing.p_canvases_total = values.packing.p_canvases_total;
        if (opt_patch_px->count()) cfg.packing.patch_px = values.packing.patch_px;
        if (opt_seed->count()) cfg.seed = values.seed;
        cfg.check();
        return cfg;
    }
};

std::vector<SynthSegment> parse_segments(const std::vector<std::string>& specs) {
    std::vector<SynthSegment> segments;
    for (const std::string& spec : specs) {
        SynthSegment seg;
        char sep1 = 0;
        char sep2 = 0;
        std::istringstream in(spec);
        if (!(in >> seg.duration_s >> sep1 >> seg.motion_amplitude >> sep2 >>
              seg.bitcost_level) ||
            sep1 != ':' || sep2 != ':' || !(in >> std::ws).eof()) {
            throw Error(ErrorKind::invalid_spec,
                        "segment must be duration:amplitude:bytes_per_s, got '" + spec + "'");
        }
        segments.push_back(seg);
    }
    return segments;
}

int run_tokenize(const std::string& trace_path, const ConfigOptions& options,
                 const std::string& tokens_out, const std::string& manifest_out,
                 const std::string& mask_out, const std::string& render_dir) {
    const RunConfig cfg = options.resolve();
    const CodecTrace trace = load_trace(trace_path);
    const TokenizeResult result = tokenize(trace, cfg.tokenize_config());

    write_token_metadata(result, cfg, tokens_out);
    write_canvas_manifest(result, cfg, manifest_out);
    if (!mask_out.empty()) {
        write_mask_file(codec_groups(result.tokens), mask_out);
    }
    if (!render_dir.empty()) {
        render_canvases(result, trace, render_dir, cfg.packing.patch_px);
    }
    if (result.allocation.insufficient_budget) {
        std::cerr << "warning: P-canvas budget below group count; "
                     "highest-mass groups were served first\n";
    }
    std::cout << "canvases: " << result.canvases.size() << " (" << result.allocation.total()
              << " P), tokens: " << result.tokens.size()
              << ", groups: " << result.partition.group_count() << "\n";
    return 0;
}

int run_plot(const std::string& trace_path, const ConfigOptions& options,
             const std::string& image_out, const std::string& data_out) {
    const RunConfig cfg = options.resolve();
    const CodecTrace trace = load_trace(trace_path);

    const BinEnergies energies = bin_bitcost(trace, cfg.partition.bin_duration_s);
    const double quota = compute_quota(energies, cfg.partition.target_groups);
    const GopPartition partition = partition_gops(energies, cfg.partition, quota);

    const PlotData data = make_plot_data(energies, partition);
    write_plot_data(data, cfg, data_out);
    write_ppm(render_plot(data), image_out);
    std::cout << "bins: " << data.bins.size() << ", groups: " << data.boundaries.size()
              << ", theta: " << data.theta << "\n";
    return 0;
}

int run_inspect(const std::string& trace_path, const ConfigOptions& options, int frame_index,
                const std::string& out_dir) {
    const RunConfig cfg = options.resolve();
    const CodecTrace trace = load_trace(trace_path);
    if (frame_index < 0 || frame_index >= static_cast<int>(trace.frames.size())) {
        throw Error(ErrorKind::out_of_range, "frame index outside the trace");
    }
    const FrameTrace& frame = trace.frames[static_cast<std::size_t>(frame_index)];
    if (!is_predicted(frame.packet.frame_type)) {
        throw Error(ErrorKind::invalid_spec, "I-frames carry no saliency; pick a P/B frame");
    }
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    PixelMap motion = frame.mv ? densify_motion(*frame.mv, trace.width, trace.height)
                               : PixelMap::zeros(trace.width, trace.height);
    motion = normalize_percentile(motion, cfg.saliency.percentile);
    PixelMap residual = frame.residual
                            ? residual_response(*frame.residual, cfg.saliency.percentile)
                            : PixelMap::zeros(trace.width, trace.height);
    const PixelMap saliency = saliency_map(motion, residual);

    // S lives in [0, 2]; 127.5 maps it onto the 8-bit range.
    std::vector<std::uint8_t> gray(saliency.values.size());
    for (std::size_t i = 0; i < gray.size(); ++i) {
        gray[i] = static_cast<std::uint8_t>(
            std::clamp(saliency.values[i] * 127.5, 0.0, 255.0));
    }
    write_pgm(saliency.width, saliency.height, gray,
              dir / ("saliency_" + std::to_string(frame_index) + ".pgm"));

    const BlockScoreGrid grid =
        frame_block_scores(frame, trace.width, trace.height, cfg.saliency, cfg.packing.patch_px);
    double peak = 0.0;
    for (double s : grid.scores) peak = std::max(peak, s);
    std::vector<std::uint8_t> block_gray(grid.scores.size(), 0);
    if (peak > 0.0) {
        for (std::size_t i = 0; i < grid.scores.size(); ++i) {
            block_gray[i] = static_cast<std::uint8_t>(
                std::clamp(grid.scores[i] / peak * 255.0, 0.0, 255.0));
        }
    }
    write_pgm(grid.blocks_j, grid.blocks_i, block_gray,
              dir / ("blocks_" + std::to_string(frame_index) + ".pgm"));
    std::cout << "wrote saliency and block-score dumps for frame " << frame_index << "\n";
    return 0;
}

int run_eval(const std::string& annotations_path, const std::string& predictions_path,
             std::vector<double> deltas, bool use_f1, int jobs, const std::string& report_out) {
    const auto dataset = load_annotations(annotations_path);
    const PredictionLoad loaded = load_predictions(predictions_path);
    for (const std::string& warning : loaded.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    const ApMode mode = use_f1 ? ApMode::f1 : ApMode::precision_recall;
    const EvalReport report = jumpscore_map(dataset, loaded.predictions, deltas, mode, jobs);

    std::cout << std::left << std::setw(28) << "video";
    for (double d : report.deltas) {
        std::ostringstream head;
        head << "AP@" << d;
        std::cout << std::setw(10) << head.str();
    }
    std::cout << std::setw(10) << "mean" << "\n";
    for (const VideoScore& video : report.videos) {
        std::cout << std::left << std::setw(28)
                  << (video.video_id + (video.missing_prediction ? " (missing)" : ""));
        std::cout << std::fixed << std::setprecision(4);
        for (double ap : video.ap_per_delta) std::cout << std::setw(10) << ap;
        std::cout << std::setw(10) << video.mean_ap << "\n";
        std::cout.unsetf(std::ios::fixed);
        std::cout << std::setprecision(6);
    }
    std::cout << "mAP: " << report.map << "\n";

    if (!report_out.empty()) {
        std::ofstream out(report_out, std::ios::binary);
        if (!out) {
            throw Error(ErrorKind::io_failure, "cannot write report " + report_out);
        }
        nlohmann::ordered_json header;
        header["format_version"] = 1;
        header["kind"] = "jumpscore_report";
        header["deltas"] = report.deltas;
        header["mode"] = use_f1 ? "f1" : "precision_recall";
        header["map"] = report.map;
        out << header.dump() << "\n";
        for (const VideoScore& video : report.videos) {
            nlohmann::ordered_json record;
            record["video_id"] = video.video_id;
            record["ap"] = video.ap_per_delta;
            record["mean_ap"] = video.mean_ap;
            record["missing_prediction"] = video.missing_prediction;
            out << record.dump() << "\n";
        }
    }
    return 0;
}

int run_budget(std::int64_t frames, int width, int height, int patch_px, int merge,
               int canvas_blocks) {
    std::cout << format_budget(compute_budget(frames, width, height, patch_px, merge,
                                              canvas_blocks));
    return 0;
}

int run_synth(const std::vector<std::string>& segment_specs, double fps, int width, int height,
              std::uint64_t seed, bool metadata_only, const std::string& out_path) {
    SynthSpec spec;
    spec.segments = parse_segments(segment_specs);
    spec.fps = fps;
    spec.width = width;
    spec.height = height;
    spec.seed = seed;
    spec.emit_payload = !metadata_only;
    const CodecTrace trace = synthesize_trace(spec);
    save_trace(trace, out_path);
    std::cout << "wrote " << trace.frames.size() << " frames to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"codecstream: codec-trace tokenization and evaluation toolkit"};
    app.require_subcommand(1);

    // tokenize
    auto* tokenize_cmd =
        app.add_subcommand("tokenize", "Pack a trace into I/P canvases and token metadata");
    std::string trace_path, tokens_out = "tokens.jsonl", manifest_out = "canvases.jsonl";
    std::string mask_out, render_dir;
    tokenize_cmd->add_option("--trace", trace_path, "Input trace file")->required();
    tokenize_cmd->add_option("--tokens-out", tokens_out, "Token metadata output");
    tokenize_cmd->add_option("--manifest-out", manifest_out, "Canvas manifest output");
    tokenize_cmd->add_option("--mask-out", mask_out, "Optional packed dense attention mask");
    tokenize_cmd->add_option("--render-dir", render_dir, "Optional canvas rendering directory");
    ConfigOptions tokenize_cfg;
    tokenize_cfg.attach(tokenize_cmd);

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "Bit-cost / grouping figure and plot data");
    std::string plot_trace, image_out = "plot.ppm", data_out = "plot.json";
    plot_cmd->add_option("--trace", plot_trace, "Input trace file")->required();
    plot_cmd->add_option("--image-out", image_out, "Raster output (PPM)");
    plot_cmd->add_option("--data-out", data_out, "Machine-readable plot data (JSON)");
    ConfigOptions plot_cfg;
    plot_cfg.attach(plot_cmd);

    // inspect
    auto* inspect_cmd =
        app.add_subcommand("inspect", "Dump one frame's saliency and block scores as PGM");
    std::string inspect_trace, inspect_dir = "inspect";
    int inspect_frame = 0;
    inspect_cmd->add_option("--trace", inspect_trace, "Input trace file")->required();
    inspect_cmd->add_option("--frame", inspect_frame, "Frame index")->required();
    inspect_cmd->add_option("--out-dir", inspect_dir, "Output directory");
    ConfigOptions inspect_cfg;
    inspect_cfg.attach(inspect_cmd);

    // budget
    auto* budget_cmd =
        app.add_subcommand("budget", "Token accounting: uniform sampling vs canvases");
    std::int64_t budget_frames = 1;
    int budget_width = 392, budget_height = 392, budget_patch = 14, budget_merge = 2;
    int budget_canvas_blocks = 196;
    budget_cmd->add_option("--frames", budget_frames, "Sampled frame count");
    budget_cmd->add_option("--width", budget_width, "Frame width (px)");
    budget_cmd->add_option("--height", budget_height, "Frame height (px)");
    budget_cmd->add_option("--patch-size", budget_patch, "ViT patch size");
    budget_cmd->add_option("--merge", budget_merge, "Token merge factor");
    budget_cmd->add_option("--canvas-blocks", budget_canvas_blocks,
                           "Canvas capacity in 2x2 blocks");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "JumpScore temporal-localization report");
    std::string annotations_path, predictions_path, report_out;
    std::vector<double> deltas = {0.1, 0.2, 0.3};
    bool use_f1 = false;
    int jobs = 1;
    eval_cmd->add_option("--annotations", annotations_path, "Ground-truth file")->required();
    eval_cmd->add_option("--predictions", predictions_path, "Predictions file")->required();
    eval_cmd->add_option("--delta", deltas, "Tolerance levels in seconds");
    eval_cmd->add_flag("--f1", use_f1, "Aggregate with F1 instead of precision*recall");
    eval_cmd->add_option("--jobs", jobs, "Parallel per-video evaluation");
    eval_cmd->add_option("--out", report_out, "Machine-readable report output");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a deterministic synthetic trace");
    std::vector<std::string> segment_specs;
    double synth_fps = 30.0;
    int synth_width = 64, synth_height = 64;
    std::uint64_t synth_seed = 0;
    bool metadata_only = false;
    std::string synth_out = "trace.jsonl";
    synth_cmd->add_option("--segment", segment_specs, "duration:amplitude:bytes_per_s")
        ->required();
    synth_cmd->add_option("--fps", synth_fps, "Frames per second");
    synth_cmd->add_option("--width", synth_width, "Frame width");
    synth_cmd->add_option("--height", synth_height, "Frame height");
    synth_cmd->add_option("--seed", synth_seed, "Generator seed");
    synth_cmd->add_flag("--metadata-only", metadata_only, "Skip mv/residual payloads");
    synth_cmd->add_option("--out", synth_out, "Output trace path");

    try {
        app.parse(argc, argv);
        if (tokenize_cmd->parsed()) {
            return run_tokenize(trace_path, tokenize_cfg, tokens_out, manifest_out, mask_out,
                                render_dir);
        }
        if (plot_cmd->parsed()) {
            return run_plot(plot_trace, plot_cfg, image_out, data_out);
        }
        if (inspect_cmd->parsed()) {
            return run_inspect(inspect_trace, inspect_cfg, inspect_frame, inspect_dir);
        }
        if (budget_cmd->parsed()) {
            return run_budget(budget_frames, budget_width, budget_height, budget_patch,
                              budget_merge, budget_canvas_blocks);
        }
        if (eval_cmd->parsed()) {
            return run_eval(annotations_path, predictions_path, deltas, use_f1, jobs, report_out);
        }
        if (synth_cmd->parsed()) {
            return run_synth(segment_specs, synth_fps, synth_width, synth_height, synth_seed,
                             metadata_only, synth_out);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

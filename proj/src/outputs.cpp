#include "codecstream/outputs.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "codecstream/error.hpp"
#include "codecstream/plot.hpp"

namespace codecstream {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json partition_json(const TokenizeResult& result) {
    ordered_json j;
    j["quota"] = result.partition.quota;
    ordered_json groups = ordered_json::array();
    for (const GopGroup& g : result.partition.groups) {
        groups.push_back({{"s", g.start_bin}, {"c", g.end_bin}});
    }
    j["groups"] = std::move(groups);
    j["bin_duration_s"] = result.energies.bin_duration_s;
    return j;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io_failure, "cannot write " + path.string());
    }
    return out;
}

}  // namespace

void write_token_metadata(const TokenizeResult& result, const RunConfig& cfg,
                          const std::filesystem::path& path) {
    std::ofstream out = open_out(path);

    ordered_json header;
    header["format_version"] = 1;
    header["kind"] = "token_metadata";
    header["config"] = to_json(cfg);
    header["partition"] = partition_json(result);
    header["token_count"] = result.tokens.size();
    out << header.dump() << "\n";

    for (const TokenRecord& token : result.tokens) {
        ordered_json record;
        record["iota"] = token.canvas_index;
        record["f"] = token.source_frame;
        record["p_can"] = {token.canvas_row, token.canvas_col};
        record["p_src"] = {token.source_row, token.source_col};
        record["kappa"] = token.group;
        record["group"] = token.group;
        out << record.dump() << "\n";
    }
}

void write_canvas_manifest(const TokenizeResult& result, const RunConfig& cfg,
                           const std::filesystem::path& path) {
    std::ofstream out = open_out(path);

    ordered_json header;
    header["format_version"] = 1;
    header["kind"] = "canvas_manifest";
    header["config"] = to_json(cfg);
    header["partition"] = partition_json(result);
    header["canvas_count"] = result.canvases.size();
    header["p_canvases_per_group"] = result.allocation.per_group;
    header["insufficient_budget"] = result.allocation.insufficient_budget;
    out << header.dump() << "\n";

    for (const Canvas& canvas : result.canvases) {
        std::set<int> sources;
        for (const CanvasCell& cell : canvas.cells) sources.insert(cell.frame);
        ordered_json record;
        record["index"] = canvas.index;
        record["label"] = to_string(canvas.label);
        record["grid"] = {canvas.grid_rows, canvas.grid_cols};
        record["cells"] = canvas.cells.size();
        record["source_frames"] = std::vector<int>(sources.begin(), sources.end());
        out << record.dump() << "\n";
    }
}

void render_canvases(const TokenizeResult& result, const CodecTrace& trace,
                     const std::filesystem::path& dir, int patch_px) {
    std::filesystem::create_directories(dir);
    const int block_px = 2 * patch_px;  // blocks render at their source footprint

    for (const Canvas& canvas : result.canvases) {
        const int w = canvas.grid_cols * block_px;
        const int h = canvas.grid_rows * block_px;
        std::vector<std::uint8_t> gray(static_cast<std::size_t>(w) * h, 0);

        for (std::size_t n = 0; n < canvas.cells.size(); ++n) {
            const CanvasCell& cell = canvas.cells[n];
            const int cy = static_cast<int>(n) / canvas.grid_cols * block_px;
            const int cx = static_cast<int>(n) % canvas.grid_cols * block_px;
            const FrameTrace& frame = trace.frames[static_cast<std::size_t>(cell.frame)];

            for (int y = 0; y < block_px; ++y) {
                for (int x = 0; x < block_px; ++x) {
                    std::uint8_t v;
                    const int sy = cell.block_i * block_px + y;
                    const int sx = cell.block_j * block_px + x;
                    if (frame.residual && sy < frame.residual->height &&
                        sx < frame.residual->width) {
                        v = frame.residual->luma[static_cast<std::size_t>(sy) *
                                                     frame.residual->width +
                                                 sx];
                    } else {
                        // No pixel payload: shade by source-frame position.
                        v = static_cast<std::uint8_t>(
                            40 + (200 * (cell.frame + 1)) /
                                     static_cast<int>(trace.frames.size() + 1));
                    }
                    gray[static_cast<std::size_t>(cy + y) * w + (cx + x)] = v;
                }
            }
        }

        std::ostringstream name;
        name << "canvas_" << canvas.index << "_" << to_string(canvas.label) << ".pgm";
        write_pgm(w, h, gray, dir / name.str());
    }
}

BudgetReport compute_budget(std::int64_t frames, int width, int height, int patch_px, int merge,
                            int canvas_blocks) {
    if (width <= 0 || height <= 0 || patch_px <= 0 || merge <= 0 || canvas_blocks <= 0) {
        throw Error(ErrorKind::invalid_config, "budget dimensions must be positive");
    }
    if (frames < 0) {
        throw Error(ErrorKind::invalid_config, "frame count must be >= 0");
    }
    BudgetReport report;
    report.frames = frames;
    report.width = width;
    report.height = height;
    report.patch_px = patch_px;
    report.merge = merge;
    report.patches_per_frame = static_cast<std::int64_t>((height + patch_px - 1) / patch_px) *
                               static_cast<std::int64_t>((width + patch_px - 1) / patch_px);
    report.uniform_tokens_per_frame =
        static_cast<double>(report.patches_per_frame) / (merge * merge);
    report.uniform_tokens_total = static_cast<double>(frames) * report.uniform_tokens_per_frame;
    // One canvas block is a 2x2 patch unit, i.e. one merged token.
    report.canvas_capacity_tokens = canvas_blocks;
    report.matched_canvases =
        report.uniform_tokens_total / static_cast<double>(report.canvas_capacity_tokens);
    return report;
}

std::string format_budget(const BudgetReport& report) {
    std::ostringstream out;
    out << "frames:                   " << report.frames << "\n"
        << "resolution:               " << report.width << "x" << report.height << "\n"
        << "patch size:               " << report.patch_px << "\n"
        << "merge factor:             " << report.merge << "\n"
        << "patches per frame:        " << report.patches_per_frame << "\n"
        << "uniform tokens per frame: " << report.uniform_tokens_per_frame << "\n"
        << "uniform tokens total:     " << report.uniform_tokens_total << "\n"
        << "canvas capacity (tokens): " << report.canvas_capacity_tokens << "\n"
        << "matched canvas count:     " << report.matched_canvases << "\n";
    return out.str();
}

}  // namespace codecstream

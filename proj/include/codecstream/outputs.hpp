#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "codecstream/config.hpp"
#include "codecstream/packer.hpp"
#include "codecstream/trace.hpp"

namespace codecstream {

// Token-metadata file: a header record embedding the run config, format
// version, and partition, followed by one record per token
// {iota, f, p_can, p_src, kappa, group}. Byte-identical across reruns.
void write_token_metadata(const TokenizeResult& result, const RunConfig& cfg,
                          const std::filesystem::path& path);

// Canvas manifest: header record, then one record per canvas
// {index, label, grid, cells, source_frames}.
void write_canvas_manifest(const TokenizeResult& result, const RunConfig& cfg,
                           const std::filesystem::path& path);

// Schematic canvas renderings: each placed block drawn from the source
// frame's residual plane when present, otherwise shaded by source-frame
// position. One PGM per canvas under dir.
void render_canvases(const TokenizeResult& result, const CodecTrace& trace,
                     const std::filesystem::path& dir, int patch_px = 16);

// Token accounting for budget-matched comparisons between uniform frame
// sampling and the canvas pipeline.
struct BudgetReport {
    std::int64_t frames = 0;
    int width = 0;
    int height = 0;
    int patch_px = 0;
    int merge = 0;
    std::int64_t patches_per_frame = 0;       // ceil(H/p) * ceil(W/p)
    double uniform_tokens_per_frame = 0.0;    // patches / merge^2
    double uniform_tokens_total = 0.0;
    int canvas_capacity_tokens = 0;           // merged tokens per canvas
    double matched_canvases = 0.0;            // uniform total / canvas capacity
};

BudgetReport compute_budget(std::int64_t frames, int width, int height, int patch_px, int merge,
                            int canvas_blocks);

std::string format_budget(const BudgetReport& report);

}  // namespace codecstream

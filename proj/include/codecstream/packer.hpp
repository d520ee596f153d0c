#pragma once

#include <cstdint>
#include <map>
#include <unordered_set>
#include <vector>

#include "codecstream/gop.hpp"
#include "codecstream/saliency.hpp"
#include "codecstream/trace.hpp"

namespace codecstream {

// A scored 2x2-patch block inside one temporal group; the selection unit.
struct BlockCandidate {
    int frame = 0;
    int block_i = 0;  // block row in the frame grid
    int block_j = 0;  // block column
    double score = 0.0;
};

struct PackingConfig {
    double lambda = 1.0;       // same-frame attenuation strength
    double alpha_peak = 0.5;   // weight of the strongest per-frame response
    int canvas_blocks = 196;   // capacity per canvas, in 2x2 blocks (14x14 grid)
    int p_canvases_total = 16; // P-canvas budget across the whole video
    int patch_px = 16;

    int canvas_grid_cols() const;
    int canvas_grid_rows() const;
    void check() const;  // throws InvalidConfig
};

enum class CanvasLabel { I, P };

const char* to_string(CanvasLabel label);

// One placed block: which source block fills a canvas slot.
struct CanvasCell {
    int frame = 0;
    int block_i = 0;
    int block_j = 0;
};

// A packed visual input page. I-canvases carry one frame's blocks densely;
// P-canvases carry selected motion-residual evidence. Cells are stored in
// fill order (row-major over the canvas grid).
struct Canvas {
    int index = 0;
    CanvasLabel label = CanvasLabel::P;
    int grid_rows = 0;
    int grid_cols = 0;
    std::vector<CanvasCell> cells;
};

// Per-token metadata; four records per placed block, 2x2-contiguous in both
// canvas and source patch coordinates.
struct TokenRecord {
    int canvas_index = 0;
    int source_frame = 0;
    int canvas_row = 0;
    int canvas_col = 0;
    int source_row = 0;
    int source_col = 0;
    int group = 0;
};

// --- stratified temporal allocation -----------------------------------

// Attenuated scores A / sqrt(1 + lambda * rank), rank being the zero-based
// per-frame position when that frame's candidates are sorted by score
// descending (ties by block coordinates). Returned aligned with the input.
std::vector<double> attenuate(const std::vector<BlockCandidate>& candidates, double lambda);

// Frame-level allocation mass: sum of clamped attenuated scores plus
// alpha_peak times the strongest one. Keyed by frame index.
std::map<int, double> frame_weights(const std::vector<BlockCandidate>& candidates,
                                    const std::vector<double>& attenuated, double alpha_peak);

// Cumulative allocation curve over weights in time order; uniform
// (l+1)/M fallback when the total mass is zero.
std::vector<double> allocation_curve(const std::vector<double>& weights_in_time_order);

// P-canvas budget split across groups, proportional to each group's P/B
// bit-cost mass with a floor of one canvas per group. When the budget
// cannot cover every group, the highest-mass groups win and
// insufficient_budget is set.
struct CanvasAllocation {
    std::vector<int> per_group;
    bool insufficient_budget = false;

    int total() const;
};

CanvasAllocation allocate_canvases(const GopPartition& partition, const BinEnergies& energies,
                                   int p_canvases_total);

// --- per-group packing --------------------------------------------------

// Stateful selector for one group's P-canvases: owns the attenuated
// candidate pool, the allocation curve, and the no-duplicate set shared by
// every canvas of the group.
class GroupPacker {
public:
    GroupPacker(std::vector<BlockCandidate> candidates, const PackingConfig& cfg);

    // Marks a block as already carried (by the group's I-canvas) so P
    // selection never duplicates it.
    void reserve_block(int frame, int block_i, int block_j);

    // Cells for the r-th of m P-canvases: high-score non-duplicate blocks
    // from the frames whose cumulative allocation mass falls in
    // [r/m, (r+1)/m), widening symmetrically one frame at a time and
    // finally to the full group when the stratum runs short. Returns fewer
    // than capacity cells only when the whole group is exhausted.
    std::vector<CanvasCell> pack_p_canvas(int r, int m);

    const std::vector<int>& frames_in_time_order() const { return frames_; }
    const std::vector<double>& curve() const { return curve_; }

private:
    bool is_used(int frame, int block_i, int block_j) const;
    void mark_used(int frame, int block_i, int block_j);

    std::vector<BlockCandidate> candidates_;
    std::vector<double> attenuated_;
    std::vector<int> frames_;                       // ascending frame index
    std::map<int, int> frame_pos_;                  // frame index -> position
    std::vector<std::vector<std::size_t>> by_frame_;  // candidate ids, score desc
    std::vector<double> curve_;
    std::unordered_set<std::uint64_t> used_;
    PackingConfig cfg_;
};

// Dense block pages for a group's anchor frame, chunked at canvas capacity
// (multi-page when the frame exceeds one canvas).
std::vector<std::vector<CanvasCell>> i_canvas_pages(int anchor_frame, int frame_width,
                                                    int frame_height, const PackingConfig& cfg);

// Expands a canvas into its token records (four per cell).
std::vector<TokenRecord> emit_tokens(const Canvas& canvas, int group);

// --- full pipeline --------------------------------------------------------

struct TokenizeConfig {
    PartitionConfig partition;
    SaliencyConfig saliency;
    PackingConfig packing;
};

struct TokenizeResult {
    BinEnergies energies;
    GopPartition partition;
    CanvasAllocation allocation;
    std::vector<Canvas> canvases;
    std::vector<TokenRecord> tokens;
};

// bin -> quota -> partition -> per-group scoring -> stratified packing.
// Deterministic: identical (trace, config) give identical results. Canvas
// indices are dense from 0, I-canvases first within each group, groups in
// temporal order.
TokenizeResult tokenize(const CodecTrace& trace, const TokenizeConfig& cfg);

}  // namespace codecstream

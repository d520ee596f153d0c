#pragma once

#include <cstdint>
#include <vector>

#include "codecstream/trace.hpp"

namespace codecstream {

// Dense per-pixel map, row-major. Used for motion magnitude, residual
// response, and the combined saliency S = M + R (each term in [0,1]).
struct PixelMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    static PixelMap zeros(int width, int height);
    double at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

// Scores over 2x2-patch blocks (block pixel size 2p). blocks_i rows,
// blocks_j columns; scores row-major.
struct BlockScoreGrid {
    int blocks_i = 0;
    int blocks_j = 0;
    std::vector<double> scores;

    static BlockScoreGrid zeros(int blocks_i, int blocks_j);
    double at(int i, int j) const {
        return scores[static_cast<std::size_t>(i) * blocks_j + j];
    }
    double& at(int i, int j) { return scores[static_cast<std::size_t>(i) * blocks_j + j]; }
};

struct SaliencyConfig {
    double percentile = 95.0;          // robust normalization anchor, in (0, 100]
    double bitcost_prior_weight = 0.0;  // 0 disables the block-level prior

    void check() const;  // throws InvalidConfig
};

// Percentile of the values (linear interpolation between closest ranks);
// empty input yields 0.
double percentile_value(const std::vector<double>& values, double percentile);

// Constant-fill densification: every pixel inside a motion block gets that
// block's vector magnitude; pixels beyond the mv grid get 0.
PixelMap densify_motion(const MotionVectorField& mv, int width, int height);

// clip(v / q, 0, 1) with q the given percentile of the map; all-zero output
// when q <= 0 so zero-signal frames stay zero.
PixelMap normalize_percentile(const PixelMap& map, double percentile);

// |luma - 128| followed by percentile normalization.
PixelMap residual_response(const ResidualPlane& residual, double percentile);

// Pointwise sum of the normalized motion and residual maps.
PixelMap saliency_map(const PixelMap& motion, const PixelMap& residual);

// Sums saliency over each 2x2-patch block (a (2p)x(2p) pixel footprint,
// i.e. the four neighboring pxp patches). Frames whose dimensions are not
// multiples of 2p are implicitly zero-padded bottom/right.
BlockScoreGrid block_scores(const PixelMap& saliency, int patch_px = 16);

// A' = A + weight * percentile-normalized bit-cost grid. Weight 0 is the
// identity. Grids must agree in shape.
BlockScoreGrid fuse_bitcost_prior(const BlockScoreGrid& scores,
                                  const BlockScoreGrid& bitcost_per_block, double weight,
                                  double percentile = 95.0);

// Packet bytes spread uniformly over the frame's block grid; the fallback
// prior when the trace carries no sub-frame bit allocation.
BlockScoreGrid uniform_block_bitcost(std::int64_t byte_size, int blocks_i, int blocks_j);

// Full per-frame scoring path for a predicted frame: densify + normalize
// motion, residual response, sum, block aggregation, optional bit-cost
// prior. Frames with neither mv nor residual skip the pixel stage and
// yield the same all-zero saliency block grid it would produce.
BlockScoreGrid frame_block_scores(const FrameTrace& frame, int frame_width, int frame_height,
                                  const SaliencyConfig& cfg, int patch_px = 16);

}  // namespace codecstream

#include "codecstream/saliency.hpp"

#include <algorithm>
#include <cmath>

#include "codecstream/error.hpp"

namespace codecstream {

PixelMap PixelMap::zeros(int width, int height) {
    PixelMap map;
    map.width = width;
    map.height = height;
    map.values.assign(static_cast<std::size_t>(width) * height, 0.0);
    return map;
}

BlockScoreGrid BlockScoreGrid::zeros(int blocks_i, int blocks_j) {
    BlockScoreGrid grid;
    grid.blocks_i = blocks_i;
    grid.blocks_j = blocks_j;
    grid.scores.assign(static_cast<std::size_t>(blocks_i) * blocks_j, 0.0);
    return grid;
}

void SaliencyConfig::check() const {
    if (percentile <= 0.0 || percentile > 100.0) {
        throw Error(ErrorKind::invalid_config, "percentile must be in (0, 100]");
    }
    if (bitcost_prior_weight < 0.0) {
        throw Error(ErrorKind::invalid_config, "bitcost_prior_weight must be >= 0");
    }
}

double percentile_value(const std::vector<double>& values, double percentile) {
    if (values.empty()) return 0.0;
    const std::size_t n = values.size();
    const double rank = percentile / 100.0 * static_cast<double>(n - 1);
    const std::size_t k = static_cast<std::size_t>(rank);
    const double frac = rank - static_cast<double>(k);

    // nth_element instead of a full sort; this runs per frame on full
    // 1280x720 planes.
    std::vector<double> scratch = values;
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k),
                     scratch.end());
    const double lower = scratch[k];
    if (frac == 0.0 || k + 1 >= n) return lower;
    const double upper =
        *std::min_element(scratch.begin() + static_cast<std::ptrdiff_t>(k) + 1, scratch.end());
    return lower + frac * (upper - lower);
}

PixelMap densify_motion(const MotionVectorField& mv, int width, int height) {
    PixelMap map = PixelMap::zeros(width, height);
    if (mv.block_size_px < 1) {
        throw Error(ErrorKind::invalid_config, "mv block size must be >= 1");
    }
    for (int by = 0; by < mv.block_h; ++by) {
        const int y0 = by * mv.block_size_px;
        if (y0 >= height) break;
        const int y1 = std::min(height, y0 + mv.block_size_px);
        for (int bx = 0; bx < mv.block_w; ++bx) {
            const int x0 = bx * mv.block_size_px;
            if (x0 >= width) break;
            const int x1 = std::min(width, x0 + mv.block_size_px);
            const MotionVector& v =
                mv.vectors[static_cast<std::size_t>(by) * mv.block_w + bx];
            const double magnitude = std::hypot(v.dx, v.dy);
            for (int y = y0; y < y1; ++y) {
                double* row = &map.values[static_cast<std::size_t>(y) * width];
                std::fill(row + x0, row + x1, magnitude);
            }
        }
    }
    return map;
}

PixelMap normalize_percentile(const PixelMap& map, double percentile) {
    if (map.values.empty()) {
        throw Error(ErrorKind::dimension_mismatch, "cannot normalize an empty map");
    }
    PixelMap out = map;
    const double q = percentile_value(map.values, percentile);
    if (q <= 0.0) {
        std::fill(out.values.begin(), out.values.end(), 0.0);
        return out;
    }
    for (double& v : out.values) {
        v = std::clamp(v / q, 0.0, 1.0);
    }
    return out;
}

PixelMap residual_response(const ResidualPlane& residual, double percentile) {
    PixelMap deviation = PixelMap::zeros(residual.width, residual.height);
    for (std::size_t i = 0; i < residual.luma.size(); ++i) {
        deviation.values[i] = std::abs(static_cast<int>(residual.luma[i]) - 128);
    }
    return normalize_percentile(deviation, percentile);
}

PixelMap saliency_map(const PixelMap& motion, const PixelMap& residual) {
    if (motion.width != residual.width || motion.height != residual.height) {
        throw Error(ErrorKind::dimension_mismatch, "saliency component maps disagree in shape");
    }
    PixelMap out = motion;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] += residual.values[i];
    }
    return out;
}

BlockScoreGrid block_scores(const PixelMap& saliency, int patch_px) {
    const int block_px = 2 * patch_px;
    const int blocks_i = (saliency.height + block_px - 1) / block_px;
    const int blocks_j = (saliency.width + block_px - 1) / block_px;
    BlockScoreGrid grid = BlockScoreGrid::zeros(blocks_i, blocks_j);

    // Padded pixels carry saliency 0, so summing within bounds suffices.
    for (int y = 0; y < saliency.height; ++y) {
        const int bi = y / block_px;
        const double* row = &saliency.values[static_cast<std::size_t>(y) * saliency.width];
        for (int x = 0; x < saliency.width; ++x) {
            grid.at(bi, x / block_px) += row[x];
        }
    }
    return grid;
}

BlockScoreGrid fuse_bitcost_prior(const BlockScoreGrid& scores,
                                  const BlockScoreGrid& bitcost_per_block, double weight,
                                  double percentile) {
    if (scores.blocks_i != bitcost_per_block.blocks_i ||
        scores.blocks_j != bitcost_per_block.blocks_j) {
        throw Error(ErrorKind::dimension_mismatch, "bit-cost grid does not match score grid");
    }
    if (weight == 0.0) return scores;

    BlockScoreGrid out = scores;
    const double q = percentile_value(bitcost_per_block.scores, percentile);
    if (q <= 0.0) return out;
    for (std::size_t i = 0; i < out.scores.size(); ++i) {
        out.scores[i] += weight * std::clamp(bitcost_per_block.scores[i] / q, 0.0, 1.0);
    }
    return out;
}

BlockScoreGrid uniform_block_bitcost(std::int64_t byte_size, int blocks_i, int blocks_j) {
    BlockScoreGrid grid = BlockScoreGrid::zeros(blocks_i, blocks_j);
    const double n = static_cast<double>(blocks_i) * static_cast<double>(blocks_j);
    if (n > 0.0) {
        std::fill(grid.scores.begin(), grid.scores.end(),
                  static_cast<double>(byte_size) / n);
    }
    return grid;
}

BlockScoreGrid frame_block_scores(const FrameTrace& frame, int frame_width, int frame_height,
                                  const SaliencyConfig& cfg, int patch_px) {
    cfg.check();
    const int block_px = 2 * patch_px;
    const int blocks_i = (frame_height + block_px - 1) / block_px;
    const int blocks_j = (frame_width + block_px - 1) / block_px;

    BlockScoreGrid grid;
    if (!frame.mv && !frame.residual) {
        // Metadata-only frame: S would be identically zero, skip the pixel
        // stage entirely.
        grid = BlockScoreGrid::zeros(blocks_i, blocks_j);
    } else {
        PixelMap motion = frame.mv ? densify_motion(*frame.mv, frame_width, frame_height)
                                   : PixelMap::zeros(frame_width, frame_height);
        PixelMap motion_norm = normalize_percentile(motion, cfg.percentile);
        PixelMap residual_norm =
            frame.residual ? residual_response(*frame.residual, cfg.percentile)
                           : PixelMap::zeros(frame_width, frame_height);
        grid = block_scores(saliency_map(motion_norm, residual_norm), patch_px);
    }

    if (cfg.bitcost_prior_weight > 0.0) {
        grid = fuse_bitcost_prior(
            grid, uniform_block_bitcost(frame.packet.byte_size, blocks_i, blocks_j),
            cfg.bitcost_prior_weight, cfg.percentile);
    }
    return grid;
}

}  // namespace codecstream

#include <doctest.h>

#include <cmath>
#include <random>

#include "codecstream/error.hpp"
#include "codecstream/saliency.hpp"

using namespace codecstream;

namespace {

PixelMap map_from(int width, int height, std::vector<double> values) {
    PixelMap map;
    map.width = width;
    map.height = height;
    map.values = std::move(values);
    return map;
}

MotionVectorField mv_grid(int block_w, int block_h, int block_px,
                          std::vector<MotionVector> vectors) {
    MotionVectorField mv;
    mv.block_w = block_w;
    mv.block_h = block_h;
    mv.block_size_px = block_px;
    mv.vectors = std::move(vectors);
    return mv;
}

// Naive double-loop block-sum oracle, independent of the strided
// implementation.
BlockScoreGrid block_scores_oracle(const PixelMap& map, int patch_px) {
    const int block_px = 2 * patch_px;
    const int blocks_i = (map.height + block_px - 1) / block_px;
    const int blocks_j = (map.width + block_px - 1) / block_px;
    BlockScoreGrid grid = BlockScoreGrid::zeros(blocks_i, blocks_j);
    for (int i = 0; i < blocks_i; ++i) {
        for (int j = 0; j < blocks_j; ++j) {
            double sum = 0.0;
            for (int y = i * block_px; y < (i + 1) * block_px; ++y) {
                for (int x = j * block_px; x < (j + 1) * block_px; ++x) {
                    if (y < map.height && x < map.width) sum += map.at(x, y);
                }
            }
            grid.at(i, j) = sum;
        }
    }
    return grid;
}

}  // namespace

TEST_CASE("densify_motion: zero vectors give a zero map") {
    const auto mv = mv_grid(2, 2, 16, std::vector<MotionVector>(4, {0.0, 0.0}));
    const PixelMap map = densify_motion(mv, 32, 32);
    for (double v : map.values) CHECK(v == 0.0);
}

TEST_CASE("densify_motion: single block fills its footprint with the magnitude") {
    const auto mv = mv_grid(1, 1, 16, {{3.0, 4.0}});
    const PixelMap map = densify_motion(mv, 16, 16);
    for (double v : map.values) CHECK(v == 5.0);
}

TEST_CASE("densify_motion: per-block fill on a 2-block grid") {
    const auto mv = mv_grid(2, 1, 16, {{3.0, 4.0}, {0.0, 0.0}});
    const PixelMap map = densify_motion(mv, 32, 16);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 32; ++x) {
            CHECK(map.at(x, y) == (x < 16 ? 5.0 : 0.0));
        }
    }
}

TEST_CASE("densify_motion: pixels beyond the grid get zero") {
    const auto mv = mv_grid(1, 1, 16, {{1.0, 0.0}});
    const PixelMap map = densify_motion(mv, 48, 16);  // grid covers left third only
    CHECK(map.at(0, 0) == 1.0);
    CHECK(map.at(16, 0) == 0.0);
    CHECK(map.at(47, 15) == 0.0);
}

TEST_CASE("normalize_percentile: zero map stays zero (q <= 0 guard)") {
    const PixelMap map = PixelMap::zeros(8, 8);
    const PixelMap out = normalize_percentile(map, 95.0);
    for (double v : out.values) CHECK(v == 0.0);
}

TEST_CASE("normalize_percentile: linear scaling against the 95th percentile") {
    // 0, 0.1, ..., 100.0: the 95th percentile lands exactly on 95.0.
    std::vector<double> values;
    for (int i = 0; i <= 1000; ++i) values.push_back(static_cast<double>(i) / 10.0);
    const PixelMap map = map_from(7, 143, values);

    CHECK(percentile_value(values, 95.0) == 95.0);
    const PixelMap out = normalize_percentile(map, 95.0);
    CHECK(out.values[950] == 1.0);             // 95.0 -> 1.0
    CHECK(out.values[475] == 0.5);             // 47.5 -> 0.5
    CHECK(out.values[1000] == 1.0);            // 100.0 clipped
    CHECK(out.values[0] == 0.0);
}

TEST_CASE("normalize_percentile: percentile 100 anchors the maximum, nothing clipped") {
    const PixelMap map = map_from(2, 2, {1.0, 4.0, 2.0, 3.0});
    const PixelMap out = normalize_percentile(map, 100.0);
    CHECK(out.values[1] == 1.0);
    CHECK(out.values[0] == 0.25);
    for (double v : out.values) CHECK(v <= 1.0);
}

TEST_CASE("residual_response: zero point 128 and symmetry") {
    ResidualPlane res;
    res.width = 4;
    res.height = 4;
    res.luma.assign(16, 128);
    const PixelMap flat = residual_response(res, 95.0);
    for (double v : flat.values) CHECK(v == 0.0);

    // v and 256 - v deviate equally from 128, for every v in [1, 255].
    for (int v = 1; v <= 255; ++v) {
        CHECK(std::abs(v - 128) == std::abs((256 - v) - 128));
    }

    res.luma = {118, 138, 128, 128, 128, 128, 128, 128,
                128, 128, 128, 128, 128, 128, 128, 128};
    const PixelMap sym = residual_response(res, 100.0);
    CHECK(sym.values[0] == sym.values[1]);
}

TEST_CASE("residual_response: checkerboard extremes") {
    ResidualPlane res;
    res.width = 4;
    res.height = 2;
    res.luma = {0, 255, 0, 255, 255, 0, 255, 0};
    const PixelMap out = residual_response(res, 100.0);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double expected = res.luma[i] == 0 ? 1.0 : 127.0 / 128.0;
        CHECK(out.values[i] == expected);
    }
}

TEST_CASE("saliency_map: additive identity and pointwise sum") {
    const PixelMap zero = PixelMap::zeros(4, 4);
    PixelMap r = PixelMap::zeros(4, 4);
    r.values[5] = 0.75;
    const PixelMap s = saliency_map(zero, r);
    CHECK(s.values == r.values);

    PixelMap ones = map_from(2, 2, {1.0, 1.0, 1.0, 1.0});
    const PixelMap two = saliency_map(ones, ones);
    for (double v : two.values) CHECK(v == 2.0);

    std::mt19937_64 rng(5);
    PixelMap a = PixelMap::zeros(8, 8);
    PixelMap b = PixelMap::zeros(8, 8);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        a.values[i] = static_cast<double>(rng() % 100) / 100.0;
        b.values[i] = static_cast<double>(rng() % 100) / 100.0;
    }
    const PixelMap sum = saliency_map(a, b);
    for (std::size_t i = 0; i < sum.values.size(); ++i) {
        CHECK(sum.values[i] == a.values[i] + b.values[i]);
    }

    const PixelMap mismatched = PixelMap::zeros(4, 8);
    CHECK_THROWS_WITH_AS(saliency_map(zero, mismatched), doctest::Contains("DimensionMismatch"),
                         Error);
}

TEST_CASE("block_scores: trivial cases") {
    const PixelMap zero = PixelMap::zeros(64, 64);
    const BlockScoreGrid zeros = block_scores(zero, 16);
    CHECK(zeros.blocks_i == 2);
    CHECK(zeros.blocks_j == 2);
    for (double s : zeros.scores) CHECK(s == 0.0);

    const PixelMap ones = map_from(64, 64, std::vector<double>(64 * 64, 1.0));
    const BlockScoreGrid grid = block_scores(ones, 16);
    for (double s : grid.scores) CHECK(s == 1024.0);  // 32*32 footprint
}

TEST_CASE("block_scores: a spike in patch (2i, 2j+1) lands in block (i, j) only") {
    PixelMap map = PixelMap::zeros(64, 64);
    // Patch (2, 3) covers pixels x in [48, 64), y in [32, 48): block (1, 1).
    map.at(50, 40) = 3.0;
    const BlockScoreGrid grid = block_scores(map, 16);
    CHECK(grid.at(1, 1) == 3.0);
    CHECK(grid.at(0, 0) == 0.0);
    CHECK(grid.at(0, 1) == 0.0);
    CHECK(grid.at(1, 0) == 0.0);
}

TEST_CASE("block_scores: equals the naive oracle on random maps") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        PixelMap map = PixelMap::zeros(64, 64);
        for (double& v : map.values) v = static_cast<double>(rng() % 2000) / 1000.0;
        const BlockScoreGrid got = block_scores(map, 16);
        const BlockScoreGrid expected = block_scores_oracle(map, 16);
        REQUIRE(got.scores.size() == expected.scores.size());
        for (std::size_t i = 0; i < got.scores.size(); ++i) {
            CHECK(got.scores[i] ==
                  doctest::Approx(expected.scores[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("block_scores: non-multiple dimensions are zero-padded") {
    const PixelMap map = map_from(40, 33, std::vector<double>(40 * 33, 1.0));
    const BlockScoreGrid grid = block_scores(map, 16);
    CHECK(grid.blocks_i == 2);  // ceil(33 / 32)
    CHECK(grid.blocks_j == 2);  // ceil(40 / 32)
    CHECK(grid.at(0, 0) == 1024.0);
    CHECK(grid.at(0, 1) == 8.0 * 32.0);   // 8 columns remain
    CHECK(grid.at(1, 0) == 32.0 * 1.0);   // 1 row remains
    CHECK(grid.at(1, 1) == 8.0 * 1.0);
    CHECK(block_scores_oracle(map, 16).scores == grid.scores);
}

TEST_CASE("fuse_bitcost_prior: weight zero is exactly the identity") {
    BlockScoreGrid scores = BlockScoreGrid::zeros(2, 2);
    scores.scores = {1.0, 2.0, 3.0, 4.0};
    BlockScoreGrid bits = BlockScoreGrid::zeros(2, 2);
    bits.scores = {10.0, 20.0, 30.0, 40.0};
    const BlockScoreGrid out = fuse_bitcost_prior(scores, bits, 0.0);
    CHECK(out.scores == scores.scores);
}

TEST_CASE("fuse_bitcost_prior: uniform cost normalizes to 1 everywhere") {
    const BlockScoreGrid scores = BlockScoreGrid::zeros(3, 3);
    BlockScoreGrid bits = BlockScoreGrid::zeros(3, 3);
    std::fill(bits.scores.begin(), bits.scores.end(), 777.0);
    const BlockScoreGrid out = fuse_bitcost_prior(scores, bits, 1.0);
    for (double s : out.scores) CHECK(s == 1.0);
}

TEST_CASE("fuse_bitcost_prior: scale invariance of the prior") {
    BlockScoreGrid scores = BlockScoreGrid::zeros(2, 3);
    scores.scores = {0.5, 1.5, 0.0, 2.0, 0.25, 1.0};
    BlockScoreGrid bits = BlockScoreGrid::zeros(2, 3);
    bits.scores = {100.0, 300.0, 50.0, 200.0, 150.0, 250.0};
    BlockScoreGrid doubled = bits;
    for (double& b : doubled.scores) b *= 2.0;

    const BlockScoreGrid a = fuse_bitcost_prior(scores, bits, 0.7);
    const BlockScoreGrid b = fuse_bitcost_prior(scores, doubled, 0.7);
    CHECK(a.scores == b.scores);

    const BlockScoreGrid wrong_shape = BlockScoreGrid::zeros(3, 2);
    CHECK_THROWS_AS(fuse_bitcost_prior(scores, wrong_shape, 0.5), Error);
}

TEST_CASE("frame ranges: M, R in [0,1], S in [0,2], A >= 0") {
    std::mt19937_64 rng(23);
    FrameTrace frame;
    frame.packet = {1, FrameType::P, 0.1, 5000};
    MotionVectorField mv = mv_grid(4, 4, 16, {});
    for (int i = 0; i < 16; ++i) {
        mv.vectors.push_back({static_cast<double>(rng() % 17) - 8.0,
                              static_cast<double>(rng() % 17) - 8.0});
    }
    frame.mv = mv;
    ResidualPlane res;
    res.width = 64;
    res.height = 64;
    res.luma.resize(64 * 64);
    for (auto& v : res.luma) v = static_cast<std::uint8_t>(rng() % 256);
    frame.residual = res;

    const PixelMap motion = normalize_percentile(densify_motion(*frame.mv, 64, 64), 95.0);
    const PixelMap residual = residual_response(*frame.residual, 95.0);
    for (double v : motion.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    for (double v : residual.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    const PixelMap s = saliency_map(motion, residual);
    for (double v : s.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 2.0);
    }
    SaliencyConfig cfg;
    const BlockScoreGrid grid = frame_block_scores(frame, 64, 64, cfg);
    for (double a : grid.scores) CHECK(a >= 0.0);
}

TEST_CASE("argmax block is invariant under uniform motion scaling") {
    std::mt19937_64 rng(31);
    MotionVectorField mv = mv_grid(4, 4, 16, {});
    for (int i = 0; i < 16; ++i) {
        mv.vectors.push_back({static_cast<double>(rng() % 100) / 10.0,
                              static_cast<double>(rng() % 100) / 10.0});
    }
    MotionVectorField scaled = mv;
    for (MotionVector& v : scaled.vectors) {
        v.dx *= 3.5;
        v.dy *= 3.5;
    }

    const PixelMap a = normalize_percentile(densify_motion(mv, 64, 64), 95.0);
    const PixelMap b = normalize_percentile(densify_motion(scaled, 64, 64), 95.0);
    const BlockScoreGrid ga = block_scores(a, 16);
    const BlockScoreGrid gb = block_scores(b, 16);

    const auto argmax = [](const BlockScoreGrid& g) {
        return std::distance(g.scores.begin(),
                             std::max_element(g.scores.begin(), g.scores.end()));
    };
    CHECK(argmax(ga) == argmax(gb));
}

TEST_CASE("frame_block_scores: metadata-only frame matches the explicit zero path") {
    FrameTrace bare;
    bare.packet = {3, FrameType::P, 0.5, 4000};
    SaliencyConfig cfg;
    const BlockScoreGrid fast = frame_block_scores(bare, 64, 48, cfg);
    CHECK(fast.blocks_i == 2);
    CHECK(fast.blocks_j == 2);
    for (double s : fast.scores) CHECK(s == 0.0);

    // With the prior enabled, a metadata-only frame still ranks uniformly.
    cfg.bitcost_prior_weight = 0.5;
    const BlockScoreGrid prior = frame_block_scores(bare, 64, 48, cfg);
    for (double s : prior.scores) CHECK(s == 0.5);
}

TEST_CASE("saliency config validation") {
    SaliencyConfig cfg;
    cfg.percentile = 0.0;
    CHECK_THROWS_AS(cfg.check(), Error);
    cfg.percentile = 101.0;
    CHECK_THROWS_AS(cfg.check(), Error);
    cfg = {};
    cfg.bitcost_prior_weight = -1.0;
    CHECK_THROWS_AS(cfg.check(), Error);
}

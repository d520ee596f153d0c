#include "codecstream/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "codecstream/error.hpp"

namespace codecstream {

namespace {

// std::mt19937_64 output is fully specified by the standard; mapping raw
// draws by hand keeps traces byte-identical across platforms, which
// std::uniform_real_distribution does not guarantee.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_signed(std::mt19937_64& rng) {  // [-1, 1)
    return 2.0 * uniform01(rng) - 1.0;
}

}  // namespace

CodecTrace synthesize_trace(const SynthSpec& spec) {
    if (spec.segments.empty()) {
        throw Error(ErrorKind::invalid_spec, "no segments");
    }
    for (const SynthSegment& seg : spec.segments) {
        if (seg.duration_s <= 0.0) {
            throw Error(ErrorKind::invalid_spec, "segment duration must be > 0");
        }
        if (seg.motion_amplitude < 0.0 || seg.bitcost_level < 0.0) {
            throw Error(ErrorKind::invalid_spec, "segment levels must be >= 0");
        }
    }
    if (spec.fps <= 0.0) {
        throw Error(ErrorKind::invalid_spec, "fps must be > 0");
    }
    if (spec.width <= 0 || spec.height <= 0) {
        throw Error(ErrorKind::invalid_spec, "dimensions must be positive");
    }

    std::mt19937_64 rng(spec.seed);

    CodecTrace trace;
    trace.fps = spec.fps;
    trace.width = spec.width;
    trace.height = spec.height;

    const int mv_block_px = 16;
    const int mv_grid_w = (spec.width + mv_block_px - 1) / mv_block_px;
    const int mv_grid_h = (spec.height + mv_block_px - 1) / mv_block_px;
    const std::size_t plane_size =
        static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height);

    int frame_index = 0;
    for (const SynthSegment& seg : spec.segments) {
        const auto n_frames =
            std::max<std::int64_t>(1, std::llround(seg.duration_s * spec.fps));
        const double pb_bytes_per_frame = seg.bitcost_level / spec.fps;

        for (std::int64_t local = 0; local < n_frames; ++local, ++frame_index) {
            FrameTrace frame;
            frame.packet.frame_index = frame_index;
            frame.packet.pts_seconds = static_cast<double>(frame_index) / spec.fps;

            if (local == 0) {
                frame.packet.frame_type = FrameType::I;
                frame.packet.byte_size =
                    std::llround(2.0 * seg.bitcost_level + 5000.0);
                trace.frames.push_back(std::move(frame));
                continue;
            }

            // Every fourth predicted frame is a B-frame; B and P share the
            // same bit-cost and payload path.
            frame.packet.frame_type = (local % 4 == 0) ? FrameType::B : FrameType::P;
            // Near-constant per-frame bit-cost, +-5% jitter.
            frame.packet.byte_size =
                std::llround(pb_bytes_per_frame * (0.95 + 0.1 * uniform01(rng)));

            if (spec.emit_payload) {
                MotionVectorField mv;
                mv.block_size_px = mv_block_px;
                mv.block_w = mv_grid_w;
                mv.block_h = mv_grid_h;
                mv.vectors.reserve(static_cast<std::size_t>(mv_grid_w) * mv_grid_h);
                for (int b = 0; b < mv_grid_w * mv_grid_h; ++b) {
                    double dx = seg.motion_amplitude * uniform_signed(rng);
                    double dy = seg.motion_amplitude * uniform_signed(rng);
                    mv.vectors.push_back({dx, dy});
                }
                frame.mv = std::move(mv);

                ResidualPlane res;
                res.width = spec.width;
                res.height = spec.height;
                res.luma.resize(plane_size);
                const double spread = std::min(100.0, seg.motion_amplitude * 10.0);
                for (std::size_t px = 0; px < plane_size; ++px) {
                    double dev = spread * uniform_signed(rng);
                    int v = 128 + static_cast<int>(std::lround(dev));
                    res.luma[px] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
                }
                frame.residual = std::move(res);
            }

            trace.frames.push_back(std::move(frame));
        }
    }

    validate(trace);
    return trace;
}

}  // namespace codecstream

#include "codecstream/trace.hpp"

#include <algorithm>
#include <string>

#include "codecstream/error.hpp"

namespace codecstream {

const char* to_string(FrameType type) {
    switch (type) {
        case FrameType::I: return "I";
        case FrameType::P: return "P";
        case FrameType::B: return "B";
    }
    return "?";
}

FrameType frame_type_from_char(char c) {
    switch (c) {
        case 'I': return FrameType::I;
        case 'P': return FrameType::P;
        case 'B': return FrameType::B;
        default:
            throw Error(ErrorKind::malformed_record,
                        std::string("unknown frame type '") + c + "'");
    }
}

double CodecTrace::duration_seconds() const {
    if (frames.empty() || fps <= 0.0) return 0.0;
    // The stream may report pts on a different clock than frame_index/fps;
    // cover both so binning and group assignment stay in range.
    double by_count = static_cast<double>(frames.size()) / fps;
    double by_pts = frames.back().packet.pts_seconds + 1.0 / fps;
    return std::max(by_count, by_pts);
}

void validate(const CodecTrace& trace) {
    if (trace.frames.empty()) {
        throw Error(ErrorKind::empty_trace, "trace contains no frames");
    }
    if (trace.fps <= 0.0) {
        throw Error(ErrorKind::malformed_record, "fps must be > 0");
    }
    if (trace.width <= 0 || trace.height <= 0) {
        throw Error(ErrorKind::malformed_record, "frame dimensions must be positive");
    }

    double prev_pts = -1.0;
    for (std::size_t i = 0; i < trace.frames.size(); ++i) {
        const FrameTrace& frame = trace.frames[i];
        const PacketRecord& pkt = frame.packet;
        const std::string at = "frame " + std::to_string(i);

        if (pkt.frame_index != static_cast<int>(i)) {
            throw Error(ErrorKind::malformed_record,
                        at + ": frame_index " + std::to_string(pkt.frame_index) +
                            " breaks 0..n-1 contiguity");
        }
        if (pkt.byte_size < 0) {
            throw Error(ErrorKind::malformed_record, at + ": negative byte_size");
        }
        if (pkt.pts_seconds < 0.0) {
            throw Error(ErrorKind::malformed_record, at + ": negative pts_seconds");
        }
        // Strictly increasing; ties are rejected rather than reordered.
        if (pkt.pts_seconds <= prev_pts) {
            throw Error(ErrorKind::non_monotonic_pts,
                        at + ": pts " + std::to_string(pkt.pts_seconds) +
                            " does not increase past " + std::to_string(prev_pts));
        }
        prev_pts = pkt.pts_seconds;

        if (pkt.frame_type == FrameType::I && (frame.mv || frame.residual)) {
            throw Error(ErrorKind::malformed_record,
                        at + ": I-frame carries mv/residual payload");
        }
        if (frame.mv) {
            const MotionVectorField& mv = *frame.mv;
            if (mv.block_size_px < 1 || mv.block_w < 0 || mv.block_h < 0) {
                throw Error(ErrorKind::malformed_record, at + ": bad mv grid");
            }
            if (mv.vectors.size() !=
                static_cast<std::size_t>(mv.block_w) * static_cast<std::size_t>(mv.block_h)) {
                throw Error(ErrorKind::malformed_record,
                            at + ": mv vector count does not match grid");
            }
        }
        if (frame.residual) {
            const ResidualPlane& res = *frame.residual;
            if (res.width != trace.width || res.height != trace.height) {
                throw Error(ErrorKind::dimension_mismatch,
                            at + ": residual " + std::to_string(res.width) + "x" +
                                std::to_string(res.height) + " vs frame " +
                                std::to_string(trace.width) + "x" + std::to_string(trace.height));
            }
            if (res.luma.size() !=
                static_cast<std::size_t>(res.width) * static_cast<std::size_t>(res.height)) {
                throw Error(ErrorKind::dimension_mismatch,
                            at + ": residual plane size does not match its dimensions");
            }
        }
    }
}

}  // namespace codecstream

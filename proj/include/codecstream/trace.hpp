#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace codecstream {

enum class FrameType { I, P, B };

const char* to_string(FrameType type);
FrameType frame_type_from_char(char c);

inline bool is_predicted(FrameType type) { return type != FrameType::I; }

// Per-frame packet metadata as reported by the demuxer. pts_seconds is the
// presentation timestamp; byte_size the compressed packet size in bytes.
struct PacketRecord {
    int frame_index = 0;
    FrameType frame_type = FrameType::I;
    double pts_seconds = 0.0;
    std::int64_t byte_size = 0;
};

// Per-block displacement field exported by the codec. vectors is row-major
// over the block grid, one (dx, dy) pair per block, in pixels.
struct MotionVector {
    double dx = 0.0;
    double dy = 0.0;
};

struct MotionVectorField {
    int block_w = 0;       // grid columns
    int block_h = 0;       // grid rows
    int block_size_px = 0;
    std::vector<MotionVector> vectors;
};

// Luma correction plane after motion compensation, zero point 128.
struct ResidualPlane {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> luma;  // row-major, width*height
};

struct FrameTrace {
    PacketRecord packet;
    std::optional<MotionVectorField> mv;
    std::optional<ResidualPlane> residual;
};

// The toolkit's sole input: a validated sidecar trace for one video.
// Immutable after construction; safe to share across threads.
struct CodecTrace {
    double fps = 0.0;
    int width = 0;
    int height = 0;
    std::vector<FrameTrace> frames;

    double duration_seconds() const;
};

// Checks every type invariant (contiguous frame indices, strictly increasing
// pts, dimension agreement, I-frames carrying no mv/residual). Violations
// throw; there is no silent repair.
void validate(const CodecTrace& trace);

}  // namespace codecstream

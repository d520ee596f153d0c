#pragma once

#include <cstdint>
#include <vector>

#include "codecstream/trace.hpp"

namespace codecstream {

// One piecewise-stationary stretch of synthetic video.
//   duration_s        segment length in seconds
//   motion_amplitude  scale of motion vectors (px) and residual deviation;
//                     0 means a perfectly predictable segment
//   bitcost_level     approximate P/B bytes per second for the segment
struct SynthSegment {
    double duration_s = 0.0;
    double motion_amplitude = 0.0;
    double bitcost_level = 0.0;
};

struct SynthSpec {
    std::vector<SynthSegment> segments;
    double fps = 30.0;
    int width = 64;
    int height = 64;
    std::uint64_t seed = 0;
    // When false, frames carry packet metadata only (no mv, no residual);
    // used for large metadata-path traces.
    bool emit_payload = true;
};

// Deterministic test-data generator: identical (spec, seed) produce
// byte-identical traces. Each segment opens with an I-frame; predicted
// frames carry near-constant bit-cost at the requested level plus mv and
// residual planes consistent with motion_amplitude. Throws InvalidSpec.
CodecTrace synthesize_trace(const SynthSpec& spec);

}  // namespace codecstream

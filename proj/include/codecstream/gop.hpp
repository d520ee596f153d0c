#pragma once

#include <cstdint>
#include <vector>

#include "codecstream/trace.hpp"

namespace codecstream {

// Configuration of the bit-cost-adaptive temporal grouping. Spans are given
// in seconds and converted to bin counts: L_min = ceil(min_span_s / bin
// duration), L_max likewise.
struct PartitionConfig {
    double bin_duration_s = 1.0;
    int target_groups = 8;
    double min_span_s = 1.0;
    double max_span_s = 60.0;
    int valley_window_bins = 2;  // half-width of the valley search window

    int min_span_bins() const;
    int max_span_bins() const;
    void check() const;  // throws InvalidConfig
};

// Per-bin P/B bit-cost: energies[b] sums the packet bytes of predicted
// frames whose pts falls in [b*dt, (b+1)*dt).
struct BinEnergies {
    std::vector<std::int64_t> energies;
    double bin_duration_s = 1.0;

    int bin_count() const { return static_cast<int>(energies.size()); }
    std::int64_t total() const;
};

// Inclusive bin-index interval [start_bin, end_bin].
struct GopGroup {
    int start_bin = 0;
    int end_bin = 0;

    int span() const { return end_bin - start_bin + 1; }
    bool operator==(const GopGroup&) const = default;
};

// Ordered, gap-free tiling of [0, B) plus the quota that produced it.
struct GopPartition {
    std::vector<GopGroup> groups;
    double quota = 0.0;

    int group_count() const { return static_cast<int>(groups.size()); }
};

// Aggregates P/B packet bytes into bins of the given duration. I-frame
// packets are excluded. The bin count covers both the frame count at fps
// and the last packet's pts.
BinEnergies bin_bitcost(const CodecTrace& trace, double bin_duration_s);

// Average P/B bit-cost quota per adaptive group: sum(e) / max(1, target).
double compute_quota(const BinEnergies& energies, int target_groups);

// Walks the bins left to right. From each group start, the boundary
// triggers at the first bin where the span reaches L_max, or reaches L_min
// with accumulated bit-cost >= quota. The trigger is then refined to the
// lowest-energy bin in a window around it (ties: nearest the trigger, then
// the smaller bin index), clipped by span bounds and the video end. The
// final group absorbs the tail even when shorter than L_min.
GopPartition partition_gops(const BinEnergies& energies, const PartitionConfig& cfg,
                            double quota);

// Group id of a source frame: the k with frame_index/fps in
// [start_bin*dt, (end_bin+1)*dt). Throws OutOfRange outside the partition.
int assign_group(int frame_index, double fps, const GopPartition& partition,
                 double bin_duration_s);

}  // namespace codecstream

#include "codecstream/gop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "codecstream/error.hpp"

namespace codecstream {

int PartitionConfig::min_span_bins() const {
    return std::max(1, static_cast<int>(std::ceil(min_span_s / bin_duration_s)));
}

int PartitionConfig::max_span_bins() const {
    return std::max(min_span_bins(),
                    static_cast<int>(std::ceil(max_span_s / bin_duration_s)));
}

void PartitionConfig::check() const {
    if (bin_duration_s <= 0.0) {
        throw Error(ErrorKind::invalid_config, "bin_duration_s must be > 0");
    }
    if (target_groups < 0) {
        throw Error(ErrorKind::invalid_config, "target_groups must be >= 0");
    }
    if (min_span_s <= 0.0 || max_span_s < min_span_s) {
        throw Error(ErrorKind::invalid_config, "need 0 < min_span_s <= max_span_s");
    }
    if (valley_window_bins < 0) {
        throw Error(ErrorKind::invalid_config, "valley_window_bins must be >= 0");
    }
}

std::int64_t BinEnergies::total() const {
    return std::accumulate(energies.begin(), energies.end(), std::int64_t{0});
}

BinEnergies bin_bitcost(const CodecTrace& trace, double bin_duration_s) {
    if (bin_duration_s <= 0.0) {
        throw Error(ErrorKind::invalid_config, "bin duration must be > 0");
    }
    if (trace.frames.empty()) {
        throw Error(ErrorKind::empty_trace, "cannot bin an empty trace");
    }

    const double duration = trace.duration_seconds();
    const int bin_count =
        std::max(1, static_cast<int>(std::ceil(duration / bin_duration_s)));

    BinEnergies out;
    out.bin_duration_s = bin_duration_s;
    out.energies.assign(static_cast<std::size_t>(bin_count), 0);

    for (const FrameTrace& frame : trace.frames) {
        if (!is_predicted(frame.packet.frame_type)) continue;  // I packets excluded
        int b = static_cast<int>(frame.packet.pts_seconds / bin_duration_s);
        b = std::clamp(b, 0, bin_count - 1);
        out.energies[static_cast<std::size_t>(b)] += frame.packet.byte_size;
    }
    return out;
}

double compute_quota(const BinEnergies& energies, int target_groups) {
    return static_cast<double>(energies.total()) /
           static_cast<double>(std::max(1, target_groups));
}

GopPartition partition_gops(const BinEnergies& energies, const PartitionConfig& cfg,
                            double quota) {
    cfg.check();
    const int bin_count = energies.bin_count();
    if (bin_count < 1) {
        throw Error(ErrorKind::invalid_config, "need at least one bin");
    }
    // Span bounds are measured in the same bins the energies were summed
    // over; a mismatched bin duration would silently distort them.
    if (energies.bin_duration_s != cfg.bin_duration_s) {
        throw Error(ErrorKind::invalid_config,
                    "energies binned at " + std::to_string(energies.bin_duration_s) +
                        " s but config expects " + std::to_string(cfg.bin_duration_s) + " s");
    }
    const auto& e = energies.energies;
    const int min_span = cfg.min_span_bins();
    const int max_span = cfg.max_span_bins();
    const int window = cfg.valley_window_bins;

    GopPartition partition;
    partition.quota = quota;

    int start = 0;
    while (start < bin_count) {
        // Trigger: first bin reaching the max span, or the min span with
        // accumulated bit-cost at the quota.
        int trigger = -1;
        std::int64_t acc = 0;
        for (int i = start; i < bin_count; ++i) {
            acc += e[static_cast<std::size_t>(i)];
            const int span = i - start + 1;
            if (span >= max_span ||
                (span >= min_span && static_cast<double>(acc) >= quota)) {
                trigger = i;
                break;
            }
        }
        if (trigger < 0) {
            // Tail remainder: absorb the rest even if shorter than min span.
            partition.groups.push_back({start, bin_count - 1});
            break;
        }

        // Valley refinement, clipped by span bounds and the video end.
        const int lo = std::max(trigger - window, start + min_span - 1);
        const int hi = std::min({trigger + window, start + max_span - 1, bin_count - 1});
        int valley = lo;
        for (int b = lo + 1; b <= hi; ++b) {
            auto key = std::make_tuple(e[static_cast<std::size_t>(b)],
                                       std::abs(b - trigger), b);
            auto best = std::make_tuple(e[static_cast<std::size_t>(valley)],
                                        std::abs(valley - trigger), valley);
            if (key < best) valley = b;
        }

        partition.groups.push_back({start, valley});
        start = valley + 1;
    }
    return partition;
}

int assign_group(int frame_index, double fps, const GopPartition& partition,
                 double bin_duration_s) {
    if (fps <= 0.0 || bin_duration_s <= 0.0) {
        throw Error(ErrorKind::invalid_config, "fps and bin duration must be > 0");
    }
    const double t = static_cast<double>(frame_index) / fps;
    for (std::size_t k = 0; k < partition.groups.size(); ++k) {
        const GopGroup& g = partition.groups[k];
        const double begin = g.start_bin * bin_duration_s;
        const double end = (g.end_bin + 1) * bin_duration_s;  // half-open
        if (t >= begin && t < end) return static_cast<int>(k);
    }
    throw Error(ErrorKind::out_of_range,
                "frame time " + std::to_string(t) + "s outside the partition");
}

}  // namespace codecstream

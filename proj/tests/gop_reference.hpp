#pragma once

// Literal, deliberately naive re-implementation of the trigger and valley
// rules, kept independent of the library's partition path. Sums are
// recomputed from scratch at every step and the argmin scans the whole
// window; only the rule itself is shared with production.

#include <cmath>
#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

namespace gop_reference {

struct Interval {
    int start = 0;
    int end = 0;
    bool operator==(const Interval&) const = default;
};

inline std::vector<Interval> partition(const std::vector<std::int64_t>& e, int l_min, int l_max,
                                       int window, double theta) {
    const int bin_count = static_cast<int>(e.size());
    std::vector<Interval> out;
    int s = 0;
    while (s < bin_count) {
        int trigger = -1;
        for (int i = s; i < bin_count && trigger < 0; ++i) {
            std::int64_t acc = 0;
            for (int b = s; b <= i; ++b) acc += e[static_cast<std::size_t>(b)];
            const bool span_hit = (i - s + 1) >= l_max;
            const bool quota_hit =
                (i - s + 1) >= l_min && static_cast<double>(acc) >= theta;
            if (span_hit || quota_hit) trigger = i;
        }
        if (trigger < 0) {
            out.push_back({s, bin_count - 1});
            break;
        }
        int lo = trigger - window;
        if (lo < s + l_min - 1) lo = s + l_min - 1;
        int hi = trigger + window;
        if (hi > s + l_max - 1) hi = s + l_max - 1;
        if (hi > bin_count - 1) hi = bin_count - 1;

        int best = lo;
        for (int b = lo; b <= hi; ++b) {
            const auto candidate = std::make_tuple(e[static_cast<std::size_t>(b)],
                                                   std::abs(b - trigger), b);
            const auto incumbent = std::make_tuple(e[static_cast<std::size_t>(best)],
                                                   std::abs(best - trigger), best);
            if (candidate < incumbent) best = b;
        }
        out.push_back({s, best});
        s = best + 1;
    }
    return out;
}

}  // namespace gop_reference

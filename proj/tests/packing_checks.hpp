#pragma once

// Invariant checks shared by the packer unit tests and the acceptance
// suite: merge alignment, per-group block dedup, budget conservation, and
// group-id consistency.

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "codecstream/gop.hpp"
#include "codecstream/packer.hpp"
#include "codecstream/trace.hpp"

namespace packing_checks {

// Returns an empty string when all invariants hold, else a description of
// the first violation.
inline std::string verify(const codecstream::TokenizeResult& result,
                          const codecstream::CodecTrace& trace,
                          const codecstream::TokenizeConfig& cfg) {
    using namespace codecstream;

    // Canvas indices dense from 0, in emission order.
    for (std::size_t s = 0; s < result.canvases.size(); ++s) {
        if (result.canvases[s].index != static_cast<int>(s)) {
            return "canvas indices not dense";
        }
        if (static_cast<int>(result.canvases[s].cells.size()) > cfg.packing.canvas_blocks) {
            return "canvas above capacity";
        }
    }

    // P-canvas budget conserved.
    int p_canvases = 0;
    for (const Canvas& canvas : result.canvases) {
        if (canvas.label == CanvasLabel::P) ++p_canvases;
    }
    if (p_canvases != result.allocation.total()) {
        return "P-canvas count does not match the allocation";
    }
    if (!result.allocation.insufficient_budget &&
        p_canvases != cfg.packing.p_canvases_total) {
        return "P-canvas count does not match the budget";
    }

    // Merge alignment: tokens arrive in groups of four, 2x2-contiguous in
    // both coordinate systems.
    if (result.tokens.size() % 4 != 0) return "token count not a multiple of 4";
    for (std::size_t t = 0; t + 3 < result.tokens.size(); t += 4) {
        const TokenRecord& a = result.tokens[t];
        for (int o = 1; o < 4; ++o) {
            const TokenRecord& u = result.tokens[t + static_cast<std::size_t>(o)];
            if (u.canvas_index != a.canvas_index || u.source_frame != a.source_frame ||
                u.group != a.group) {
                return "block tokens split across canvases or frames";
            }
            const int dr = o / 2;
            const int dc = o % 2;
            if (u.canvas_row != a.canvas_row + dr || u.canvas_col != a.canvas_col + dc) {
                return "canvas positions not 2x2-contiguous";
            }
            if (u.source_row != a.source_row + dr || u.source_col != a.source_col + dc) {
                return "source positions not 2x2-contiguous";
            }
        }
        if (a.canvas_row % 2 != 0 || a.canvas_col % 2 != 0 || a.source_row % 2 != 0 ||
            a.source_col % 2 != 0) {
            return "block corner not merge-aligned";
        }
    }

    // No duplicate (frame, source block) among any single group's canvases.
    std::map<int, std::set<std::tuple<int, int, int>>> seen_per_group;
    std::map<int, int> group_of_canvas;
    for (const Canvas& canvas : result.canvases) {
        int group = -1;
        for (const TokenRecord& token : result.tokens) {
            if (token.canvas_index == canvas.index) {
                group = token.group;
                break;
            }
        }
        group_of_canvas[canvas.index] = group;
        for (const CanvasCell& cell : canvas.cells) {
            if (group < 0) return "canvas with cells but no tokens";
            auto [it, inserted] =
                seen_per_group[group].emplace(cell.frame, cell.block_i, cell.block_j);
            (void)it;
            if (!inserted) return "duplicate (frame, source block) within a group";
        }
    }

    // I-canvas cells come from a single frame.
    for (const Canvas& canvas : result.canvases) {
        if (canvas.label != CanvasLabel::I || canvas.cells.empty()) continue;
        for (const CanvasCell& cell : canvas.cells) {
            if (cell.frame != canvas.cells.front().frame) {
                return "I-canvas mixes source frames";
            }
        }
    }

    // Group id of every token matches the partition interval of its frame.
    for (const TokenRecord& token : result.tokens) {
        const int expected = assign_group(token.source_frame, trace.fps, result.partition,
                                          cfg.partition.bin_duration_s);
        if (token.group != expected) return "token group inconsistent with assign_group";
    }
    return {};
}

}  // namespace packing_checks

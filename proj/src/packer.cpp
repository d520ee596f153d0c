#include "codecstream/packer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <tuple>

#include "codecstream/error.hpp"

namespace codecstream {

namespace {

std::uint64_t block_key(int frame, int block_i, int block_j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(frame)) << 40) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(block_i) & 0xFFFFF) << 20) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(block_j) & 0xFFFFF));
}

}  // namespace

int PackingConfig::canvas_grid_cols() const {
    return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(canvas_blocks))));
}

int PackingConfig::canvas_grid_rows() const {
    const int cols = canvas_grid_cols();
    return (canvas_blocks + cols - 1) / cols;
}

void PackingConfig::check() const {
    if (lambda < 0.0 || alpha_peak < 0.0) {
        throw Error(ErrorKind::invalid_config, "lambda and alpha_peak must be >= 0");
    }
    if (canvas_blocks < 1) {
        throw Error(ErrorKind::invalid_config, "canvas_blocks must be >= 1");
    }
    if (p_canvases_total < 0) {
        throw Error(ErrorKind::invalid_config, "p_canvases_total must be >= 0");
    }
    if (patch_px < 1) {
        throw Error(ErrorKind::invalid_config, "patch_px must be >= 1");
    }
}

const char* to_string(CanvasLabel label) {
    return label == CanvasLabel::I ? "I" : "P";
}

std::vector<double> attenuate(const std::vector<BlockCandidate>& candidates, double lambda) {
    // Per-frame rank by score descending; ties broken by block coordinates
    // so ranks are stable.
    std::map<int, std::vector<std::size_t>> per_frame;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        per_frame[candidates[i].frame].push_back(i);
    }

    std::vector<double> out(candidates.size(), 0.0);
    for (auto& [frame, ids] : per_frame) {
        std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
            const BlockCandidate& ca = candidates[a];
            const BlockCandidate& cb = candidates[b];
            return std::make_tuple(-ca.score, ca.block_i, ca.block_j) <
                   std::make_tuple(-cb.score, cb.block_i, cb.block_j);
        });
        for (std::size_t rank = 0; rank < ids.size(); ++rank) {
            out[ids[rank]] =
                candidates[ids[rank]].score / std::sqrt(1.0 + lambda * static_cast<double>(rank));
        }
    }
    return out;
}

std::map<int, double> frame_weights(const std::vector<BlockCandidate>& candidates,
                                    const std::vector<double>& attenuated, double alpha_peak) {
    if (candidates.size() != attenuated.size()) {
        throw Error(ErrorKind::internal, "attenuated scores misaligned with candidates");
    }
    std::map<int, double> sums;
    std::map<int, double> peaks;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const int frame = candidates[i].frame;
        sums[frame] += std::max(0.0, attenuated[i]);
        auto [it, inserted] = peaks.try_emplace(frame, attenuated[i]);
        if (!inserted) it->second = std::max(it->second, attenuated[i]);
    }
    std::map<int, double> weights;
    for (const auto& [frame, sum] : sums) {
        weights[frame] = sum + alpha_peak * peaks[frame];
    }
    return weights;
}

std::vector<double> allocation_curve(const std::vector<double>& weights_in_time_order) {
    const std::size_t count = weights_in_time_order.size();
    std::vector<double> curve(count, 0.0);
    const double total =
        std::accumulate(weights_in_time_order.begin(), weights_in_time_order.end(), 0.0);
    if (total <= 0.0) {
        // Zero-mass group: uniform curve keeps the strata well defined.
        for (std::size_t l = 0; l < count; ++l) {
            curve[l] = static_cast<double>(l + 1) / static_cast<double>(count);
        }
        return curve;
    }
    double acc = 0.0;
    for (std::size_t l = 0; l < count; ++l) {
        acc += weights_in_time_order[l];
        curve[l] = acc / total;
    }
    return curve;
}

int CanvasAllocation::total() const {
    return std::accumulate(per_group.begin(), per_group.end(), 0);
}

CanvasAllocation allocate_canvases(const GopPartition& partition, const BinEnergies& energies,
                                   int p_canvases_total) {
    if (p_canvases_total < 0) {
        throw Error(ErrorKind::invalid_config, "p_canvases_total must be >= 0");
    }
    const int group_count = partition.group_count();
    CanvasAllocation alloc;
    alloc.per_group.assign(static_cast<std::size_t>(group_count), 0);
    if (group_count == 0 || p_canvases_total == 0) {
        alloc.insufficient_budget = p_canvases_total < group_count;
        return alloc;
    }

    std::vector<double> masses(static_cast<std::size_t>(group_count), 0.0);
    for (int k = 0; k < group_count; ++k) {
        const GopGroup& g = partition.groups[static_cast<std::size_t>(k)];
        std::int64_t mass = 0;
        for (int b = g.start_bin; b <= g.end_bin && b < energies.bin_count(); ++b) {
            mass += energies.energies[static_cast<std::size_t>(b)];
        }
        masses[static_cast<std::size_t>(k)] = static_cast<double>(mass);
    }

    if (p_canvases_total < group_count) {
        // Budget cannot give every group a canvas: highest-mass groups first.
        alloc.insufficient_budget = true;
        std::vector<int> order(static_cast<std::size_t>(group_count));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::make_tuple(-masses[static_cast<std::size_t>(a)], a) <
                   std::make_tuple(-masses[static_cast<std::size_t>(b)], b);
        });
        for (int n = 0; n < p_canvases_total; ++n) {
            alloc.per_group[static_cast<std::size_t>(order[static_cast<std::size_t>(n)])] = 1;
        }
        return alloc;
    }

    // One canvas per group, remainder proportional to mass with
    // largest-remainder rounding.
    const int remainder_budget = p_canvases_total - group_count;
    const double total_mass = std::accumulate(masses.begin(), masses.end(), 0.0);
    std::vector<double> shares(static_cast<std::size_t>(group_count), 0.0);
    for (int k = 0; k < group_count; ++k) {
        shares[static_cast<std::size_t>(k)] =
            total_mass > 0.0
                ? remainder_budget * masses[static_cast<std::size_t>(k)] / total_mass
                : static_cast<double>(remainder_budget) / group_count;
    }

    int assigned = 0;
    std::vector<double> fractions(static_cast<std::size_t>(group_count), 0.0);
    for (int k = 0; k < group_count; ++k) {
        const double share = shares[static_cast<std::size_t>(k)];
        const int whole = static_cast<int>(std::floor(share));
        alloc.per_group[static_cast<std::size_t>(k)] = 1 + whole;
        fractions[static_cast<std::size_t>(k)] = share - whole;
        assigned += 1 + whole;
    }

    int leftover = p_canvases_total - assigned;
    std::vector<int> order(static_cast<std::size_t>(group_count));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::make_tuple(-fractions[static_cast<std::size_t>(a)],
                               -masses[static_cast<std::size_t>(a)], a) <
               std::make_tuple(-fractions[static_cast<std::size_t>(b)],
                               -masses[static_cast<std::size_t>(b)], b);
    });
    for (int n = 0; n < leftover && n < group_count; ++n) {
        ++alloc.per_group[static_cast<std::size_t>(order[static_cast<std::size_t>(n)])];
    }
    return alloc;
}

GroupPacker::GroupPacker(std::vector<BlockCandidate> candidates, const PackingConfig& cfg)
    : candidates_(std::move(candidates)), cfg_(cfg) {
    cfg_.check();
    attenuated_ = attenuate(candidates_, cfg_.lambda);

    const std::map<int, double> weights =
        frame_weights(candidates_, attenuated_, cfg_.alpha_peak);
    frames_.reserve(weights.size());
    std::vector<double> ordered_weights;
    ordered_weights.reserve(weights.size());
    for (const auto& [frame, w] : weights) {  // std::map: ascending frame order
        frame_pos_[frame] = static_cast<int>(frames_.size());
        frames_.push_back(frame);
        ordered_weights.push_back(w);
    }
    if (!frames_.empty()) {
        curve_ = allocation_curve(ordered_weights);
    }

    by_frame_.assign(frames_.size(), {});
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
        by_frame_[static_cast<std::size_t>(frame_pos_.at(candidates_[i].frame))].push_back(i);
    }
    for (auto& ids : by_frame_) {
        std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
            return std::make_tuple(-attenuated_[a], candidates_[a].block_i,
                                   candidates_[a].block_j) <
                   std::make_tuple(-attenuated_[b], candidates_[b].block_i,
                                   candidates_[b].block_j);
        });
    }
}

void GroupPacker::reserve_block(int frame, int block_i, int block_j) {
    mark_used(frame, block_i, block_j);
}

bool GroupPacker::is_used(int frame, int block_i, int block_j) const {
    return used_.count(block_key(frame, block_i, block_j)) > 0;
}

void GroupPacker::mark_used(int frame, int block_i, int block_j) {
    used_.insert(block_key(frame, block_i, block_j));
}

std::vector<CanvasCell> GroupPacker::pack_p_canvas(int r, int m) {
    if (m < 1 || r < 0 || r >= m) {
        throw Error(ErrorKind::invalid_config, "canvas slot r must lie in [0, m)");
    }
    std::vector<CanvasCell> cells;
    if (frames_.empty()) return cells;  // group without candidates

    const int frame_count = static_cast<int>(frames_.size());

    // Stratum of a frame: the interval [r/m, (r+1)/m) its cumulative mass
    // falls in, the full-mass end mapping to the last stratum.
    auto stratum_of = [&](int pos) {
        const int s = static_cast<int>(std::floor(curve_[static_cast<std::size_t>(pos)] *
                                                  static_cast<double>(m)));
        return std::min(m - 1, s);
    };

    // Strata are nondecreasing along the curve, so the initial window is a
    // contiguous (possibly empty) run of frame positions.
    int lo = 0;
    while (lo < frame_count && stratum_of(lo) < r) ++lo;
    int hi = lo - 1;
    while (hi + 1 < frame_count && stratum_of(hi + 1) == r) ++hi;

    // Greedy selection by attenuated score over the current window; a
    // max-heap over per-frame cursors keeps the scan incremental while the
    // window widens toward the full group.
    using HeapEntry = std::tuple<double, int, int, int, int, std::size_t>;
    // (-attenuated, frame, block_i, block_j, frame_pos, cursor)
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap;
    std::vector<std::size_t> cursor(static_cast<std::size_t>(frame_count), 0);

    auto push_frame_head = [&](int pos) {
        auto& ids = by_frame_[static_cast<std::size_t>(pos)];
        std::size_t& cur = cursor[static_cast<std::size_t>(pos)];
        while (cur < ids.size()) {
            const std::size_t id = ids[cur];
            const BlockCandidate& c = candidates_[id];
            if (!is_used(c.frame, c.block_i, c.block_j)) {
                heap.emplace(-attenuated_[id], c.frame, c.block_i, c.block_j, pos, cur);
                return;
            }
            ++cur;  // consumed by an earlier canvas or the I-canvas
        }
    };

    for (int pos = lo; pos <= hi; ++pos) push_frame_head(pos);

    int window_lo = lo;
    int window_hi = hi;
    while (static_cast<int>(cells.size()) < cfg_.canvas_blocks) {
        if (heap.empty()) {
            if (window_lo == 0 && window_hi == frame_count - 1) break;  // full group exhausted
            // Stratum ran short: widen symmetrically one frame at a time.
            if (window_lo > 0) push_frame_head(--window_lo);
            if (window_hi < frame_count - 1) push_frame_head(++window_hi);
            continue;
        }
        auto [neg_score, frame, block_i, block_j, pos, cur] = heap.top();
        heap.pop();
        if (cursor[static_cast<std::size_t>(pos)] != cur) continue;  // stale entry

        mark_used(frame, block_i, block_j);
        cells.push_back({frame, block_i, block_j});
        ++cursor[static_cast<std::size_t>(pos)];
        push_frame_head(pos);
    }
    return cells;
}

std::vector<std::vector<CanvasCell>> i_canvas_pages(int anchor_frame, int frame_width,
                                                    int frame_height, const PackingConfig& cfg) {
    cfg.check();
    const int block_px = 2 * cfg.patch_px;
    const int blocks_i = (frame_height + block_px - 1) / block_px;
    const int blocks_j = (frame_width + block_px - 1) / block_px;

    std::vector<std::vector<CanvasCell>> pages;
    std::vector<CanvasCell> page;
    page.reserve(static_cast<std::size_t>(cfg.canvas_blocks));
    for (int bi = 0; bi < blocks_i; ++bi) {
        for (int bj = 0; bj < blocks_j; ++bj) {
            page.push_back({anchor_frame, bi, bj});
            if (static_cast<int>(page.size()) == cfg.canvas_blocks) {
                pages.push_back(std::move(page));
                page.clear();
                page.reserve(static_cast<std::size_t>(cfg.canvas_blocks));
            }
        }
    }
    if (!page.empty()) pages.push_back(std::move(page));
    return pages;
}

std::vector<TokenRecord> emit_tokens(const Canvas& canvas, int group) {
    std::vector<TokenRecord> tokens;
    tokens.reserve(canvas.cells.size() * 4);
    for (std::size_t n = 0; n < canvas.cells.size(); ++n) {
        const CanvasCell& cell = canvas.cells[n];
        const int cell_row = static_cast<int>(n) / canvas.grid_cols;
        const int cell_col = static_cast<int>(n) % canvas.grid_cols;
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                TokenRecord token;
                token.canvas_index = canvas.index;
                token.source_frame = cell.frame;
                token.canvas_row = 2 * cell_row + a;
                token.canvas_col = 2 * cell_col + b;
                token.source_row = 2 * cell.block_i + a;
                token.source_col = 2 * cell.block_j + b;
                token.group = group;
                tokens.push_back(token);
            }
        }
    }
    return tokens;
}

TokenizeResult tokenize(const CodecTrace& trace, const TokenizeConfig& cfg) {
    cfg.partition.check();
    cfg.saliency.check();
    cfg.packing.check();
    validate(trace);

    TokenizeResult result;
    result.energies = bin_bitcost(trace, cfg.partition.bin_duration_s);
    const double quota = compute_quota(result.energies, cfg.partition.target_groups);
    result.partition = partition_gops(result.energies, cfg.partition, quota);
    result.allocation =
        allocate_canvases(result.partition, result.energies, cfg.packing.p_canvases_total);

    const int group_count = result.partition.group_count();
    std::vector<std::vector<int>> group_frames(static_cast<std::size_t>(group_count));
    for (const FrameTrace& frame : trace.frames) {
        const int k = assign_group(frame.packet.frame_index, trace.fps, result.partition,
                                   cfg.partition.bin_duration_s);
        group_frames[static_cast<std::size_t>(k)].push_back(frame.packet.frame_index);
    }

    int next_canvas = 0;
    auto append_canvas = [&](CanvasLabel label, std::vector<CanvasCell> cells, int group) {
        Canvas canvas;
        canvas.index = next_canvas++;
        canvas.label = label;
        canvas.grid_rows = cfg.packing.canvas_grid_rows();
        canvas.grid_cols = cfg.packing.canvas_grid_cols();
        canvas.cells = std::move(cells);
        auto tokens = emit_tokens(canvas, group);
        result.tokens.insert(result.tokens.end(), tokens.begin(), tokens.end());
        result.canvases.push_back(std::move(canvas));
    };

    for (int k = 0; k < group_count; ++k) {
        const std::vector<int>& members = group_frames[static_cast<std::size_t>(k)];

        // Anchor: the group's first I-frame, else its first frame.
        int anchor = -1;
        for (int f : members) {
            if (trace.frames[static_cast<std::size_t>(f)].packet.frame_type == FrameType::I) {
                anchor = f;
                break;
            }
        }
        if (anchor < 0 && !members.empty()) anchor = members.front();

        if (anchor >= 0) {
            for (auto& page :
                 i_canvas_pages(anchor, trace.width, trace.height, cfg.packing)) {
                append_canvas(CanvasLabel::I, std::move(page), k);
            }
        }

        // Candidate pool: every block of every predicted frame in the group.
        std::vector<BlockCandidate> candidates;
        for (int f : members) {
            const FrameTrace& frame = trace.frames[static_cast<std::size_t>(f)];
            if (!is_predicted(frame.packet.frame_type)) continue;
            const BlockScoreGrid grid = frame_block_scores(
                frame, trace.width, trace.height, cfg.saliency, cfg.packing.patch_px);
            for (int bi = 0; bi < grid.blocks_i; ++bi) {
                for (int bj = 0; bj < grid.blocks_j; ++bj) {
                    candidates.push_back({f, bi, bj, grid.at(bi, bj)});
                }
            }
        }

        GroupPacker packer(std::move(candidates), cfg.packing);
        if (anchor >= 0 &&
            is_predicted(trace.frames[static_cast<std::size_t>(anchor)].packet.frame_type)) {
            // A predicted anchor is carried densely by the I-canvas; keep its
            // blocks out of the P selection.
            const int block_px = 2 * cfg.packing.patch_px;
            const int blocks_i = (trace.height + block_px - 1) / block_px;
            const int blocks_j = (trace.width + block_px - 1) / block_px;
            for (int bi = 0; bi < blocks_i; ++bi) {
                for (int bj = 0; bj < blocks_j; ++bj) {
                    packer.reserve_block(anchor, bi, bj);
                }
            }
        }

        const int m_k = result.allocation.per_group[static_cast<std::size_t>(k)];
        for (int r = 0; r < m_k; ++r) {
            append_canvas(CanvasLabel::P, packer.pack_p_canvas(r, m_k), k);
        }
    }
    return result;
}

}  // namespace codecstream

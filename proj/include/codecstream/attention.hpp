#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "codecstream/packer.hpp"

namespace codecstream {

// Group assignment for a token set; the compact, exact form of the
// group-visible attention mask. Two tokens attend to each other iff their
// group ids match.
struct VisibilityGroups {
    std::vector<int> group_of;

    std::size_t size() const { return group_of.size(); }
    bool visible(std::size_t a, std::size_t b) const { return group_of[a] == group_of[b]; }
};

// Per-token spatiotemporal coordinate (temporal index, patch row, col).
struct PositionTriple {
    int t = 0;
    int h = 0;
    int w = 0;

    bool operator==(const PositionTriple&) const = default;
};

// Codec tokens: visibility follows the bit-cost-adaptive group id, so
// tokens of one GOP stay mutually visible across its P-canvases.
VisibilityGroups codec_groups(const std::vector<TokenRecord>& tokens);

// Sampled-frame / IPPP-style inputs: fixed slot grouping, group =
// frame_index / slots.
VisibilityGroups fixed_slot_groups(const std::vector<int>& frame_index_per_token, int slots = 4);

// Static images: one degenerate temporal group.
VisibilityGroups image_group(std::size_t token_count);

// Dense boolean mask (row-major, n*n) realizing visible(a,b). A debugging
// aid, bounded to dense_limit tokens (MaskTooLarge beyond).
std::vector<std::uint8_t> dense_mask(const VisibilityGroups& groups, std::size_t dense_limit = 16384);

// Packed bit-matrix file: 16-byte header (u64 token count, u64 row stride
// in bytes, little endian) followed by one stride-padded row per token,
// LSB-first within each byte.
void write_mask_file(const VisibilityGroups& groups, const std::filesystem::path& path,
                     std::size_t dense_limit = 16384);

// Shared 3D coordinates: codec tokens adopt (source frame, source patch
// row, source patch col).
std::vector<PositionTriple> position_coords(const std::vector<TokenRecord>& tokens);

}  // namespace codecstream

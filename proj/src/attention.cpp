#include "codecstream/attention.hpp"

#include <fstream>
#include <string>

#include "codecstream/error.hpp"

namespace codecstream {

VisibilityGroups codec_groups(const std::vector<TokenRecord>& tokens) {
    VisibilityGroups groups;
    groups.group_of.reserve(tokens.size());
    for (const TokenRecord& token : tokens) {
        groups.group_of.push_back(token.group);
    }
    return groups;
}

VisibilityGroups fixed_slot_groups(const std::vector<int>& frame_index_per_token, int slots) {
    if (slots < 1) {
        throw Error(ErrorKind::invalid_config, "slots must be >= 1");
    }
    VisibilityGroups groups;
    groups.group_of.reserve(frame_index_per_token.size());
    for (int frame : frame_index_per_token) {
        groups.group_of.push_back(frame / slots);
    }
    return groups;
}

VisibilityGroups image_group(std::size_t token_count) {
    VisibilityGroups groups;
    groups.group_of.assign(token_count, 0);
    return groups;
}

std::vector<std::uint8_t> dense_mask(const VisibilityGroups& groups, std::size_t dense_limit) {
    const std::size_t n = groups.size();
    if (n > dense_limit) {
        throw Error(ErrorKind::mask_too_large,
                    std::to_string(n) + " tokens exceed the dense-mask limit of " +
                        std::to_string(dense_limit));
    }
    std::vector<std::uint8_t> mask(n * n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            mask[a * n + b] = groups.visible(a, b) ? 1 : 0;
        }
    }
    return mask;
}

void write_mask_file(const VisibilityGroups& groups, const std::filesystem::path& path,
                     std::size_t dense_limit) {
    const std::size_t n = groups.size();
    if (n > dense_limit) {
        throw Error(ErrorKind::mask_too_large,
                    std::to_string(n) + " tokens exceed the dense-mask limit of " +
                        std::to_string(dense_limit));
    }
    const std::uint64_t stride = (n + 7) / 8;

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io_failure, "cannot write mask file " + path.string());
    }
    auto write_u64 = [&](std::uint64_t v) {
        std::uint8_t bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<std::uint8_t>(v >> (8 * i));
        out.write(reinterpret_cast<const char*>(bytes), 8);
    };
    write_u64(static_cast<std::uint64_t>(n));
    write_u64(stride);

    std::vector<std::uint8_t> row(static_cast<std::size_t>(stride));
    for (std::size_t a = 0; a < n; ++a) {
        std::fill(row.begin(), row.end(), 0);
        for (std::size_t b = 0; b < n; ++b) {
            if (groups.visible(a, b)) {
                row[b / 8] |= static_cast<std::uint8_t>(1u << (b % 8));
            }
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
}

std::vector<PositionTriple> position_coords(const std::vector<TokenRecord>& tokens) {
    std::vector<PositionTriple> coords;
    coords.reserve(tokens.size());
    for (const TokenRecord& token : tokens) {
        coords.push_back({token.source_frame, token.source_row, token.source_col});
    }
    return coords;
}

}  // namespace codecstream

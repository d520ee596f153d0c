#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "codecstream/trace.hpp"

namespace codecstream {

// Serialized form of a trace: line-delimited records plus an optional
// companion binary blob holding raw 8-bit luma residual planes. The text
// embeds the companion file name so a trace can be reloaded from disk.
struct TraceBundle {
    std::string text;
    std::vector<std::uint8_t> residual_blob;
    std::string residual_file;  // empty when no frame carries a residual
};

// Parses trace text (and the companion blob it references) into a validated
// CodecTrace. Throws MalformedRecord / NonMonotonicPts / DimensionMismatch /
// EmptyTrace on any invariant violation.
CodecTrace parse_trace(const std::string& text, const std::vector<std::uint8_t>& residual_blob);

// Inverse of parse_trace. Encoding is exact: parse(serialize(t)) == t and
// serialize(parse(s)) is byte-identical for serializer-produced input.
TraceBundle serialize_trace(const CodecTrace& trace, const std::string& residual_file_hint = "");

CodecTrace load_trace(const std::filesystem::path& path);
void save_trace(const CodecTrace& trace, const std::filesystem::path& path);

}  // namespace codecstream

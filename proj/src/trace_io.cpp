#include "codecstream/trace_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "codecstream/error.hpp"

namespace codecstream {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kTraceFormatVersion = 1;

ordered_json parse_line(const std::string& line, std::size_t line_no) {
    ordered_json record = ordered_json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
        throw Error(ErrorKind::malformed_record,
                    "line " + std::to_string(line_no) + ": not a record");
    }
    return record;
}

template <typename T>
T require(const ordered_json& record, const char* key, std::size_t line_no) {
    auto it = record.find(key);
    if (it == record.end()) {
        throw Error(ErrorKind::malformed_record,
                    "line " + std::to_string(line_no) + ": missing field '" + key + "'");
    }
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorKind::malformed_record,
                    "line " + std::to_string(line_no) + ": bad value for '" + key + "'");
    }
}

FrameType parse_frame_type(const std::string& s, std::size_t line_no) {
    if (s.size() != 1) {
        throw Error(ErrorKind::malformed_record,
                    "line " + std::to_string(line_no) + ": bad frame_type '" + s + "'");
    }
    return frame_type_from_char(s[0]);
}

}  // namespace

CodecTrace parse_trace(const std::string& text, const std::vector<std::uint8_t>& residual_blob) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw Error(ErrorKind::empty_trace, "no header record");
    }
    ++line_no;
    ordered_json header = parse_line(line, line_no);
    if (require<int>(header, "version", line_no) != kTraceFormatVersion) {
        throw Error(ErrorKind::malformed_record, "unsupported trace format version");
    }

    CodecTrace trace;
    trace.fps = require<double>(header, "fps", line_no);
    trace.width = require<int>(header, "width", line_no);
    trace.height = require<int>(header, "height", line_no);

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json record = parse_line(line, line_no);

        FrameTrace frame;
        frame.packet.frame_index = require<int>(record, "frame_index", line_no);
        frame.packet.frame_type =
            parse_frame_type(require<std::string>(record, "frame_type", line_no), line_no);
        frame.packet.pts_seconds = require<double>(record, "pts_seconds", line_no);
        frame.packet.byte_size = require<std::int64_t>(record, "byte_size", line_no);

        if (auto it = record.find("mv"); it != record.end()) {
            const ordered_json& mv_json = *it;
            MotionVectorField mv;
            mv.block_size_px = require<int>(mv_json, "block_size_px", line_no);
            mv.block_w = require<int>(mv_json, "block_w", line_no);
            mv.block_h = require<int>(mv_json, "block_h", line_no);
            auto flat = require<std::vector<double>>(mv_json, "vectors", line_no);
            if (flat.size() % 2 != 0) {
                throw Error(ErrorKind::malformed_record,
                            "line " + std::to_string(line_no) + ": odd mv vector list");
            }
            mv.vectors.reserve(flat.size() / 2);
            for (std::size_t i = 0; i + 1 < flat.size(); i += 2) {
                mv.vectors.push_back({flat[i], flat[i + 1]});
            }
            frame.mv = std::move(mv);
        }

        if (auto it = record.find("residual"); it != record.end()) {
            const ordered_json& res_json = *it;
            auto offset = require<std::uint64_t>(res_json, "offset", line_no);
            auto length = require<std::uint64_t>(res_json, "length", line_no);
            if (offset + length > residual_blob.size()) {
                throw Error(ErrorKind::malformed_record,
                            "line " + std::to_string(line_no) +
                                ": residual reference beyond companion blob");
            }
            if (length != static_cast<std::uint64_t>(trace.width) *
                              static_cast<std::uint64_t>(trace.height)) {
                throw Error(ErrorKind::dimension_mismatch,
                            "line " + std::to_string(line_no) +
                                ": residual length does not match frame dimensions");
            }
            ResidualPlane res;
            res.width = trace.width;
            res.height = trace.height;
            res.luma.assign(residual_blob.begin() + static_cast<std::ptrdiff_t>(offset),
                            residual_blob.begin() + static_cast<std::ptrdiff_t>(offset + length));
            frame.residual = std::move(res);
        }

        trace.frames.push_back(std::move(frame));
    }

    validate(trace);
    return trace;
}

TraceBundle serialize_trace(const CodecTrace& trace, const std::string& residual_file_hint) {
    validate(trace);

    TraceBundle bundle;
    bool any_residual = false;
    for (const FrameTrace& frame : trace.frames) {
        if (frame.residual) any_residual = true;
    }
    if (any_residual) {
        bundle.residual_file = residual_file_hint.empty() ? "trace.res" : residual_file_hint;
    }

    std::string out;
    ordered_json header;
    header["version"] = kTraceFormatVersion;
    header["fps"] = trace.fps;
    header["width"] = trace.width;
    header["height"] = trace.height;
    if (any_residual) header["residual_file"] = bundle.residual_file;
    out += header.dump();
    out += '\n';

    for (const FrameTrace& frame : trace.frames) {
        ordered_json record;
        record["frame_index"] = frame.packet.frame_index;
        record["frame_type"] = to_string(frame.packet.frame_type);
        record["pts_seconds"] = frame.packet.pts_seconds;
        record["byte_size"] = frame.packet.byte_size;
        if (frame.mv) {
            ordered_json mv_json;
            mv_json["block_size_px"] = frame.mv->block_size_px;
            mv_json["block_w"] = frame.mv->block_w;
            mv_json["block_h"] = frame.mv->block_h;
            std::vector<double> flat;
            flat.reserve(frame.mv->vectors.size() * 2);
            for (const MotionVector& v : frame.mv->vectors) {
                flat.push_back(v.dx);
                flat.push_back(v.dy);
            }
            mv_json["vectors"] = flat;
            record["mv"] = std::move(mv_json);
        }
        if (frame.residual) {
            ordered_json res_json;
            res_json["offset"] = bundle.residual_blob.size();
            res_json["length"] = frame.residual->luma.size();
            record["residual"] = std::move(res_json);
            bundle.residual_blob.insert(bundle.residual_blob.end(), frame.residual->luma.begin(),
                                        frame.residual->luma.end());
        }
        out += record.dump();
        out += '\n';
    }

    bundle.text = std::move(out);
    return bundle;
}

CodecTrace load_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::io_failure, "cannot open trace file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();

    // The companion residual file, when referenced, lives next to the trace.
    std::vector<std::uint8_t> blob;
    std::istringstream first_line_in(text);
    std::string first_line;
    if (std::getline(first_line_in, first_line)) {
        ordered_json header = ordered_json::parse(first_line, nullptr, false);
        if (header.is_object() && header.contains("residual_file")) {
            std::filesystem::path res_path =
                path.parent_path() / header["residual_file"].get<std::string>();
            std::ifstream res_in(res_path, std::ios::binary);
            if (!res_in) {
                throw Error(ErrorKind::io_failure,
                            "cannot open companion residual file " + res_path.string());
            }
            blob.assign(std::istreambuf_iterator<char>(res_in), std::istreambuf_iterator<char>());
        }
    }
    return parse_trace(text, blob);
}

void save_trace(const CodecTrace& trace, const std::filesystem::path& path) {
    std::filesystem::path res_name = path.filename();
    res_name.replace_extension(".res");
    TraceBundle bundle = serialize_trace(trace, res_name.string());

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io_failure, "cannot write trace file " + path.string());
    }
    out << bundle.text;
    out.close();

    if (!bundle.residual_file.empty()) {
        std::filesystem::path res_path = path.parent_path() / bundle.residual_file;
        std::ofstream res_out(res_path, std::ios::binary);
        if (!res_out) {
            throw Error(ErrorKind::io_failure, "cannot write residual file " + res_path.string());
        }
        res_out.write(reinterpret_cast<const char*>(bundle.residual_blob.data()),
                      static_cast<std::streamsize>(bundle.residual_blob.size()));
    }
}

}  // namespace codecstream

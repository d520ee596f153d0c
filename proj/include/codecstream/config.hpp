#pragma once

#include <cstdint>

#include <json.hpp>

#include "codecstream/gop.hpp"
#include "codecstream/packer.hpp"
#include "codecstream/saliency.hpp"

namespace codecstream {

// Everything a pipeline run depends on besides the trace itself. Persisted
// verbatim into every output header so a run can be reproduced exactly.
struct RunConfig {
    PartitionConfig partition;
    SaliencyConfig saliency;
    PackingConfig packing;
    std::uint64_t seed = 0;

    TokenizeConfig tokenize_config() const { return {partition, saliency, packing}; }
    void check() const;
};

nlohmann::ordered_json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::ordered_json& j);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace codecstream

#include "codecstream/config.hpp"

#include <fstream>

#include "codecstream/error.hpp"

namespace codecstream {

void RunConfig::check() const {
    partition.check();
    saliency.check();
    packing.check();
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["partition"] = {{"bin_duration_s", cfg.partition.bin_duration_s},
                      {"target_groups", cfg.partition.target_groups},
                      {"min_span_s", cfg.partition.min_span_s},
                      {"max_span_s", cfg.partition.max_span_s},
                      {"valley_window_bins", cfg.partition.valley_window_bins}};
    j["saliency"] = {{"percentile", cfg.saliency.percentile},
                     {"bitcost_prior_weight", cfg.saliency.bitcost_prior_weight}};
    j["packing"] = {{"lambda", cfg.packing.lambda},
                    {"alpha_peak", cfg.packing.alpha_peak},
                    {"canvas_blocks", cfg.packing.canvas_blocks},
                    {"p_canvases_total", cfg.packing.p_canvases_total},
                    {"patch_px", cfg.packing.patch_px}};
    j["seed"] = cfg.seed;
    return j;
}

namespace {

template <typename T>
void read_if_present(const nlohmann::ordered_json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) {
        try {
            out = it->get<T>();
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorKind::invalid_config, std::string("bad value for '") + key + "'");
        }
    }
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::ordered_json& j) {
    RunConfig cfg;
    if (auto it = j.find("partition"); it != j.end()) {
        read_if_present(*it, "bin_duration_s", cfg.partition.bin_duration_s);
        read_if_present(*it, "target_groups", cfg.partition.target_groups);
        read_if_present(*it, "min_span_s", cfg.partition.min_span_s);
        read_if_present(*it, "max_span_s", cfg.partition.max_span_s);
        read_if_present(*it, "valley_window_bins", cfg.partition.valley_window_bins);
    }
    if (auto it = j.find("saliency"); it != j.end()) {
        read_if_present(*it, "percentile", cfg.saliency.percentile);
        read_if_present(*it, "bitcost_prior_weight", cfg.saliency.bitcost_prior_weight);
    }
    if (auto it = j.find("packing"); it != j.end()) {
        read_if_present(*it, "lambda", cfg.packing.lambda);
        read_if_present(*it, "alpha_peak", cfg.packing.alpha_peak);
        read_if_present(*it, "canvas_blocks", cfg.packing.canvas_blocks);
        read_if_present(*it, "p_canvases_total", cfg.packing.p_canvases_total);
        read_if_present(*it, "patch_px", cfg.packing.patch_px);
    }
    read_if_present(j, "seed", cfg.seed);
    cfg.check();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io_failure, "cannot open config file " + path.string());
    }
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorKind::invalid_config, "config file is not a JSON object");
    }
    return run_config_from_json(j);
}

}  // namespace codecstream

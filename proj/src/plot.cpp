#include "codecstream/plot.hpp"

#include <algorithm>
#include <fstream>

#include "codecstream/error.hpp"

namespace codecstream {

ImageRgb ImageRgb::filled(int width, int height, std::uint8_t r, std::uint8_t g,
                          std::uint8_t b) {
    ImageRgb image;
    image.width = width;
    image.height = height;
    image.pixels.resize(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < image.pixels.size(); i += 3) {
        image.pixels[i] = r;
        image.pixels[i + 1] = g;
        image.pixels[i + 2] = b;
    }
    return image;
}

void ImageRgb::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    pixels[i] = r;
    pixels[i + 1] = g;
    pixels[i + 2] = b;
}

void ImageRgb::fill_rect(int x0, int y0, int x1, int y1, std::uint8_t r, std::uint8_t g,
                         std::uint8_t b) {
    for (int y = std::max(0, y0); y <= std::min(height - 1, y1); ++y) {
        for (int x = std::max(0, x0); x <= std::min(width - 1, x1); ++x) {
            set(x, y, r, g, b);
        }
    }
}

void write_ppm(const ImageRgb& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io_failure, "cannot write image " + path.string());
    }
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
}

void write_pgm(int width, int height, const std::vector<std::uint8_t>& gray,
               const std::filesystem::path& path) {
    if (gray.size() != static_cast<std::size_t>(width) * height) {
        throw Error(ErrorKind::dimension_mismatch, "gray buffer does not match dimensions");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io_failure, "cannot write image " + path.string());
    }
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(gray.data()),
              static_cast<std::streamsize>(gray.size()));
}

PlotData make_plot_data(const BinEnergies& energies, const GopPartition& partition) {
    PlotData data;
    data.bins = energies.energies;
    data.bin_duration_s = energies.bin_duration_s;
    data.theta = partition.quota;

    data.cumulative.assign(data.bins.size(), 0.0);
    for (const GopGroup& group : partition.groups) {
        double acc = 0.0;
        for (int b = group.start_bin; b <= group.end_bin && b < energies.bin_count(); ++b) {
            acc += static_cast<double>(data.bins[static_cast<std::size_t>(b)]);
            data.cumulative[static_cast<std::size_t>(b)] = acc;
        }
        data.boundaries.push_back(group.end_bin);
    }
    return data;
}

void write_plot_data(const PlotData& data, const RunConfig& cfg,
                     const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["kind"] = "plot_data";
    j["config"] = to_json(cfg);
    j["bin_duration_s"] = data.bin_duration_s;
    j["theta"] = data.theta;
    j["num_groups"] = data.boundaries.size();
    j["boundaries"] = data.boundaries;
    j["bins"] = data.bins;
    j["cumulative"] = data.cumulative;

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io_failure, "cannot write plot data " + path.string());
    }
    out << j.dump(2) << "\n";
}

ImageRgb render_plot(const PlotData& data) {
    const int bin_count = static_cast<int>(data.bins.size());
    const int bar_w = std::clamp(960 / std::max(1, bin_count), 1, 16);
    const int plot_w = std::max(320, bin_count * bar_w);
    const int panel_h = 180;
    const int gap = 24;
    const int width = plot_w + 40;
    const int height = panel_h * 2 + gap * 3;

    ImageRgb image = ImageRgb::filled(width, height, 255, 255, 255);

    const std::int64_t peak_bin = std::max<std::int64_t>(
        1, *std::max_element(data.bins.begin(), data.bins.end()));
    double peak_cum = data.theta;
    for (double c : data.cumulative) peak_cum = std::max(peak_cum, c);
    if (peak_cum <= 0.0) peak_cum = 1.0;

    const int top_base = gap + panel_h;
    const int bottom_base = gap * 2 + panel_h * 2;
    const int x0 = 20;

    // Top panel: per-bin bit-cost in blue.
    for (int b = 0; b < bin_count; ++b) {
        const int h = static_cast<int>(
            static_cast<double>(data.bins[static_cast<std::size_t>(b)]) / peak_bin * (panel_h - 4));
        image.fill_rect(x0 + b * bar_w, top_base - h, x0 + (b + 1) * bar_w - 1, top_base, 46,
                        110, 200);
    }

    // Bottom panel: cumulative per group in orange, quota line in red.
    for (int b = 0; b < bin_count; ++b) {
        const int h = static_cast<int>(data.cumulative[static_cast<std::size_t>(b)] / peak_cum *
                                       (panel_h - 4));
        image.fill_rect(x0 + b * bar_w, bottom_base - h, x0 + (b + 1) * bar_w - 1, bottom_base,
                        235, 150, 40);
    }
    if (data.theta > 0.0) {
        const int y = bottom_base - static_cast<int>(data.theta / peak_cum * (panel_h - 4));
        image.fill_rect(x0, y, x0 + plot_w - 1, y, 200, 30, 30);
    }

    // Boundaries in green, spanning both panels.
    for (int end_bin : data.boundaries) {
        const int x = x0 + (end_bin + 1) * bar_w - 1;
        image.fill_rect(x, gap, x, bottom_base, 40, 160, 60);
    }
    return image;
}

}  // namespace codecstream

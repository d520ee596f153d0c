#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "codecstream/config.hpp"
#include "codecstream/gop.hpp"

namespace codecstream {

// Minimal RGB raster with a PPM writer; enough for the grouping plot and
// schematic canvas renderings without an imaging dependency.
struct ImageRgb {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // 3 bytes per pixel, row-major

    static ImageRgb filled(int width, int height, std::uint8_t r, std::uint8_t g,
                           std::uint8_t b);
    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
    void fill_rect(int x0, int y0, int x1, int y1, std::uint8_t r, std::uint8_t g,
                   std::uint8_t b);
};

void write_ppm(const ImageRgb& image, const std::filesystem::path& path);
void write_pgm(int width, int height, const std::vector<std::uint8_t>& gray,
               const std::filesystem::path& path);

// Exact numbers behind the grouping figure: per-bin bit-cost, within-group
// cumulative bit-cost (resetting at each boundary), the quota line, and the
// group boundaries. Tests assert on this, not on pixels.
struct PlotData {
    std::vector<std::int64_t> bins;
    std::vector<double> cumulative;
    std::vector<int> boundaries;  // end bin of each group
    double theta = 0.0;
    double bin_duration_s = 1.0;
};

PlotData make_plot_data(const BinEnergies& energies, const GopPartition& partition);

void write_plot_data(const PlotData& data, const RunConfig& cfg,
                     const std::filesystem::path& path);

// Two-panel raster: bit-cost bars on top; cumulative-per-group curve,
// quota line, and boundary markers below.
ImageRgb render_plot(const PlotData& data);

}  // namespace codecstream

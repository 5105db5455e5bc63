#pragma once

#include <filesystem>
#include <string>

#include "smc/density.hpp"
#include "smc/simulator.hpp"

namespace smc
{
struct PlotOptions
{
  int width = 640;           ///< pixels, including the margin
  int heat_cells = 64;       ///< density raster resolution per axis
  int contour_cells = 128;   ///< marching-squares resolution per axis
  int contour_levels = 6;    ///< evenly spaced between 0 and the maximum density
  std::string title;
};

/// SVG image in the style of the coverage figures: density heatmap with
/// contours, one polyline per agent path (class "path"), a cross at each
/// initial position (class "start") and a circle at each final position
/// (class "end"). The output depends only on the inputs.
std::string render_plot(const Trajectory& traj, const GaussianMixture& density,
                        const PlotOptions& options = {});

void write_plot(const Trajectory& traj, const GaussianMixture& density,
                const std::filesystem::path& path, const PlotOptions& options = {});

}  // namespace smc

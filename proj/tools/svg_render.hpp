#pragma once

#include <filesystem>
#include <vector>

#include "aray/evolution.hpp"
#include "aray/geometry.hpp"
#include "aray/metrics.hpp"

namespace aray::cli {

struct ContourTrace {
    std::vector<double> initial;
    std::vector<std::vector<double>> intermediates;  // every k-th step
    RayContour final;
};

/// Overlay: shaded ground truth, dashed initial contours, thin
/// intermediates, bold finals. Coordinates are image pixels.
void render_overlay_svg(const std::filesystem::path& path, int width, int height,
                        const std::vector<Polygon>& gt_polygons,
                        const std::vector<ContourTrace>& traces);

/// Recall vs alignment-error plot for an AlignmentCurve.
void render_curve_svg(const std::filesystem::path& path, const AlignmentCurve& curve);

}  // namespace aray::cli

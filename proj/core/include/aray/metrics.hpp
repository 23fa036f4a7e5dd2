#pragma once

#include <utility>
#include <vector>

#include "aray/fields.hpp"
#include "aray/geometry.hpp"

namespace aray {

/// |a and b| / |a or b|; 1 when both masks are empty.
double iou(const Mask& a, const Mask& b);

/// Area-weighted mean over ground-truth instances of the best IoU achieved
/// by any prediction. An empty prediction list scores 0.
double weighted_coverage(const std::vector<Mask>& gt_instances,
                         const std::vector<Mask>& pred_instances);

/// Boundary F-score averaged over match thresholds of 1..5 px. Boundary
/// pixels are 4-adjacency boundaries; distances are exact Euclidean.
double boundf(const Mask& pred, const Mask& gt);

struct InstanceResult {
    double iou = 0.0;
    double gt_area = 0.0;
    double boundf = 0.0;
};

/// Recall of matched predicted boundary samples as a function of the
/// tangent alignment error 1 - |cos theta|.
struct AlignmentCurve {
    std::vector<std::pair<double, double>> points;  // (error, recall), sorted
    int total_gt_samples = 0;
    int matched_samples = 0;

    double recall_at(double error) const;
};

AlignmentCurve alignment_recall(const std::vector<RayContour>& pred_contours,
                                const std::vector<Polygon>& gt_polygons,
                                double match_threshold = 5.0);

/// Same computation with predictions given directly as polygons.
AlignmentCurve alignment_recall_polygons(const std::vector<Polygon>& pred_polygons,
                                         const std::vector<Polygon>& gt_polygons,
                                         double match_threshold = 5.0);

}  // namespace aray

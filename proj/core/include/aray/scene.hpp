#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "aray/fields.hpp"
#include "aray/geometry.hpp"
#include "aray/rng.hpp"

namespace aray {

/// Amplification applied to the data map when scenes are built. The raw
/// distance transform has unit-slope gradients, which at the default
/// dt = 2e-4 moves a contour well under a tenth of a pixel across a
/// 200-step run; scaling D up makes the default schedule traverse
/// desk-scale images while leaving the beta/kappa scaling untouched.
inline constexpr double kDefaultDataGain = 1000.0;

enum class ShapeKind { Convex, Star, UShape };

/// Image-less synthetic instance: ground-truth polygons on a W x H grid
/// plus the distance-transform energy fields built from their masks.
struct Scene {
    int width = 0;
    int height = 0;
    std::uint64_t seed = 0;
    double d_gain = kDefaultDataGain;
    double kappa_gain = 1.0;
    std::vector<Polygon> gt_polygons;
    FieldSet fields;
};

struct BBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;
};

/// Convex hull of n points sampled uniformly in bbox; re-samples until the
/// hull keeps at least 3 vertices and 4 px^2 of area. CCW output.
/// Throws DegenerateGeometryError after 100 attempts.
Polygon random_convex_polygon(Rng& rng, const BBox& bbox, int n_vertices);

/// Star polygon about `center`: vertices at sorted random angles with radii
/// uniform in [r_min, r_max]. Simple by construction.
Polygon random_star_polygon(Rng& rng, Point2 center, int n_vertices, double r_min, double r_max);

/// Upright U: outer rectangle minus a notch cut into the top edge.
Polygon u_shape_polygon(Point2 origin, double width, double height, double arm_width,
                        double notch_depth);

/// Non-overlapping instances (2 px separation), rasterized union, pretrain
/// fields. Throws PlacementError after 1000 placement attempts.
Scene build_scene(Rng& rng, int width, int height, int n_instances, ShapeKind kind,
                  double d_gain = kDefaultDataGain, double kappa_gain = 1.0);

/// Directory layout: scene.json plus d.arf / beta.arf / kappa.arf.
void save_scene(const Scene& scene, const std::filesystem::path& dir);
Scene load_scene(const std::filesystem::path& dir);

}  // namespace aray

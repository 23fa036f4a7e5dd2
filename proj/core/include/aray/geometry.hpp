#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "aray/errors.hpp"

namespace aray {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

/// Closed polygon; the last vertex connects back to the first.
/// Valid polygons are simple and counter-clockwise (signed area > 0).
struct Polygon {
    std::vector<Point2> vertices;
};

/// Polar contour: L rays at angles i * 2pi/L about a fixed center,
/// one radius per ray.
struct RayContour {
    Point2 center;
    std::vector<double> radii;

    int size() const { return static_cast<int>(radii.size()); }
    double delta_theta() const;
    double angle(int i) const { return i * delta_theta(); }
};

struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // row-major, 1 = foreground

    Mask() = default;
    Mask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    std::int64_t count() const;
};

// ---- contour <-> cartesian ----

/// Points center + rho_i * (cos i*dtheta, sin i*dtheta), i = 0..L-1.
std::vector<Point2> contour_points(const RayContour& contour);
Polygon contour_polygon(const RayContour& contour);

// ---- ray casting ----

/// Distance from an interior point to the first boundary hit along `angle`.
/// Multiple crossings resolve to the nearest one. Throws CenterOutsideError.
double ray_polygon_distance(const Polygon& polygon, Point2 center, double angle);

/// Radii at which rays at angles i * 2pi/L first hit the polygon boundary.
std::vector<double> ground_truth_rays(const Polygon& polygon, Point2 center, int l_rays);

/// Number of distinct boundary crossings of the ray (hits closer than
/// 1e-9 px are merged; a hit exactly on a vertex counts once).
int count_ray_crossings(const Polygon& polygon, Point2 center, double angle);

// ---- predicates & measures ----

bool is_simple(const Polygon& polygon);
bool is_convex(const Polygon& polygon);
double polygon_area(const Polygon& polygon);          // signed; > 0 for CCW
double polygon_perimeter(const Polygon& polygon);
bool point_in_polygon(Point2 p, const Polygon& polygon);  // even-odd rule

/// Distance from p to the nearest point of the polygon boundary.
double polygon_boundary_distance(Point2 p, const Polygon& polygon);

// ---- rasterization ----

/// Pixel (x, y) is foreground iff its center (x+0.5, y+0.5) is inside the
/// polygon under the even-odd rule.
Mask rasterize(const Polygon& polygon, int width, int height);

/// Foreground pixels with at least one 4-neighbor that is background or
/// outside the image.
Mask mask_boundary(const Mask& mask);

Mask mask_and(const Mask& a, const Mask& b);
Mask mask_or(const Mask& a, const Mask& b);
Mask mask_and_not(const Mask& a, const Mask& b);

}  // namespace aray

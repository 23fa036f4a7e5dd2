#include "aray/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace aray {

namespace {

constexpr double kOrientEps = 1e-12;   // orientation / parallelism tests
constexpr double kMergeEps = 1e-9;     // ray crossings closer than this merge

struct RayHit {
    double t;
};

// Collects parameters t > 0 where center + t*dir meets edge [p, q).
// The half-open convention makes a hit exactly on a shared vertex register
// on exactly one of the two incident edges.
void collect_edge_hits(Point2 center, Point2 dir, Point2 p, Point2 q,
                       std::vector<double>& out) {
    const Point2 e = q - p;
    const Point2 w = p - center;
    const double denom = cross(dir, e);
    if (std::abs(denom) <= kOrientEps) {
        // Parallel. Collinear overlap contributes the nearest endpoint ahead.
        if (std::abs(cross(w, dir)) <= kOrientEps) {
            const double tp = dot(w, dir);
            const double tq = dot(q - center, dir);
            for (double t : {tp, tq}) {
                if (t > kOrientEps) out.push_back(t);
            }
        }
        return;
    }
    const double t = cross(w, e) / denom;
    const double s = cross(w, dir) / denom;
    if (t > kOrientEps && s >= -kOrientEps && s < 1.0 - kOrientEps) {
        out.push_back(t);
    }
}

std::vector<double> ray_hits(const Polygon& polygon, Point2 center, double angle) {
    if (!point_in_polygon(center, polygon)) {
        throw CenterOutsideError("ray cast: center is not strictly inside the polygon");
    }
    const Point2 dir{std::cos(angle), std::sin(angle)};
    std::vector<double> hits;
    const auto& v = polygon.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        collect_edge_hits(center, dir, v[i], v[(i + 1) % n], hits);
    }
    std::sort(hits.begin(), hits.end());
    return hits;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 e = b - a;
    const double len2 = dot(e, e);
    if (len2 == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
    const double t = std::clamp(dot(p - a, e) / len2, 0.0, 1.0);
    const Point2 c = a + t * e;
    return std::hypot(p.x - c.x, p.y - c.y);
}

// Does [p1,q1] intersect [p2,q2] in any point, within kOrientEps?
bool segments_touch(Point2 p1, Point2 q1, Point2 p2, Point2 q2) {
    auto orient = [](Point2 a, Point2 b, Point2 c) {
        const double d = cross(b - a, c - a);
        if (d > kOrientEps) return 1;
        if (d < -kOrientEps) return -1;
        return 0;
    };
    const int o1 = orient(p1, q1, p2);
    const int o2 = orient(p1, q1, q2);
    const int o3 = orient(p2, q2, p1);
    const int o4 = orient(p2, q2, q1);
    if (o1 != o2 && o3 != o4) return true;

    auto on_segment = [](Point2 a, Point2 b, Point2 c) {
        return std::min(a.x, b.x) - kOrientEps <= c.x && c.x <= std::max(a.x, b.x) + kOrientEps &&
               std::min(a.y, b.y) - kOrientEps <= c.y && c.y <= std::max(a.y, b.y) + kOrientEps;
    };
    if (o1 == 0 && on_segment(p1, q1, p2)) return true;
    if (o2 == 0 && on_segment(p1, q1, q2)) return true;
    if (o3 == 0 && on_segment(p2, q2, p1)) return true;
    if (o4 == 0 && on_segment(p2, q2, q1)) return true;
    return false;
}

}  // namespace

double RayContour::delta_theta() const {
    return 2.0 * std::numbers::pi / static_cast<double>(radii.size());
}

std::int64_t Mask::count() const {
    std::int64_t n = 0;
    for (std::uint8_t b : bits) n += b;
    return n;
}

std::vector<Point2> contour_points(const RayContour& contour) {
    const int l_rays = contour.size();
    std::vector<Point2> pts(static_cast<std::size_t>(l_rays));
    const double dtheta = contour.delta_theta();
    for (int i = 0; i < l_rays; ++i) {
        const double a = i * dtheta;
        pts[i] = {contour.center.x + contour.radii[i] * std::cos(a),
                  contour.center.y + contour.radii[i] * std::sin(a)};
    }
    return pts;
}

Polygon contour_polygon(const RayContour& contour) {
    return Polygon{contour_points(contour)};
}

double ray_polygon_distance(const Polygon& polygon, Point2 center, double angle) {
    const auto hits = ray_hits(polygon, center, angle);
    if (hits.empty()) {
        // Impossible for an interior center of a bounded simple polygon.
        throw std::logic_error("ray cast: no boundary intersection from interior center");
    }
    return hits.front();
}

std::vector<double> ground_truth_rays(const Polygon& polygon, Point2 center, int l_rays) {
    std::vector<double> radii(static_cast<std::size_t>(l_rays));
    const double dtheta = 2.0 * std::numbers::pi / l_rays;
    for (int i = 0; i < l_rays; ++i) {
        radii[static_cast<std::size_t>(i)] = ray_polygon_distance(polygon, center, i * dtheta);
    }
    return radii;
}

int count_ray_crossings(const Polygon& polygon, Point2 center, double angle) {
    const auto hits = ray_hits(polygon, center, angle);
    int count = 0;
    double last = -1.0;
    for (double t : hits) {
        if (count == 0 || t - last > kMergeEps) {
            ++count;
            last = t;
        }
    }
    return count;
}

bool is_simple(const Polygon& polygon) {
    const auto& v = polygon.vertices;
    const std::size_t n = v.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 e = v[(i + 1) % n] - v[i];
        if (std::abs(e.x) <= kOrientEps && std::abs(e.y) <= kOrientEps) return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p1 = v[i];
        const Point2 q1 = v[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Point2 p2 = v[j];
            const Point2 q2 = v[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // Shared endpoint is fine; a fold-back onto the neighbor is not.
                const Point2 shared = (j == i + 1) ? q1 : p1;
                const Point2 a = (j == i + 1) ? p1 : q1;
                const Point2 b = (j == i + 1) ? q2 : p2;
                if (std::abs(cross(a - shared, b - shared)) <= kOrientEps &&
                    dot(a - shared, b - shared) > 0.0) {
                    return false;
                }
                continue;
            }
            if (segments_touch(p1, q1, p2, q2)) return false;
        }
    }
    return true;
}

bool is_convex(const Polygon& polygon) {
    const auto& v = polygon.vertices;
    const std::size_t n = v.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = v[i];
        const Point2 b = v[(i + 1) % n];
        const Point2 c = v[(i + 2) % n];
        if (cross(b - a, c - b) < -kOrientEps) return false;
    }
    return true;
}

double polygon_area(const Polygon& polygon) {
    const auto& v = polygon.vertices;
    const std::size_t n = v.size();
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        twice += cross(v[i], v[(i + 1) % n]);
    }
    return 0.5 * twice;
}

double polygon_perimeter(const Polygon& polygon) {
    const auto& v = polygon.vertices;
    const std::size_t n = v.size();
    double len = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        len += norm(v[(i + 1) % n] - v[i]);
    }
    return len;
}

bool point_in_polygon(Point2 p, const Polygon& polygon) {
    const auto& v = polygon.vertices;
    const std::size_t n = v.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((v[i].y > p.y) != (v[j].y > p.y)) {
            const double x_int = v[i].x + (p.y - v[i].y) * (v[j].x - v[i].x) / (v[j].y - v[i].y);
            if (p.x < x_int) inside = !inside;
        }
    }
    return inside;
}

double polygon_boundary_distance(Point2 p, const Polygon& polygon) {
    const auto& v = polygon.vertices;
    const std::size_t n = v.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best, point_segment_distance(p, v[i], v[(i + 1) % n]));
    }
    return best;
}

Mask rasterize(const Polygon& polygon, int width, int height) {
    Mask mask(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            mask.set(x, y, point_in_polygon({x + 0.5, y + 0.5}, polygon));
        }
    }
    return mask;
}

Mask mask_boundary(const Mask& mask) {
    Mask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            const bool edge = (x == 0 || !mask.at(x - 1, y)) || (x == mask.width - 1 || !mask.at(x + 1, y)) ||
                              (y == 0 || !mask.at(x, y - 1)) || (y == mask.height - 1 || !mask.at(x, y + 1));
            out.set(x, y, edge);
        }
    }
    return out;
}

namespace {
void require_same_dims(const Mask& a, const Mask& b) {
    if (a.width != b.width || a.height != b.height) {
        throw DimensionMismatchError("mask dimensions differ");
    }
}
}  // namespace

Mask mask_and(const Mask& a, const Mask& b) {
    require_same_dims(a, b);
    Mask out(a.width, a.height);
    for (std::size_t i = 0; i < a.bits.size(); ++i) out.bits[i] = a.bits[i] & b.bits[i];
    return out;
}

Mask mask_or(const Mask& a, const Mask& b) {
    require_same_dims(a, b);
    Mask out(a.width, a.height);
    for (std::size_t i = 0; i < a.bits.size(); ++i) out.bits[i] = a.bits[i] | b.bits[i];
    return out;
}

Mask mask_and_not(const Mask& a, const Mask& b) {
    require_same_dims(a, b);
    Mask out(a.width, a.height);
    for (std::size_t i = 0; i < a.bits.size(); ++i) out.bits[i] = a.bits[i] & static_cast<std::uint8_t>(1 - b.bits[i]);
    return out;
}

}  // namespace aray

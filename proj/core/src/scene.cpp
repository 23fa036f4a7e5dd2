#include "aray/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "aray/io.hpp"

namespace aray {

namespace {

// Andrew monotone chain; returns CCW hull.
std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return {};
    std::vector<Point2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace

Polygon random_convex_polygon(Rng& rng, const BBox& bbox, int n_vertices) {
    if (n_vertices < 3) throw Error("random_convex_polygon: need at least 3 vertices");
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Point2> pts(static_cast<std::size_t>(n_vertices));
        for (auto& p : pts) {
            p = {rng.uniform(bbox.min_x, bbox.max_x), rng.uniform(bbox.min_y, bbox.max_y)};
        }
        Polygon poly{convex_hull(std::move(pts))};
        if (poly.vertices.size() >= 3 && polygon_area(poly) >= 4.0) return poly;
    }
    throw DegenerateGeometryError("random_convex_polygon: no usable hull after 100 attempts");
}

Polygon random_star_polygon(Rng& rng, Point2 center, int n_vertices, double r_min, double r_max) {
    if (n_vertices < 5) throw Error("random_star_polygon: need at least 5 vertices");
    // One jittered angle per sector keeps every cyclic gap under pi, so the
    // center stays interior and the radius stays single-valued per angle.
    const double sector = 2.0 * std::numbers::pi / n_vertices;
    Polygon poly;
    poly.vertices.reserve(static_cast<std::size_t>(n_vertices));
    for (int i = 0; i < n_vertices; ++i) {
        const double a = (i + 0.95 * rng.uniform()) * sector;
        const double r = rng.uniform(r_min, r_max);
        poly.vertices.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
    }
    return poly;
}

Polygon u_shape_polygon(Point2 origin, double width, double height, double arm_width,
                        double notch_depth) {
    const double x0 = origin.x;
    const double y0 = origin.y;
    const double x1 = x0 + width;
    const double y1 = y0 + height;
    const double nx0 = x0 + arm_width;
    const double nx1 = x1 - arm_width;
    const double ny = y1 - notch_depth;
    // CCW by signed area; the notch opens toward larger y.
    Polygon poly{{{x0, y0}, {x1, y0}, {x1, y1}, {nx1, y1}, {nx1, ny}, {nx0, ny}, {nx0, y1}, {x0, y1}}};
    if (polygon_area(poly) < 0.0) {
        std::reverse(poly.vertices.begin(), poly.vertices.end());
    }
    return poly;
}

Scene build_scene(Rng& rng, int width, int height, int n_instances, ShapeKind kind,
                  double d_gain, double kappa_gain) {
    if (n_instances < 1) throw Error("build_scene: need at least one instance");
    constexpr double kMargin = 2.0;
    constexpr double kSeparation = 2.0;

    Scene scene;
    scene.width = width;
    scene.height = height;
    scene.d_gain = d_gain;
    scene.kappa_gain = kappa_gain;

    Mask occupied(width, height);
    for (int placed = 0; placed < n_instances; ++placed) {
        bool ok = false;
        for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
            // Shrink targets when several instances must fit.
            const double span = std::min(width, height) - 2.0 * kMargin;
            const double target = n_instances == 1 ? span : span / (1.0 + 0.7 * n_instances);
            const double radius = rng.uniform(0.35 * target, 0.5 * target);
            const Point2 c{rng.uniform(kMargin + radius, width - kMargin - radius),
                           rng.uniform(kMargin + radius, height - kMargin - radius)};
            Polygon poly;
            try {
            switch (kind) {
                case ShapeKind::Convex: {
                    const BBox box{c.x - radius, c.y - radius, c.x + radius, c.y + radius};
                    poly = random_convex_polygon(rng, box, 12);
                    break;
                }
                case ShapeKind::Star:
                    poly = random_star_polygon(rng, c, 9, 0.55 * radius, radius);
                    break;
                case ShapeKind::UShape: {
                    const double w = 2.0 * radius;
                    const double h = rng.uniform(1.2 * radius, 1.9 * radius);
                    const double arm = rng.uniform(0.28 * w, 0.36 * w);
                    const double notch = rng.uniform(0.45 * h, 0.7 * h);
                    poly = u_shape_polygon({c.x - radius, c.y - 0.5 * h}, w, h, arm, notch);
                    break;
                }
            }
            } catch (const DegenerateGeometryError&) {
                continue;  // cramped layout; spend another placement attempt
            }
            if (polygon_area(poly) < 16.0) continue;

            const Mask mask = rasterize(poly, width, height);
            if (mask.count() < 16) continue;
            bool clear = true;
            if (occupied.count() > 0) {
                const ScalarField dist = distance_transform(occupied);
                for (int y = 0; y < height && clear; ++y) {
                    for (int x = 0; x < width; ++x) {
                        if (mask.at(x, y) && dist.at(x, y) < kSeparation) {
                            clear = false;
                            break;
                        }
                    }
                }
            }
            if (!clear) continue;
            occupied = mask_or(occupied, mask);
            scene.gt_polygons.push_back(std::move(poly));
            ok = true;
        }
        if (!ok) throw PlacementError("build_scene: could not place instance without overlap");
    }

    scene.fields = build_pretrain_fields(occupied, mask_boundary(occupied), d_gain, kappa_gain);
    return scene;
}

void save_scene(const Scene& scene, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json root;
    root["width"] = scene.width;
    root["height"] = scene.height;
    root["seed"] = scene.seed;
    root["d_gain"] = scene.d_gain;
    root["kappa_gain"] = scene.kappa_gain;
    nlohmann::json polys = nlohmann::json::array();
    for (const Polygon& poly : scene.gt_polygons) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Point2& p : poly.vertices) arr.push_back({p.x, p.y});
        polys.push_back(std::move(arr));
    }
    root["polygons"] = std::move(polys);
    write_file_atomic(dir / "scene.json", root.dump(2) + "\n");
    write_arf(scene.fields.d, dir / "d.arf");
    write_arf(scene.fields.beta, dir / "beta.arf");
    write_arf(scene.fields.kappa, dir / "kappa.arf");
}

Scene load_scene(const std::filesystem::path& dir) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(read_file(dir / "scene.json"));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad scene.json: " + std::string(e.what()));
    }
    Scene scene;
    try {
        scene.width = root.at("width").get<int>();
        scene.height = root.at("height").get<int>();
        scene.seed = root.at("seed").get<std::uint64_t>();
        scene.d_gain = root.value("d_gain", kDefaultDataGain);
        scene.kappa_gain = root.value("kappa_gain", 1.0);
        for (const auto& arr : root.at("polygons")) {
            Polygon poly;
            for (const auto& pair : arr) {
                poly.vertices.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
            }
            scene.gt_polygons.push_back(std::move(poly));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad scene.json: " + std::string(e.what()));
    }
    if (scene.width < 1 || scene.height < 1) throw IoError("scene: bad dimensions");

    ScalarField d = read_arf(dir / "d.arf");
    ScalarField beta = read_arf(dir / "beta.arf");
    ScalarField kappa = read_arf(dir / "kappa.arf");
    if (d.width != scene.width || d.height != scene.height) {
        throw IoError("scene: field dimensions disagree with scene.json");
    }
    scene.fields = FieldSet::from_maps(std::move(d), std::move(beta), std::move(kappa));

    for (const Polygon& poly : scene.gt_polygons) {
        if (poly.vertices.size() < 3 || !is_simple(poly) || polygon_area(poly) <= 0.0) {
            throw IoError("scene: invalid ground-truth polygon");
        }
        for (const Point2& p : poly.vertices) {
            if (!(p.x >= 2.0 && p.y >= 2.0 && p.x <= scene.width - 2.0 &&
                  p.y <= scene.height - 2.0)) {
                throw IoError("scene: polygon violates the 2 px margin");
            }
        }
    }
    for (const ScalarField* field : {&scene.fields.d, &scene.fields.beta, &scene.fields.kappa}) {
        for (double v : field->values) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw IoError("scene: field values must be finite and non-negative");
        }
    }
    return scene;
}

}  // namespace aray

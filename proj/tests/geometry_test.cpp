#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aray/geometry.hpp"
#include "aray/metrics.hpp"
#include "aray/rng.hpp"
#include "aray/scene.hpp"
#include "oracles.hpp"

using namespace aray;

namespace {

Polygon square(double half) {
    return Polygon{{{-half, -half}, {half, -half}, {half, half}, {-half, half}}};
}

Polygon regular_ngon(Point2 c, double r, int n) {
    Polygon poly;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n;
        poly.vertices.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
    return poly;
}

// Arms along +y, base at low y; a ray across the notch crosses three walls.
Polygon u_fixture() {
    return Polygon{{{0, 0}, {4, 0}, {4, 4}, {3, 4}, {3, 1}, {1, 1}, {1, 4}, {0, 4}}};
}

Point2 interior_point(const Polygon& poly, Rng& rng) {
    double min_x = poly.vertices[0].x, max_x = min_x, min_y = poly.vertices[0].y, max_y = min_y;
    for (const Point2& v : poly.vertices) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_y = std::min(min_y, v.y);
        max_y = std::max(max_y, v.y);
    }
    while (true) {
        const Point2 p{rng.uniform(min_x, max_x), rng.uniform(min_y, max_y)};
        if (point_in_polygon(p, poly) && polygon_boundary_distance(p, poly) > 1e-6) return p;
    }
}

}  // namespace

TEST_CASE("contour_points places rays at equally spaced angles") {
    RayContour c4{{0, 0}, {2, 3, 4, 5}};
    const auto pts = contour_points(c4);
    CHECK(pts[0].x == doctest::Approx(2).epsilon(1e-12));
    CHECK(pts[0].y == doctest::Approx(0).epsilon(1e-12));
    CHECK(pts[1].x == doctest::Approx(0).epsilon(1e-12));
    CHECK(pts[1].y == doctest::Approx(3).epsilon(1e-12));
    CHECK(pts[2].x == doctest::Approx(-4).epsilon(1e-12));
    CHECK(pts[2].y == doctest::Approx(0).epsilon(1e-12));
    CHECK(pts[3].x == doctest::Approx(0).epsilon(1e-12));
    CHECK(pts[3].y == doctest::Approx(-5).epsilon(1e-12));

    RayContour hex{{10, 10}, std::vector<double>(6, 1.0)};
    for (const Point2& p : contour_points(hex)) {
        CHECK(norm(p - Point2{10, 10}) == doctest::Approx(1.0).epsilon(1e-12));
    }

    RayContour circ{{0, 0}, std::vector<double>(60, 7.5)};
    for (const Point2& p : contour_points(circ)) {
        CHECK(norm(p) == doctest::Approx(7.5).epsilon(1e-12));
    }
}

TEST_CASE("ray_polygon_distance on the unit square") {
    const Polygon sq = square(1.0);
    CHECK(ray_polygon_distance(sq, {0, 0}, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ray_polygon_distance(sq, {0, 0}, std::numbers::pi / 4) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(ray_polygon_distance(sq, {5, 5}, 0.0), CenterOutsideError);
}

TEST_CASE("ray_polygon_distance takes the nearest of multiple crossings") {
    // L-shaped region; rays from the vertical arm across the notch cross
    // the boundary three times and must resolve to the first hit.
    const Polygon ell{{{0, 0}, {4, 0}, {4, 1}, {1, 1}, {1, 4}, {0, 4}}};
    REQUIRE(is_simple(ell));
    struct Case {
        Point2 center;
        Point2 toward;
    };
    for (const Case& tc : {Case{{0.5, 3.0}, {2.5, 0.5}},
                           Case{{0.5, 3.8}, {3.5, 0.2}},
                           Case{{0.3, 2.2}, {3.9, 0.4}}}) {
        const double angle = std::atan2(tc.toward.y - tc.center.y, tc.toward.x - tc.center.x);
        REQUIRE(count_ray_crossings(ell, tc.center, angle) == 3);
        const double got = ray_polygon_distance(ell, tc.center, angle);
        const double want = oracles::dense_ray_distance(ell, tc.center, angle);
        CHECK(std::abs(got - want) <= 1e-3);
        // exact first hit: the x = 1 wall of the vertical arm
        const double exact = (1.0 - tc.center.x) / std::cos(angle);
        CHECK(got == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("ground_truth_rays on squares") {
    const Polygon sq = square(1.0);
    const auto r4 = ground_truth_rays(sq, {0, 0}, 4);
    for (double r : r4) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
    const auto r8 = ground_truth_rays(sq, {0, 0}, 8);
    for (int i = 0; i < 8; ++i) {
        const double want = (i % 2 == 0) ? 1.0 : std::sqrt(2.0);
        CHECK(r8[static_cast<std::size_t>(i)] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("ground_truth_rays reconstructs convex boundaries") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Polygon poly = random_convex_polygon(rng, {10, 10, 50, 50}, 10);
        const Point2 c = interior_point(poly, rng);
        RayContour contour{c, ground_truth_rays(poly, c, 60)};
        for (const Point2& p : contour_points(contour)) {
            CHECK(polygon_boundary_distance(p, poly) < 1e-6);
        }
    }
}

TEST_CASE("count_ray_crossings") {
    const Polygon pent = regular_ngon({0, 0}, 2.0, 5);
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        CHECK(count_ray_crossings(pent, {0.3, -0.2}, angle) == 1);
    }
    CHECK(count_ray_crossings(square(1.0), {0, 0}, 0.0) == 1);

    const Polygon u = u_fixture();
    const Point2 arm_center{0.5, 2.0};
    CHECK(count_ray_crossings(u, arm_center, 0.0) == 3);
    CHECK(count_ray_crossings(u, arm_center, 0.0) ==
          oracles::exhaustive_ray_crossings(u, arm_center, 0.0));
}

TEST_CASE("is_simple") {
    CHECK(is_simple(Polygon{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}}));
    CHECK_FALSE(is_simple(Polygon{{{0, 0}, {2, 2}, {2, 0}, {0, 2}}}));  // bowtie
    CHECK_FALSE(is_simple(Polygon{{{0, 0}, {1, 0}}}));
}

TEST_CASE("ray contours are simple polygons") {
    Rng rng(13);
    for (int trial = 0; trial < 1000; ++trial) {
        const int l_rays = 5 + static_cast<int>(rng.uniform_int(60));
        RayContour c{{0, 0}, {}};
        c.radii.reserve(static_cast<std::size_t>(l_rays));
        for (int i = 0; i < l_rays; ++i) c.radii.push_back(rng.uniform(0.5, 40.0));
        CHECK(is_simple(contour_polygon(c)));
    }
}

TEST_CASE("rasterize uses pixel centers with the even-odd rule") {
    const Polygon sq{{{0, 0}, {4, 0}, {4, 4}, {0, 4}}};
    CHECK(rasterize(sq, 8, 8).count() == 16);

    const Polygon sliver{{{0, 0.1}, {8, 0.1}, {8, 0.2}, {0, 0.2}}};
    CHECK(rasterize(sliver, 8, 8).count() == 0);

    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Polygon poly = random_convex_polygon(rng, {5, 5, 58, 58}, 9);
        const double analytic = polygon_area(poly);
        const double raster = static_cast<double>(rasterize(poly, 64, 64).count());
        CHECK(std::abs(raster - analytic) <= 2.0 * polygon_perimeter(poly));
    }
}

TEST_CASE("rasterize is deterministic") {
    Rng rng(17);
    const Polygon poly = random_convex_polygon(rng, {4, 4, 44, 44}, 8);
    const Mask a = rasterize(poly, 48, 48);
    const Mask b = rasterize(poly, 48, 48);
    CHECK(a.bits == b.bits);
}

TEST_CASE("area, containment, convexity") {
    const Polygon unit{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
    CHECK(polygon_area(unit) == doctest::Approx(1.0));
    CHECK(point_in_polygon({0, 0}, square(1.0)));
    CHECK(is_convex(regular_ngon({0, 0}, 3.0, 6)));
    CHECK_FALSE(is_convex(u_fixture()));
}

TEST_CASE("single-crossing property for convex polygons") {
    Rng rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        const Polygon poly = random_convex_polygon(rng, {0, 0, 100, 100}, 3 + static_cast<int>(rng.uniform_int(10)));
        const Point2 c = interior_point(poly, rng);
        for (int i = 0; i < 16; ++i) {
            const double angle = 2.0 * std::numbers::pi * i / 16;
            REQUIRE(count_ray_crossings(poly, c, angle) == 1);
        }
    }
}

TEST_CASE("hexagon reconstruction IoU at L=60") {
    const Polygon hex = regular_ngon({128, 128}, 80.0, 6);
    const Point2 c{128, 128};
    RayContour contour{c, ground_truth_rays(hex, c, 60)};
    const double value = iou(rasterize(hex, 256, 256), rasterize(contour_polygon(contour), 256, 256));
    CHECK(value >= 0.99);
}

#include <doctest.h>

#include <filesystem>

#include "aray/io.hpp"
#include "aray/scene.hpp"
#include "oracles.hpp"

using namespace aray;

namespace {

std::filesystem::path temp_dir(const char* tag) {
    const auto dir =
        std::filesystem::temp_directory_path() / (std::string("aray_test_") + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("random convex polygons are convex, simple, CCW") {
    Rng rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const Polygon p = random_convex_polygon(rng, {4, 4, 60, 60}, 3 + static_cast<int>(rng.uniform_int(12)));
        REQUIRE(is_convex(p));
        REQUIRE(is_simple(p));
        REQUIRE(polygon_area(p) > 0.0);
    }
}

TEST_CASE("random convex polygon is deterministic per seed") {
    Rng a(77), b(77);
    const Polygon pa = random_convex_polygon(a, {0, 0, 50, 50}, 9);
    const Polygon pb = random_convex_polygon(b, {0, 0, 50, 50}, 9);
    REQUIRE(pa.vertices.size() == pb.vertices.size());
    for (std::size_t i = 0; i < pa.vertices.size(); ++i) {
        CHECK(pa.vertices[i].x == pb.vertices[i].x);
        CHECK(pa.vertices[i].y == pb.vertices[i].y);
    }
}

TEST_CASE("star polygons are simple and hit their vertex radii") {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const Point2 c{32, 32};
        const Polygon p = random_star_polygon(rng, c, 5 + static_cast<int>(rng.uniform_int(8)), 4.0, 12.0);
        REQUIRE(is_simple(p));
        for (const Point2& v : p.vertices) {
            const double angle = std::atan2(v.y - c.y, v.x - c.x);
            const double r = norm(v - c);
            CHECK(std::abs(ray_polygon_distance(p, c, angle) - r) <= 1e-9);
        }
    }

    Polygon regular = random_star_polygon(rng, {0, 0}, 7, 5.0, 5.0);
    for (const Point2& v : regular.vertices) {
        CHECK(norm(v) == doctest::Approx(5.0).epsilon(1e-12));
    }
}

TEST_CASE("u-shape fixture is simple, non-convex, CCW") {
    const Polygon u = u_shape_polygon({10, 10}, 40, 30, 12, 18);
    CHECK(is_simple(u));
    CHECK_FALSE(is_convex(u));
    CHECK(polygon_area(u) > 0.0);
}

TEST_CASE("build_scene invariants") {
    Rng rng(6);
    const Scene scene = build_scene(rng, 64, 64, 1, ShapeKind::Convex);
    REQUIRE(scene.gt_polygons.size() == 1);

    // D vanishes exactly on the boundary pixels of the union mask
    const Mask m = rasterize(scene.gt_polygons[0], 64, 64);
    const Mask b = mask_boundary(m);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            if (b.at(x, y)) {
                REQUIRE(scene.fields.d.at(x, y) == 0.0);
            } else {
                REQUIRE(scene.fields.d.at(x, y) > 0.0);
            }
        }
    }
}

TEST_CASE("scene generator soak") {
    for (int k = 0; k < 100; ++k) {
        Rng rng(1000 + static_cast<std::uint64_t>(k));
        const ShapeKind kind = k % 3 == 0   ? ShapeKind::Convex
                               : k % 3 == 1 ? ShapeKind::Star
                                            : ShapeKind::UShape;
        const int instances = 1 + k % 2;
        const Scene scene = build_scene(rng, 64, 64, instances, kind);
        REQUIRE(static_cast<int>(scene.gt_polygons.size()) == instances);
        for (const Polygon& p : scene.gt_polygons) {
            REQUIRE(is_simple(p));
            REQUIRE(polygon_area(p) > 0.0);
            for (const Point2& v : p.vertices) {
                REQUIRE(v.x >= 2.0);
                REQUIRE(v.y >= 2.0);
                REQUIRE(v.x <= 62.0);
                REQUIRE(v.y <= 62.0);
            }
        }
        // masks stay disjoint
        if (instances == 2) {
            const Mask m0 = rasterize(scene.gt_polygons[0], 64, 64);
            const Mask m1 = rasterize(scene.gt_polygons[1], 64, 64);
            REQUIRE(mask_and(m0, m1).count() == 0);
        }
        // kappa vanishes outside, beta strictly inside
        const Mask all = [&] {
            Mask acc(64, 64);
            for (const Polygon& p : scene.gt_polygons) acc = mask_or(acc, rasterize(p, 64, 64));
            return acc;
        }();
        const Mask bnd = mask_boundary(all);
        for (int y = 0; y < 64; ++y) {
            for (int x = 0; x < 64; ++x) {
                if (!all.at(x, y)) REQUIRE(scene.fields.kappa.at(x, y) == 0.0);
                if (all.at(x, y) && !bnd.at(x, y)) REQUIRE(scene.fields.beta.at(x, y) == 0.0);
            }
        }
    }
}

TEST_CASE("impossible placement throws") {
    Rng rng(8);
    CHECK_THROWS_AS(build_scene(rng, 16, 16, 12, ShapeKind::Convex), PlacementError);
}

TEST_CASE("scene round-trip is byte-identical") {
    Rng rng(10);
    Scene scene = build_scene(rng, 48, 48, 2, ShapeKind::Star);
    scene.seed = 4242;

    const auto dir1 = temp_dir("scene_a");
    const auto dir2 = temp_dir("scene_b");
    save_scene(scene, dir1);
    const Scene loaded = load_scene(dir1);
    save_scene(loaded, dir2);

    for (const char* name : {"scene.json", "d.arf", "beta.arf", "kappa.arf"}) {
        CHECK(read_file(dir1 / name) == read_file(dir2 / name));
    }
    CHECK(loaded.seed == scene.seed);
    CHECK(loaded.gt_polygons.size() == scene.gt_polygons.size());
    CHECK(loaded.fields.d.values == scene.fields.d.values);
    CHECK(loaded.fields.d_grad_x.values == scene.fields.d_grad_x.values);

    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

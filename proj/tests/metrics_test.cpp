#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aray/metrics.hpp"
#include "aray/rng.hpp"
#include "oracles.hpp"

using namespace aray;

namespace {

Mask rect_mask(int w, int h, int x0, int y0, int x1, int y1) {
    Mask m(w, h);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) m.set(x, y, true);
    }
    return m;
}

Polygon square_at(Point2 c, double half, double angle = 0.0) {
    Polygon p;
    for (int i = 0; i < 4; ++i) {
        const double a = angle + std::numbers::pi * (0.25 + 0.5 * i);
        p.vertices.push_back({c.x + half * std::numbers::sqrt2 * std::cos(a),
                              c.y + half * std::numbers::sqrt2 * std::sin(a)});
    }
    return p;
}

}  // namespace

TEST_CASE("iou basics and properties") {
    const Mask a = rect_mask(8, 8, 1, 1, 4, 4);
    CHECK(iou(a, a) == 1.0);
    CHECK(iou(rect_mask(8, 8, 0, 0, 2, 2), rect_mask(8, 8, 4, 4, 6, 6)) == 0.0);
    CHECK(iou(Mask(5, 5), Mask(5, 5)) == 1.0);  // both empty
    CHECK(iou(rect_mask(8, 8, 0, 0, 2, 1), rect_mask(8, 8, 1, 0, 3, 1)) ==
          doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(iou(Mask(4, 4), Mask(5, 5)), DimensionMismatchError);

    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Mask m(10, 10), n(10, 10);
        for (auto& b : m.bits) b = rng.uniform() < 0.4;
        for (auto& b : n.bits) b = rng.uniform() < 0.4;
        CHECK(iou(m, n) == iou(n, m));
        const double before = iou(m, n);
        Mask shrunk = n;  // drop one intersection pixel
        for (std::size_t i = 0; i < shrunk.bits.size(); ++i) {
            if (m.bits[i] && shrunk.bits[i]) {
                shrunk.bits[i] = 0;
                break;
            }
        }
        CHECK(iou(m, shrunk) <= before + 1e-15);
    }
}

TEST_CASE("weighted coverage") {
    const Mask g1 = rect_mask(16, 16, 0, 0, 5, 2);    // area 10
    const Mask g2 = rect_mask(16, 16, 0, 4, 10, 7);   // area 30
    const Mask p1 = g1;                                // IoU 1 with g1
    const Mask p2 = rect_mask(16, 16, 0, 5, 10, 8);   // IoU 0.5 with g2
    CHECK(iou(g2, p2) == doctest::Approx(0.5));
    CHECK(weighted_coverage({g1, g2}, {p1, p2}) == doctest::Approx(0.625));
    CHECK(weighted_coverage({g1, g2}, {g1, g2}) == 1.0);
    CHECK(weighted_coverage({g1, g2}, {}) == 0.0);

    // equal areas: reduces to the plain mean of best IoUs
    const Mask g3 = rect_mask(16, 16, 0, 10, 5, 12);
    CHECK(weighted_coverage({g1, g3}, {p1}) ==
          doctest::Approx(0.5 * (iou(g1, p1) + iou(g3, p1))));

    // stays within [0, 1] for arbitrary masks
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        Mask ga(12, 12), gb(12, 12), pa(12, 12);
        for (auto& v : ga.bits) v = rng.uniform() < 0.4;
        for (auto& v : gb.bits) v = rng.uniform() < 0.4;
        for (auto& v : pa.bits) v = rng.uniform() < 0.4;
        const double w = weighted_coverage({ga, gb}, {pa});
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
    }
}

TEST_CASE("boundf identity, separation, and symmetry") {
    const Mask sq = rect_mask(64, 64, 20, 20, 40, 40);
    CHECK(boundf(sq, sq) == 1.0);
    // boundaries at least 6 px apart everywhere
    CHECK(boundf(rect_mask(64, 64, 2, 2, 10, 10), rect_mask(64, 64, 30, 30, 60, 60)) == 0.0);

    Rng rng(5);
    Mask a(24, 24), b(24, 24);
    for (auto& v : a.bits) v = rng.uniform() < 0.3;
    for (auto& v : b.bits) v = rng.uniform() < 0.3;
    CHECK(boundf(a, b) == doctest::Approx(boundf(b, a)).epsilon(1e-15));
}

TEST_CASE("boundf matches the brute-force oracle on a dilation fixture") {
    const Mask inner = rect_mask(64, 64, 22, 22, 42, 42);
    const Mask dilated = rect_mask(64, 64, 20, 20, 44, 44);  // grown by 2 px
    const double got = boundf(dilated, inner);
    const double want = oracles::brute_force_boundf(dilated, inner);
    CHECK(std::abs(got - want) <= 1e-9);
    CHECK(got < 1.0);
    CHECK(got > 0.0);
}

TEST_CASE("alignment recall on identical geometry") {
    const std::vector<Polygon> gt{square_at({32, 32}, 10.0)};
    const AlignmentCurve curve = alignment_recall_polygons(gt, gt);
    CHECK(curve.matched_samples == curve.total_gt_samples);
    CHECK(curve.recall_at(1e-12) == doctest::Approx(1.0));
}

TEST_CASE("alignment recall with everything out of range") {
    const std::vector<Polygon> gt{square_at({16, 16}, 6.0)};
    const std::vector<Polygon> pred{square_at({52, 52}, 6.0)};
    const AlignmentCurve curve = alignment_recall_polygons(pred, gt);
    CHECK(curve.matched_samples == 0);
    CHECK(curve.recall_at(1.0) == 0.0);

    CHECK_THROWS_AS(alignment_recall_polygons({}, gt), EmptyInputError);
}

TEST_CASE("rotated square concentrates at 1 - cos 45 degrees") {
    const std::vector<Polygon> gt{square_at({48, 48}, 20.0)};
    const std::vector<Polygon> pred{square_at({48, 48}, 20.0, std::numbers::pi / 4.0)};
    const AlignmentCurve curve = alignment_recall_polygons(pred, gt);
    REQUIRE(curve.matched_samples > 0);
    const double target = 1.0 - std::cos(std::numbers::pi / 4.0);
    const double inside_window =
        curve.recall_at(target + 1e-3) - curve.recall_at(target - 1e-3);
    const double everything = curve.recall_at(1.0);
    CHECK(inside_window / everything >= 0.75);

    // recall is non-decreasing and bounded by matched / total
    double prev = 0.0;
    for (const auto& [e, r] : curve.points) {
        CHECK(r >= prev);
        prev = r;
    }
    CHECK(prev == doctest::Approx(static_cast<double>(curve.matched_samples) /
                                  curve.total_gt_samples));
}

TEST_CASE("contour overload matches the polygon route") {
    RayContour c{{32, 32}, std::vector<double>(24, 9.0)};
    const std::vector<Polygon> gt{square_at({32, 32}, 9.0)};
    const AlignmentCurve a = alignment_recall({c}, gt);
    const AlignmentCurve b = alignment_recall_polygons({contour_polygon(c)}, gt);
    CHECK(a.matched_samples == b.matched_samples);
    CHECK(a.points == b.points);
}

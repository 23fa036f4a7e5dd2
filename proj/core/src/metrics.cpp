#include "aray/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aray/errors.hpp"

namespace aray {

double iou(const Mask& a, const Mask& b) {
    if (a.width != b.width || a.height != b.height) {
        throw DimensionMismatchError("iou: mask dimensions differ");
    }
    std::int64_t inter = 0;
    std::int64_t uni = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        inter += a.bits[i] & b.bits[i];
        uni += a.bits[i] | b.bits[i];
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double weighted_coverage(const std::vector<Mask>& gt_instances,
                         const std::vector<Mask>& pred_instances) {
    double total_area = 0.0;
    double acc = 0.0;
    for (const Mask& gt : gt_instances) {
        const double area = static_cast<double>(gt.count());
        total_area += area;
        double best = 0.0;
        for (const Mask& pred : pred_instances) {
            best = std::max(best, iou(gt, pred));
        }
        acc += area * best;
    }
    if (total_area == 0.0) return 0.0;
    return acc / total_area;
}

double boundf(const Mask& pred, const Mask& gt) {
    if (pred.width != gt.width || pred.height != gt.height) {
        throw DimensionMismatchError("boundf: mask dimensions differ");
    }
    const Mask pb = mask_boundary(pred);
    const Mask gb = mask_boundary(gt);
    const std::int64_t np = pb.count();
    const std::int64_t ng = gb.count();
    if (np == 0 && ng == 0) return 1.0;
    if (np == 0 || ng == 0) return 0.0;

    const ScalarField dist_to_gt = distance_transform(gb);
    const ScalarField dist_to_pred = distance_transform(pb);

    double mean_f = 0.0;
    for (int tau = 1; tau <= 5; ++tau) {
        std::int64_t p_hit = 0;
        std::int64_t g_hit = 0;
        for (int y = 0; y < pred.height; ++y) {
            for (int x = 0; x < pred.width; ++x) {
                if (pb.at(x, y) && dist_to_gt.at(x, y) <= tau) ++p_hit;
                if (gb.at(x, y) && dist_to_pred.at(x, y) <= tau) ++g_hit;
            }
        }
        const double precision = static_cast<double>(p_hit) / static_cast<double>(np);
        const double recall = static_cast<double>(g_hit) / static_cast<double>(ng);
        const double f = (precision + recall > 0.0)
                             ? 2.0 * precision * recall / (precision + recall)
                             : 0.0;
        mean_f += f;
    }
    return mean_f / 5.0;
}

double AlignmentCurve::recall_at(double error) const {
    double best = 0.0;
    for (const auto& [e, r] : points) {
        if (e <= error) best = r;
        else break;
    }
    return best;
}

namespace {

struct CurveSamples {
    std::vector<Point2> pts;
    std::vector<int> curve_id;
    std::vector<int> index_in_curve;
    std::vector<int> curve_len;
};

// Walk each polygon boundary at spacing <= 0.5 px.
CurveSamples densify(const std::vector<Polygon>& polys) {
    constexpr double kSpacing = 0.5;
    CurveSamples out;
    int cid = 0;
    for (const Polygon& poly : polys) {
        const std::size_t n = poly.vertices.size();
        int count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = poly.vertices[i];
            const Point2 b = poly.vertices[(i + 1) % n];
            const double len = norm(b - a);
            const int pieces = std::max(1, static_cast<int>(std::ceil(len / kSpacing)));
            for (int k = 0; k < pieces; ++k) {
                const double t = static_cast<double>(k) / pieces;
                out.pts.push_back(a + t * (b - a));
                out.curve_id.push_back(cid);
                out.index_in_curve.push_back(count++);
            }
        }
        out.curve_len.push_back(count);
        ++cid;
    }
    return out;
}

// Total-least-squares direction of the +-3 sample window (cyclic).
Point2 tls_tangent(const CurveSamples& s, std::size_t i) {
    const int cid = s.curve_id[i];
    const int len = s.curve_len[static_cast<std::size_t>(cid)];
    const int idx = s.index_in_curve[i];
    const std::size_t base = i - static_cast<std::size_t>(idx);

    double mx = 0.0, my = 0.0;
    constexpr int kHalf = 3;
    const int m = 2 * kHalf + 1;
    for (int o = -kHalf; o <= kHalf; ++o) {
        const int j = ((idx + o) % len + len) % len;
        mx += s.pts[base + static_cast<std::size_t>(j)].x;
        my += s.pts[base + static_cast<std::size_t>(j)].y;
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int o = -kHalf; o <= kHalf; ++o) {
        const int j = ((idx + o) % len + len) % len;
        const double dx = s.pts[base + static_cast<std::size_t>(j)].x - mx;
        const double dy = s.pts[base + static_cast<std::size_t>(j)].y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // Principal eigenvector of [[sxx, sxy], [sxy, syy]].
    const double tr = sxx + syy;
    const double det = sxx * syy - sxy * sxy;
    const double lam = 0.5 * tr + std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    Point2 v{sxy, lam - sxx};
    if (std::abs(sxy) < 1e-30) {
        v = (sxx >= syy) ? Point2{1.0, 0.0} : Point2{0.0, 1.0};
    }
    const double nv = norm(v);
    return (nv > 0.0) ? Point2{v.x / nv, v.y / nv} : Point2{1.0, 0.0};
}

}  // namespace

AlignmentCurve alignment_recall_polygons(const std::vector<Polygon>& pred_polygons,
                                         const std::vector<Polygon>& gt_polygons,
                                         double match_threshold) {
    if (pred_polygons.empty() || gt_polygons.empty()) {
        throw EmptyInputError("alignment_recall: empty input");
    }
    const CurveSamples pred = densify(pred_polygons);
    const CurveSamples gt = densify(gt_polygons);

    std::vector<double> errors;
    errors.reserve(pred.pts.size());
    for (std::size_t i = 0; i < pred.pts.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < gt.pts.size(); ++j) {
            const double d = norm(pred.pts[i] - gt.pts[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (best > match_threshold) continue;
        const Point2 tp = tls_tangent(pred, i);
        const Point2 tg = tls_tangent(gt, best_j);
        const double c = std::clamp(std::abs(dot(tp, tg)), 0.0, 1.0);
        errors.push_back(1.0 - c);
    }
    std::sort(errors.begin(), errors.end());

    AlignmentCurve curve;
    curve.total_gt_samples = static_cast<int>(gt.pts.size());
    curve.matched_samples = static_cast<int>(errors.size());
    const double denom = static_cast<double>(curve.total_gt_samples);
    for (std::size_t k = 0; k < errors.size(); ++k) {
        if (k + 1 < errors.size() && errors[k + 1] == errors[k]) continue;
        curve.points.emplace_back(errors[k], static_cast<double>(k + 1) / denom);
    }
    return curve;
}

AlignmentCurve alignment_recall(const std::vector<RayContour>& pred_contours,
                                const std::vector<Polygon>& gt_polygons,
                                double match_threshold) {
    std::vector<Polygon> pred;
    pred.reserve(pred_contours.size());
    for (const RayContour& c : pred_contours) {
        pred.push_back(contour_polygon(c));
    }
    return alignment_recall_polygons(pred, gt_polygons, match_threshold);
}

}  // namespace aray

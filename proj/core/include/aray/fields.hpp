#pragma once

#include <utility>
#include <vector>

#include "aray/errors.hpp"
#include "aray/geometry.hpp"

namespace aray {

/// Row-major W x H grid of doubles. Entry (ix, iy) sits at continuous
/// coordinate (ix, iy); sampling outside [0, W-1] x [0, H-1] clamps to the
/// border. Mask-derived grids hold per-pixel values, and a pixel's center
/// lives at (x+0.5, y+0.5) in image coordinates, so code that samples a
/// grid at an image-space point must subtract (0.5, 0.5) first; see
/// sample_image / sample_image_grad.
struct ScalarField {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    bool same_dims(const ScalarField& other) const {
        return width == other.width && height == other.height;
    }
};

/// One bilinear lookup with everything the adjoint needs: the value, its
/// derivatives with respect to the sample position, and the four corner
/// entries with their interpolation weights.
struct BilinearSample {
    double value = 0.0;
    double ddx = 0.0;  // d value / d px (0 where the coordinate clamped)
    double ddy = 0.0;
    int ix0 = 0;       // lower-left corner of the active cell
    int iy0 = 0;
    double w00 = 0.0, w10 = 0.0, w01 = 0.0, w11 = 0.0;
};

double bilinear_sample(const ScalarField& field, Point2 p);
BilinearSample bilinear_sample_grad(const ScalarField& field, Point2 p);

/// 3x3 Sobel derivatives normalized by 1/8 (a unit ramp maps to exactly 1);
/// borders use replicate padding. Throws FieldTooSmallError below 3x3.
std::pair<ScalarField, ScalarField> sobel_gradient(const ScalarField& field);

/// Transpose of sobel_gradient: scatters (d loss / d gx, d loss / d gy)
/// back into d loss / d field. Adds into `field_grad`.
void sobel_adjoint_accumulate(const ScalarField& gx_grad, const ScalarField& gy_grad,
                              ScalarField& field_grad);

/// Exact Euclidean distance (in pixels) to the nearest foreground pixel;
/// foreground maps to 0. Throws EmptyMaskError when no pixel is foreground.
ScalarField distance_transform(const Mask& mask);

/// The D / beta / kappa grids plus precomputed Sobel derivatives of D.
struct FieldSet {
    ScalarField d;
    ScalarField beta;
    ScalarField kappa;
    ScalarField d_grad_x;
    ScalarField d_grad_y;

    static FieldSet from_maps(ScalarField d, ScalarField beta, ScalarField kappa);
    void refresh_d_gradients();
    int width() const { return d.width; }
    int height() const { return d.height; }
};

/// Distance-transform initialization of the energy fields:
///   D     = d_gain            * EDT(boundary_mask)
///   beta  = 0.005             * EDT(boundary_mask), zeroed strictly inside gt_mask
///   kappa = 0.1 * kappa_gain  * EDT(boundary_mask), zeroed outside gt_mask
/// `boundary_mask` must be the 4-adjacency boundary of `gt_mask`. The gains
/// set the overall energy scale (the role a trained backbone's output
/// magnitude plays); both default to the plain recipe.
FieldSet build_pretrain_fields(const Mask& gt_mask, const Mask& boundary_mask,
                               double d_gain = 1.0, double kappa_gain = 1.0);

// ---- image-space sampling ----
// Contours live in image coordinates (pixel centers at half-integers);
// these wrappers apply the half-pixel registration in one place.

inline Point2 image_to_grid(Point2 p) { return {p.x - 0.5, p.y - 0.5}; }

inline double sample_image(const ScalarField& field, Point2 image_pt) {
    return bilinear_sample(field, image_to_grid(image_pt));
}

inline BilinearSample sample_image_grad(const ScalarField& field, Point2 image_pt) {
    return bilinear_sample_grad(field, image_to_grid(image_pt));
}

}  // namespace aray

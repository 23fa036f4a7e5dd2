#include "aray/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace aray {

namespace {

// Active cell for coordinate x in [0, n-1]: the cell [ix0, ix0+1] that
// contains x, resolved to the lower cell when x is an integer.
inline int lower_cell(double x, int n) {
    const int c = static_cast<int>(std::ceil(x)) - 1;
    return std::clamp(c, 0, n - 2);
}

}  // namespace

double bilinear_sample(const ScalarField& field, Point2 p) {
    return bilinear_sample_grad(field, p).value;
}

BilinearSample bilinear_sample_grad(const ScalarField& field, Point2 p) {
    const int w = field.width;
    const int h = field.height;
    BilinearSample s;
    if (w == 1 && h == 1) {
        s.value = field.at(0, 0);
        s.w00 = 1.0;
        return s;
    }
    const bool clamp_x = p.x < 0.0 || p.x > w - 1.0;
    const bool clamp_y = p.y < 0.0 || p.y > h - 1.0;
    const double x = std::clamp(p.x, 0.0, static_cast<double>(w - 1));
    const double y = std::clamp(p.y, 0.0, static_cast<double>(h - 1));

    if (w == 1 || h == 1) {
        // Degenerate 1-row / 1-column grid: linear along the long axis.
        if (w == 1) {
            const int y0 = lower_cell(y, h);
            const double fy = y - y0;
            const double v0 = field.at(0, y0);
            const double v1 = field.at(0, y0 + 1);
            s.value = (1.0 - fy) * v0 + fy * v1;
            s.ddy = clamp_y ? 0.0 : v1 - v0;
            s.iy0 = y0;
            s.w00 = 1.0 - fy;
            s.w01 = fy;
        } else {
            const int x0 = lower_cell(x, w);
            const double fx = x - x0;
            const double v0 = field.at(x0, 0);
            const double v1 = field.at(x0 + 1, 0);
            s.value = (1.0 - fx) * v0 + fx * v1;
            s.ddx = clamp_x ? 0.0 : v1 - v0;
            s.ix0 = x0;
            s.w00 = 1.0 - fx;
            s.w10 = fx;
        }
        return s;
    }

    const int x0 = lower_cell(x, w);
    const int y0 = lower_cell(y, h);
    const double fx = x - x0;
    const double fy = y - y0;
    const double v00 = field.at(x0, y0);
    const double v10 = field.at(x0 + 1, y0);
    const double v01 = field.at(x0, y0 + 1);
    const double v11 = field.at(x0 + 1, y0 + 1);

    s.value = (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) + fy * ((1.0 - fx) * v01 + fx * v11);
    s.ddx = clamp_x ? 0.0 : (1.0 - fy) * (v10 - v00) + fy * (v11 - v01);
    s.ddy = clamp_y ? 0.0 : (1.0 - fx) * (v01 - v00) + fx * (v11 - v10);
    s.ix0 = x0;
    s.iy0 = y0;
    s.w00 = (1.0 - fx) * (1.0 - fy);
    s.w10 = fx * (1.0 - fy);
    s.w01 = (1.0 - fx) * fy;
    s.w11 = fx * fy;
    return s;
}

std::pair<ScalarField, ScalarField> sobel_gradient(const ScalarField& field) {
    const int w = field.width;
    const int h = field.height;
    if (w < 3 || h < 3) {
        throw FieldTooSmallError("sobel_gradient requires a grid of at least 3x3");
    }
    ScalarField gx(w, h);
    ScalarField gy(w, h);
    auto clampv = [&](int x, int y) {
        return field.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double right = clampv(x + 1, y - 1) + 2.0 * clampv(x + 1, y) + clampv(x + 1, y + 1);
            const double left = clampv(x - 1, y - 1) + 2.0 * clampv(x - 1, y) + clampv(x - 1, y + 1);
            const double below = clampv(x - 1, y + 1) + 2.0 * clampv(x, y + 1) + clampv(x + 1, y + 1);
            const double above = clampv(x - 1, y - 1) + 2.0 * clampv(x, y - 1) + clampv(x + 1, y - 1);
            gx.at(x, y) = (right - left) / 8.0;
            gy.at(x, y) = (below - above) / 8.0;
        }
    }
    return {std::move(gx), std::move(gy)};
}

void sobel_adjoint_accumulate(const ScalarField& gx_grad, const ScalarField& gy_grad,
                              ScalarField& field_grad) {
    const int w = field_grad.width;
    const int h = field_grad.height;
    if (!gx_grad.same_dims(field_grad) || !gy_grad.same_dims(field_grad)) {
        throw DimensionMismatchError("sobel adjoint: gradient grids must match the field");
    }
    auto add = [&](int x, int y, double v) {
        field_grad.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)) += v;
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double ax = gx_grad.at(x, y) / 8.0;
            if (ax != 0.0) {
                add(x + 1, y - 1, ax);
                add(x + 1, y, 2.0 * ax);
                add(x + 1, y + 1, ax);
                add(x - 1, y - 1, -ax);
                add(x - 1, y, -2.0 * ax);
                add(x - 1, y + 1, -ax);
            }
            const double ay = gy_grad.at(x, y) / 8.0;
            if (ay != 0.0) {
                add(x - 1, y + 1, ay);
                add(x, y + 1, 2.0 * ay);
                add(x + 1, y + 1, ay);
                add(x - 1, y - 1, -ay);
                add(x, y - 1, -2.0 * ay);
                add(x + 1, y - 1, -ay);
            }
        }
    }
}

namespace {

constexpr std::int64_t kFarAway = std::numeric_limits<std::int64_t>::max() / 4;

// 1D squared-distance transform: lower envelope of the parabolas
// f[p] + (q - p)^2. Exact for integer inputs at image scales; kFarAway acts
// as infinity (large enough that an empty-source parabola never wins, small
// enough that the arithmetic cannot overflow).
void squared_dt_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& out,
                   std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    v.assign(static_cast<std::size_t>(n), 0);
    z.assign(static_cast<std::size_t>(n) + 1, 0.0);
    auto sect = [&](int q, int p) {
        return (static_cast<double>(f[static_cast<std::size_t>(q)] - f[static_cast<std::size_t>(p)]) +
                static_cast<double>(static_cast<std::int64_t>(q) * q - static_cast<std::int64_t>(p) * p)) /
               (2.0 * (q - p));
    };
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s = sect(q, v[static_cast<std::size_t>(k)]);
        while (s <= z[static_cast<std::size_t>(k)]) {
            --k;
            s = sect(q, v[static_cast<std::size_t>(k)]);
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = s;
        z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
    }
    int k2 = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(k2) + 1] < q) ++k2;
        const int p = v[static_cast<std::size_t>(k2)];
        const std::int64_t dq = q - p;
        out[static_cast<std::size_t>(q)] = f[static_cast<std::size_t>(p)] + dq * dq;
    }
}

}  // namespace

ScalarField distance_transform(const Mask& mask) {
    const int w = mask.width;
    const int h = mask.height;
    bool any = false;
    for (std::uint8_t b : mask.bits) {
        if (b) {
            any = true;
            break;
        }
    }
    if (!any) throw EmptyMaskError("distance_transform: mask has no foreground pixel");

    // Row pass, then column pass over the squared distances.
    std::vector<std::int64_t> grid(static_cast<std::size_t>(w) * h);
    std::vector<std::int64_t> line, line_out;
    std::vector<int> v;
    std::vector<double> z;

    for (int y = 0; y < h; ++y) {
        line.assign(static_cast<std::size_t>(w), kFarAway);
        for (int x = 0; x < w; ++x) {
            if (mask.at(x, y)) line[static_cast<std::size_t>(x)] = 0;
        }
        line_out.assign(static_cast<std::size_t>(w), kFarAway);
        squared_dt_1d(line, line_out, v, z);
        for (int x = 0; x < w; ++x) {
            grid[static_cast<std::size_t>(y) * w + x] = line_out[static_cast<std::size_t>(x)];
        }
    }
    ScalarField out(w, h);
    for (int x = 0; x < w; ++x) {
        line.assign(static_cast<std::size_t>(h), kFarAway);
        for (int y = 0; y < h; ++y) {
            line[static_cast<std::size_t>(y)] = grid[static_cast<std::size_t>(y) * w + x];
        }
        line_out.assign(static_cast<std::size_t>(h), kFarAway);
        squared_dt_1d(line, line_out, v, z);
        for (int y = 0; y < h; ++y) {
            out.at(x, y) = std::sqrt(static_cast<double>(line_out[static_cast<std::size_t>(y)]));
        }
    }
    return out;
}

FieldSet FieldSet::from_maps(ScalarField d, ScalarField beta, ScalarField kappa) {
    if (!d.same_dims(beta) || !d.same_dims(kappa)) {
        throw DimensionMismatchError("FieldSet: grids must share dimensions");
    }
    FieldSet fs;
    fs.d = std::move(d);
    fs.beta = std::move(beta);
    fs.kappa = std::move(kappa);
    fs.refresh_d_gradients();
    return fs;
}

void FieldSet::refresh_d_gradients() {
    auto [gx, gy] = sobel_gradient(d);
    d_grad_x = std::move(gx);
    d_grad_y = std::move(gy);
}

FieldSet build_pretrain_fields(const Mask& gt_mask, const Mask& boundary_mask, double d_gain,
                               double kappa_gain) {
    if (gt_mask.width != boundary_mask.width || gt_mask.height != boundary_mask.height) {
        throw DimensionMismatchError("build_pretrain_fields: masks must share dimensions");
    }
    const ScalarField edt = distance_transform(boundary_mask);
    const int w = edt.width;
    const int h = edt.height;

    ScalarField d = edt;
    ScalarField beta = edt;
    ScalarField kappa = edt;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            d.at(x, y) *= d_gain;
            const bool fg = gt_mask.at(x, y);
            const bool bnd = boundary_mask.at(x, y);
            if (fg && !bnd) beta.at(x, y) = 0.0;  // strict interior
            if (!fg) kappa.at(x, y) = 0.0;        // exterior
            beta.at(x, y) *= 0.005;
            kappa.at(x, y) *= 0.1 * kappa_gain;
        }
    }
    return FieldSet::from_maps(std::move(d), std::move(beta), std::move(kappa));
}

}  // namespace aray

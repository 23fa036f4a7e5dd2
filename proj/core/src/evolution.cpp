#include "aray/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace aray {

namespace {

struct RayBasis {
    std::vector<double> cos_t;
    std::vector<double> sin_t;
};

RayBasis ray_basis(int l_rays) {
    RayBasis b;
    b.cos_t.resize(static_cast<std::size_t>(l_rays));
    b.sin_t.resize(static_cast<std::size_t>(l_rays));
    const double dtheta = 2.0 * std::numbers::pi / l_rays;
    for (int i = 0; i < l_rays; ++i) {
        b.cos_t[static_cast<std::size_t>(i)] = std::cos(i * dtheta);
        b.sin_t[static_cast<std::size_t>(i)] = std::sin(i * dtheta);
    }
    return b;
}

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

void check_lengths(const RayContour& contour, const FieldSet& fields, const RhoMax& rho_max) {
    if (contour.size() < 5) throw Error("contour needs at least 5 rays");
    if (rho_max.values.size() != contour.radii.size()) {
        throw DimensionMismatchError("rho_max length differs from contour");
    }
    if (!fields.d.same_dims(fields.beta) || !fields.d.same_dims(fields.kappa)) {
        throw DimensionMismatchError("field set grids differ in size");
    }
}

}  // namespace

RhoMax rho_max_for(Point2 center, int l_rays, int width, int height) {
    if (!(center.x > 0.0 && center.x < width && center.y > 0.0 && center.y < height)) {
        throw CenterOutsideError("rho_max_for: center outside the image rectangle");
    }
    RhoMax out;
    out.values.resize(static_cast<std::size_t>(l_rays));
    const RayBasis basis = ray_basis(l_rays);
    for (int i = 0; i < l_rays; ++i) {
        const double c = basis.cos_t[static_cast<std::size_t>(i)];
        const double s = basis.sin_t[static_cast<std::size_t>(i)];
        double t = std::numeric_limits<double>::infinity();
        if (c > 0.0) t = std::min(t, (width - center.x) / c);
        if (c < 0.0) t = std::min(t, -center.x / c);
        if (s > 0.0) t = std::min(t, (height - center.y) / s);
        if (s < 0.0) t = std::min(t, -center.y / s);
        out.values[static_cast<std::size_t>(i)] = t;
    }
    return out;
}

double energy_total(const RayContour& contour, const FieldSet& fields, const RhoMax& rho_max) {
    check_lengths(contour, fields, rho_max);
    const auto pts = contour_points(contour);
    const int l_rays = contour.size();
    double energy = 0.0;
    for (int i = 0; i < l_rays; ++i) {
        const Point2 p = pts[static_cast<std::size_t>(i)];
        const Point2 prev = pts[static_cast<std::size_t>(wrap(i - 1, l_rays))];
        const Point2 next = pts[static_cast<std::size_t>(wrap(i + 1, l_rays))];
        const Point2 second_diff = next - 2.0 * p + prev;
        const double data = sample_image(fields.d, p);
        const double bend = sample_image(fields.beta, p) * dot(second_diff, second_diff);
        const double balloon = sample_image(fields.kappa, p) *
                               (1.0 - contour.radii[static_cast<std::size_t>(i)] /
                                          rho_max.values[static_cast<std::size_t>(i)]);
        energy += data + bend + balloon;
    }
    return energy;
}

std::pair<SystemBands, ForceVector> assemble_system(const RayContour& contour,
                                                    const FieldSet& fields,
                                                    const RhoMax& rho_max) {
    check_lengths(contour, fields, rho_max);
    const int l_rays = contour.size();
    const auto pts = contour_points(contour);
    const RayBasis basis = ray_basis(l_rays);
    const double dtheta = contour.delta_theta();
    const double c1 = std::cos(dtheta);
    const double c2 = std::cos(2.0 * dtheta);

    std::vector<double> beta(static_cast<std::size_t>(l_rays));
    ForceVector force;
    force.values.resize(static_cast<std::size_t>(l_rays));
    for (int i = 0; i < l_rays; ++i) {
        const Point2 p = pts[static_cast<std::size_t>(i)];
        beta[static_cast<std::size_t>(i)] = sample_image(fields.beta, p);
        const double gx = sample_image(fields.d_grad_x, p);
        const double gy = sample_image(fields.d_grad_y, p);
        const double kappa = sample_image(fields.kappa, p);
        force.values[static_cast<std::size_t>(i)] =
            gx * basis.cos_t[static_cast<std::size_t>(i)] +
            gy * basis.sin_t[static_cast<std::size_t>(i)] -
            kappa / rho_max.values[static_cast<std::size_t>(i)];
    }

    SystemBands bands;
    bands.upper2.resize(static_cast<std::size_t>(l_rays));
    bands.upper1.resize(static_cast<std::size_t>(l_rays));
    bands.diag.resize(static_cast<std::size_t>(l_rays));
    bands.lower1.resize(static_cast<std::size_t>(l_rays));
    bands.lower2.resize(static_cast<std::size_t>(l_rays));
    for (int i = 0; i < l_rays; ++i) {
        const double b_prev = beta[static_cast<std::size_t>(wrap(i - 1, l_rays))];
        const double b_here = beta[static_cast<std::size_t>(i)];
        const double b_next = beta[static_cast<std::size_t>(wrap(i + 1, l_rays))];
        bands.upper2[static_cast<std::size_t>(i)] = 2.0 * b_next * c2;
        bands.upper1[static_cast<std::size_t>(i)] = -4.0 * (b_next + b_here) * c1;
        bands.diag[static_cast<std::size_t>(i)] = 2.0 * (b_next + 4.0 * b_here + b_prev);
        bands.lower1[static_cast<std::size_t>(i)] = -4.0 * (b_here + b_prev) * c1;
        bands.lower2[static_cast<std::size_t>(i)] = 2.0 * b_prev * c2;
    }
    return {std::move(bands), std::move(force)};
}

std::vector<double> evolve_step(const std::vector<double>& rho, const SystemBands& bands,
                                const ForceVector& force, const EvolutionConfig& config,
                                const RhoMax& rho_max) {
    const int l_rays = static_cast<int>(rho.size());
    if (bands.size() != l_rays || static_cast<int>(force.values.size()) != l_rays ||
        static_cast<int>(rho_max.values.size()) != l_rays) {
        throw DimensionMismatchError("evolve_step: inconsistent lengths");
    }
    std::vector<double> next(static_cast<std::size_t>(l_rays));
    for (int i = 0; i < l_rays; ++i) {
        const double a_rho = bands.upper2[static_cast<std::size_t>(i)] * rho[static_cast<std::size_t>(wrap(i + 2, l_rays))] +
                             bands.upper1[static_cast<std::size_t>(i)] * rho[static_cast<std::size_t>(wrap(i + 1, l_rays))] +
                             bands.diag[static_cast<std::size_t>(i)] * rho[static_cast<std::size_t>(i)] +
                             bands.lower1[static_cast<std::size_t>(i)] * rho[static_cast<std::size_t>(wrap(i - 1, l_rays))] +
                             bands.lower2[static_cast<std::size_t>(i)] * rho[static_cast<std::size_t>(wrap(i - 2, l_rays))];
        const double raw = rho[static_cast<std::size_t>(i)] -
                           config.dt * (a_rho + force.values[static_cast<std::size_t>(i)]);
        if (!std::isfinite(raw)) {
            throw NonFiniteError("evolve_step: update became non-finite (dt too large?)");
        }
        next[static_cast<std::size_t>(i)] =
            std::clamp(raw, config.rho_min, rho_max.values[static_cast<std::size_t>(i)]);
    }
    return next;
}

namespace {

EvolveResult run_evolution(const RayContour& contour, const FieldSet& fields,
                           const EvolutionConfig& config, SolverKind solver) {
    if (!(config.dt > 0.0) || config.steps < 0 || !(config.rho_min > 0.0)) {
        throw Error("evolve: config requires dt > 0, steps >= 0, rho_min > 0");
    }
    const int l_rays = contour.size();
    const RhoMax rho_max = rho_max_for(contour.center, l_rays, fields.width(), fields.height());
    for (double m : rho_max.values) {
        if (!(m > config.rho_min)) {
            throw Error("evolve: rho_max does not exceed rho_min for every ray");
        }
    }

    RayContour cur = contour;
    for (int i = 0; i < l_rays; ++i) {
        cur.radii[static_cast<std::size_t>(i)] =
            std::clamp(cur.radii[static_cast<std::size_t>(i)], config.rho_min,
                       rho_max.values[static_cast<std::size_t>(i)]);
    }

    Trajectory traj;
    traj.center = contour.center;
    traj.field_width = fields.width();
    traj.field_height = fields.height();
    traj.dt = config.dt;
    traj.rho_min = config.rho_min;
    traj.solver = solver;
    traj.rho_max = rho_max;
    traj.rho.push_back(cur.radii);

    for (int step = 0; step < config.steps; ++step) {
        auto [bands, force] = assemble_system(cur, fields, rho_max);
        std::vector<double> next;
        if (solver == SolverKind::Explicit) {
            next = evolve_step(cur.radii, bands, force, config, rho_max);
        } else {
            SystemBands shifted = bands;
            std::vector<double> rhs(static_cast<std::size_t>(l_rays));
            for (int i = 0; i < l_rays; ++i) {
                shifted.diag[static_cast<std::size_t>(i)] += 1.0 / config.dt;
                rhs[static_cast<std::size_t>(i)] =
                    cur.radii[static_cast<std::size_t>(i)] / config.dt -
                    force.values[static_cast<std::size_t>(i)];
            }
            next = solve_cyclic_pentadiagonal(shifted, rhs);
            for (int i = 0; i < l_rays; ++i) {
                next[static_cast<std::size_t>(i)] =
                    std::clamp(next[static_cast<std::size_t>(i)], config.rho_min,
                               rho_max.values[static_cast<std::size_t>(i)]);
            }
        }

        std::vector<std::uint8_t> clamp_mask(static_cast<std::size_t>(l_rays), 0);
        double max_delta = 0.0;
        for (int i = 0; i < l_rays; ++i) {
            const double v = next[static_cast<std::size_t>(i)];
            if (!std::isfinite(v)) {
                throw NonFiniteError("evolve: radius became non-finite (dt too large?)");
            }
            if (v == config.rho_min || v == rho_max.values[static_cast<std::size_t>(i)]) {
                clamp_mask[static_cast<std::size_t>(i)] = 1;
            }
            max_delta = std::max(max_delta, std::abs(v - cur.radii[static_cast<std::size_t>(i)]));
        }
        cur.radii = next;
        traj.rho.push_back(cur.radii);
        traj.clamped.push_back(std::move(clamp_mask));
        if (config.convergence_eps && max_delta < *config.convergence_eps) break;
    }
    return EvolveResult{std::move(cur), std::move(traj)};
}

}  // namespace

EvolveResult evolve(const RayContour& contour, const FieldSet& fields,
                    const EvolutionConfig& config) {
    return run_evolution(contour, fields, config, SolverKind::Explicit);
}

EvolveResult evolve_implicit_explicit(const RayContour& contour, const FieldSet& fields,
                                      const EvolutionConfig& config) {
    return run_evolution(contour, fields, config, SolverKind::ImplicitExplicit);
}

// ---- cyclic pentadiagonal direct solve ----
//
// The cyclic matrix is split as B + U V^T where B keeps the five diagonals
// without wraparound and the six corner entries are restored through four
// rank-1 terms (columns 0, 1, L-2, L-1). B is factored with a partially
// pivoted band LU (bandwidth grows from 2 to 4 on the upper side), then the
// Woodbury identity finishes the solve.

namespace {

class BandLU {
  public:
    // rows store offsets -2..+4 relative to the diagonal
    static constexpr int kLower = 2;
    static constexpr int kUpper = 4;
    static constexpr int kWidth = kLower + kUpper + 1;

    explicit BandLU(const SystemBands& bands)
        : n_(bands.size()), store_(static_cast<std::size_t>(bands.size()) * kWidth, 0.0),
          pivot_(static_cast<std::size_t>(bands.size()), 0) {
        auto put = [&](int r, int c, double v) {
            if (c >= 0 && c < n_) set(r, c, v);
        };
        for (int i = 0; i < n_; ++i) {
            put(i, i - 2, bands.lower2[static_cast<std::size_t>(i)]);
            put(i, i - 1, bands.lower1[static_cast<std::size_t>(i)]);
            put(i, i, bands.diag[static_cast<std::size_t>(i)]);
            put(i, i + 1, bands.upper1[static_cast<std::size_t>(i)]);
            put(i, i + 2, bands.upper2[static_cast<std::size_t>(i)]);
        }
        factor();
    }

    void solve_in_place(std::vector<double>& b) const {
        for (int k = 0; k < n_ - 1; ++k) {
            const int p = pivot_[static_cast<std::size_t>(k)];
            if (p != k) std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(p)]);
            const int last = std::min(k + kLower, n_ - 1);
            for (int r = k + 1; r <= last; ++r) {
                b[static_cast<std::size_t>(r)] -= mult(r, k) * b[static_cast<std::size_t>(k)];
            }
        }
        for (int k = n_ - 1; k >= 0; --k) {
            double acc = b[static_cast<std::size_t>(k)];
            const int last = std::min(k + kUpper, n_ - 1);
            for (int c = k + 1; c <= last; ++c) {
                acc -= get(k, c) * b[static_cast<std::size_t>(c)];
            }
            b[static_cast<std::size_t>(k)] = acc / get(k, k);
        }
    }

  private:
    double get(int r, int c) const {
        const int off = c - r + kLower;
        if (off < 0 || off >= kWidth) return 0.0;
        return store_[static_cast<std::size_t>(r) * kWidth + off];
    }
    void set(int r, int c, double v) {
        const int off = c - r + kLower;
        if (off < 0 || off >= kWidth) {
            if (v != 0.0) throw Error("band solver: entry outside band");
            return;
        }
        store_[static_cast<std::size_t>(r) * kWidth + off] = v;
    }
    double mult(int r, int k) const { return mult_[static_cast<std::size_t>(r) * kLower + (r - k - 1)]; }

    void factor() {
        mult_.assign(static_cast<std::size_t>(n_) * kLower, 0.0);
        for (int k = 0; k < n_ - 1; ++k) {
            const int last = std::min(k + kLower, n_ - 1);
            int p = k;
            for (int r = k + 1; r <= last; ++r) {
                if (std::abs(get(r, k)) > std::abs(get(p, k))) p = r;
            }
            pivot_[static_cast<std::size_t>(k)] = p;
            if (p != k) {
                const int cmax = std::min(k + kUpper, n_ - 1);
                for (int c = k; c <= cmax; ++c) {
                    const double tmp = get(k, c);
                    set(k, c, get(p, c));
                    set(p, c, tmp);
                }
            }
            const double piv = get(k, k);
            if (std::abs(piv) < 1e-300) throw SingularSystemError("band solver: zero pivot");
            for (int r = k + 1; r <= last; ++r) {
                const double m = get(r, k) / piv;
                mult_[static_cast<std::size_t>(r) * kLower + (r - k - 1)] = m;
                set(r, k, 0.0);
                const int cmax = std::min(k + kUpper, n_ - 1);
                for (int c = k + 1; c <= cmax; ++c) {
                    set(r, c, get(r, c) - m * get(k, c));
                }
            }
        }
        if (std::abs(get(n_ - 1, n_ - 1)) < 1e-300) {
            throw SingularSystemError("band solver: zero pivot");
        }
        pivot_[static_cast<std::size_t>(n_ - 1)] = n_ - 1;
    }

    int n_;
    std::vector<double> store_;
    std::vector<double> mult_;
    std::vector<int> pivot_;
};

}  // namespace

std::vector<double> solve_cyclic_pentadiagonal(const SystemBands& bands,
                                               const std::vector<double>& rhs) {
    const int n = bands.size();
    if (n < 5) throw Error("cyclic pentadiagonal solve needs size >= 5");
    if (static_cast<int>(rhs.size()) != n) {
        throw DimensionMismatchError("cyclic solve: rhs length mismatch");
    }

    SystemBands core = bands;
    // Corner entries leave the band; they come back via the rank-4 update.
    struct Corner {
        int row;
        int col;
        double value;
    };
    const std::array<Corner, 6> corners{{{0, n - 2, bands.lower2[0]},
                                         {0, n - 1, bands.lower1[0]},
                                         {1, n - 1, bands.lower2[1]},
                                         {n - 2, 0, bands.upper2[static_cast<std::size_t>(n - 2)]},
                                         {n - 1, 0, bands.upper1[static_cast<std::size_t>(n - 1)]},
                                         {n - 1, 1, bands.upper2[static_cast<std::size_t>(n - 1)]}}};
    core.lower2[0] = 0.0;
    core.lower1[0] = 0.0;
    core.lower2[1] = 0.0;
    core.upper2[static_cast<std::size_t>(n - 2)] = 0.0;
    core.upper1[static_cast<std::size_t>(n - 1)] = 0.0;
    core.upper2[static_cast<std::size_t>(n - 1)] = 0.0;

    const std::array<int, 4> cols{n - 2, n - 1, 0, 1};
    const BandLU lu(core);

    std::vector<double> x = rhs;
    lu.solve_in_place(x);

    // W = B^{-1} U, one column per corner column.
    std::array<std::vector<double>, 4> w_cols;
    for (int j = 0; j < 4; ++j) {
        std::vector<double> u(static_cast<std::size_t>(n), 0.0);
        for (const Corner& c : corners) {
            if (c.col == cols[static_cast<std::size_t>(j)]) u[static_cast<std::size_t>(c.row)] += c.value;
        }
        lu.solve_in_place(u);
        w_cols[static_cast<std::size_t>(j)] = std::move(u);
    }

    // Solve (I4 + V^T W) y = V^T x, where V^T picks the corner columns' rows.
    std::array<std::array<double, 5>, 4> m{};  // augmented 4x5
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                (r == c ? 1.0 : 0.0) +
                w_cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(cols[static_cast<std::size_t>(r)])];
        }
        m[static_cast<std::size_t>(r)][4] = x[static_cast<std::size_t>(cols[static_cast<std::size_t>(r)])];
    }
    for (int k = 0; k < 4; ++k) {
        int p = k;
        for (int r = k + 1; r < 4; ++r) {
            if (std::abs(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)]) >
                std::abs(m[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)])) {
                p = r;
            }
        }
        std::swap(m[static_cast<std::size_t>(k)], m[static_cast<std::size_t>(p)]);
        const double piv = m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        if (std::abs(piv) < 1e-250) throw SingularSystemError("cyclic solve: singular correction");
        for (int r = k + 1; r < 4; ++r) {
            const double f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] / piv;
            for (int c = k; c < 5; ++c) {
                m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    f * m[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
            }
        }
    }
    std::array<double, 4> y{};
    for (int k = 3; k >= 0; --k) {
        double acc = m[static_cast<std::size_t>(k)][4];
        for (int c = k + 1; c < 4; ++c) {
            acc -= m[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)] * y[static_cast<std::size_t>(c)];
        }
        y[static_cast<std::size_t>(k)] = acc / m[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    }

    for (int i = 0; i < n; ++i) {
        double corr = 0.0;
        for (int j = 0; j < 4; ++j) {
            corr += w_cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
        }
        x[static_cast<std::size_t>(i)] -= corr;
    }
    return x;
}

namespace {

struct DeepestPixel {
    int x = 0;
    int y = 0;
    double depth = -1.0;
};

// Argmax of the distance transform over the segment (ties: lowest row, then
// lowest column). Depth = distance to the nearest pixel that is background
// or beyond the border (padding keeps borders finite).
DeepestPixel deepest_pixel(const Mask& segment) {
    Mask outside(segment.width + 2, segment.height + 2);
    for (int y = 0; y < outside.height; ++y) {
        for (int x = 0; x < outside.width; ++x) {
            const int sx = x - 1;
            const int sy = y - 1;
            const bool in_img = sx >= 0 && sy >= 0 && sx < segment.width && sy < segment.height;
            outside.set(x, y, !(in_img && segment.at(sx, sy)));
        }
    }
    const ScalarField depth = distance_transform(outside);

    DeepestPixel best;
    for (int y = 0; y < segment.height; ++y) {
        for (int x = 0; x < segment.width; ++x) {
            if (!segment.at(x, y)) continue;
            const double v = depth.at(x + 1, y + 1);
            if (v > best.depth) {
                best = DeepestPixel{x, y, v};
            }
        }
    }
    return best;
}

RayContour seed_at(const DeepestPixel& p, double rho_min, int rays) {
    RayContour seed;
    seed.center = {p.x + 0.5, p.y + 0.5};
    seed.radii.assign(static_cast<std::size_t>(rays),
                      std::max(rho_min, std::min(4.0 * rho_min, 0.5 * p.depth)));
    return seed;
}

}  // namespace

RayContour seed_for_segment(const Mask& segment, double rho_min, int rays) {
    if (segment.count() == 0) {
        throw EmptySegmentError("seed_for_segment: segment has no foreground");
    }
    return seed_at(deepest_pixel(segment), rho_min, rays);
}

MultiInitResult multi_init_evolve(const Mask& segment, const FieldSet& fields,
                                  const EvolutionConfig& config, const MultiInitLimits& limits) {
    if (segment.count() == 0) {
        throw EmptySegmentError("multi_init_evolve: segment has no foreground");
    }
    if (segment.width != fields.width() || segment.height != fields.height()) {
        throw DimensionMismatchError("multi_init_evolve: segment and fields differ in size");
    }

    MultiInitResult result;
    result.covered = Mask(segment.width, segment.height);

    while (static_cast<int>(result.contours.size()) < limits.max_inits) {
        const Mask uncovered = mask_and_not(segment, result.covered);
        if (static_cast<double>(uncovered.count()) < limits.min_area) break;

        const DeepestPixel deepest = deepest_pixel(uncovered);
        // Largest disk inside the remainder has radius ~ depth - 0.5 (pixel
        // center to the nearest outside pixel). If no rho_min disk fits, the
        // remainder is sub-pixel boundary mismatch, not a missed lobe.
        if (deepest.depth - 0.5 < config.rho_min) break;

        const RayContour seed = seed_at(deepest, config.rho_min, limits.rays);
        const EvolveResult evolved = evolve(seed, fields, config);
        result.contours.push_back(evolved.contour);
        result.covered = mask_or(result.covered,
                                 rasterize(contour_polygon(evolved.contour), segment.width,
                                           segment.height));
    }
    return result;
}

}  // namespace aray

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "aray/fields.hpp"
#include "aray/geometry.hpp"

namespace aray {

/// Cyclic pentadiagonal matrix in band form. Row i holds, at offsets
/// +2, +1, 0, -1, -2 (columns modulo L):
///   upper2[i], upper1[i], diag[i], lower1[i], lower2[i].
struct SystemBands {
    std::vector<double> upper2;
    std::vector<double> upper1;
    std::vector<double> diag;
    std::vector<double> lower1;
    std::vector<double> lower2;

    int size() const { return static_cast<int>(diag.size()); }
};

/// Data plus balloon derivatives, one entry per ray.
struct ForceVector {
    std::vector<double> values;
};

enum class SolverKind { Explicit, ImplicitExplicit };

struct EvolutionConfig {
    double dt = 2e-4;
    int steps = 200;
    double rho_min = 1.0;
    SolverKind solver = SolverKind::Explicit;
    std::optional<double> convergence_eps;  // stop when max |drho| falls below
};

/// Per-ray maximum radius before the ray leaves the image rectangle.
struct RhoMax {
    std::vector<double> values;
};

/// Ray-box distances from `center` along the L ray angles to the boundary
/// of [0, width] x [0, height]. Throws CenterOutsideError.
RhoMax rho_max_for(Point2 center, int l_rays, int width, int height);

/// Sum over rays of data + curvature + balloon terms, fields sampled
/// bilinearly at the contour points.
double energy_total(const RayContour& contour, const FieldSet& fields, const RhoMax& rho_max);

/// Band and force assembly at the current contour position:
///   upper2_i = 2 b_{i+1} cos 2dt,  upper1_i = -4 (b_{i+1} + b_i) cos dt,
///   diag_i   = 2 (b_{i+1} + 4 b_i + b_{i-1}),
///   lower1_i = -4 (b_i + b_{i-1}) cos dt,  lower2_i = 2 b_{i-1} cos 2dt,
///   force_i  = gx_i cos(i dt) + gy_i sin(i dt) - kappa_i / rho_max_i
/// with b/kappa/gx/gy sampled at the contour points and dt the angular step.
std::pair<SystemBands, ForceVector> assemble_system(const RayContour& contour,
                                                    const FieldSet& fields,
                                                    const RhoMax& rho_max);

/// One explicit update rho - dt * (A rho + f), then clamp each radius into
/// [rho_min, rho_max_i].
std::vector<double> evolve_step(const std::vector<double>& rho, const SystemBands& bands,
                                const ForceVector& force, const EvolutionConfig& config,
                                const RhoMax& rho_max);

/// Everything the reverse pass needs to replay the forward recurrence:
/// radii before every step and which coordinates clamped on each step.
struct Trajectory {
    Point2 center;
    int field_width = 0;
    int field_height = 0;
    double dt = 0.0;
    double rho_min = 0.0;
    SolverKind solver = SolverKind::Explicit;
    RhoMax rho_max;
    std::vector<std::vector<double>> rho;           // steps_taken + 1 snapshots
    std::vector<std::vector<std::uint8_t>> clamped;  // one mask per step

    int steps_taken() const { return static_cast<int>(clamped.size()); }
};

struct EvolveResult {
    RayContour contour;
    Trajectory trajectory;
};

/// Iterate the explicit scheme, reassembling (A, f) from the current
/// contour every step. Stops early when convergence_eps is set and the
/// sup-norm step falls below it. Throws NonFiniteError if a radius leaves
/// the finite range (unstable dt).
EvolveResult evolve(const RayContour& contour, const FieldSet& fields,
                    const EvolutionConfig& config);

/// Reference scheme: rho' = (A + I/dt)^{-1} (rho/dt - f), same clamping.
EvolveResult evolve_implicit_explicit(const RayContour& contour, const FieldSet& fields,
                                      const EvolutionConfig& config);

/// Direct solve of (cyclic pentadiagonal) x = rhs via a banded LU plus a
/// rank-4 corner correction. Throws SingularSystemError.
std::vector<double> solve_cyclic_pentadiagonal(const SystemBands& bands,
                                               const std::vector<double>& rhs);

struct MultiInitLimits {
    double min_area = 16.0;  // stop once the uncovered area drops below
    int max_inits = 8;
    int rays = 60;  // L for each seeded contour
};

struct MultiInitResult {
    std::vector<RayContour> contours;
    Mask covered;
};

/// Small circle seeded at the distance-transform argmax of the segment
/// (ties: lowest row, then lowest column). The radius is
/// min(4 * rho_min, half the argmax depth), floored at rho_min. Throws
/// EmptySegmentError.
RayContour seed_for_segment(const Mask& segment, double rho_min, int rays);

/// Cover a segment with evolved contours: seed a small circle at the
/// distance-transform argmax of the uncovered region, evolve, rasterize,
/// union, repeat. Stops on the area / count limits, or when the uncovered
/// remainder is thinner than rho_min (no admissible contour fits there).
/// Throws EmptySegmentError when the segment has no foreground at all.
MultiInitResult multi_init_evolve(const Mask& segment, const FieldSet& fields,
                                  const EvolutionConfig& config,
                                  const MultiInitLimits& limits = {});

}  // namespace aray

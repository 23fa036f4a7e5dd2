#pragma once

#include <cstdint>
#include <vector>

#include "aray/evolution.hpp"
#include "aray/rng.hpp"
#include "aray/scene.hpp"

namespace aray {

/// Directly learnable D / beta / kappa grids with their accumulated
/// gradients and SGD momentum buffers. The Sobel derivatives of D are kept
/// in sync by the optimizer step; gradients flowing into them are staged in
/// grad_gx / grad_gy and folded into grad_d through the Sobel transpose.
struct LearnableFields {
    FieldSet fields;
    ScalarField grad_d, grad_beta, grad_kappa;
    ScalarField grad_gx, grad_gy;
    ScalarField mom_d, mom_beta, mom_kappa;

    explicit LearnableFields(FieldSet init);
    void zero_grads();
};

struct TrainConfig {
    double learning_rate = 4e-5;
    double momentum = 0.3;
    int train_steps = 100;
    int rays = 60;
    EvolutionConfig evolution;
    std::uint64_t seed = 0;
};

/// Sum of |rho_gt_i - rho_i|. Throws LengthMismatchError.
double ray_loss_l1(const std::vector<double>& rho, const std::vector<double>& rho_gt);

/// Elementwise sign(rho_i - rho_gt_i), 0 at ties.
std::vector<double> loss_grad(const std::vector<double>& rho, const std::vector<double>& rho_gt);

/// Exact reverse-mode pass through the recorded explicit evolution,
/// accumulating d loss / d grid-entry into the gradient grids. Coordinates
/// that clamped on a step propagate zero gradient through that step.
/// Throws TrajectoryMismatchError when the trajectory does not fit the
/// fields or the seed vector.
void backward_through_evolution(const Trajectory& trajectory, LearnableFields& learnable,
                                const std::vector<double>& d_loss_d_rho_final);

/// buffer <- momentum * buffer + grad; param <- param - lr * buffer;
/// params clamp to >= 0; gradients reset; Sobel derivatives of D refresh.
void sgd_momentum_step(LearnableFields& learnable, const TrainConfig& config);

struct TrainRecord {
    int step = 0;
    int scene_index = 0;
    double loss = 0.0;
};

struct TrainResult {
    std::vector<LearnableFields> fields;  // one per scene
    std::vector<TrainRecord> history;
};

/// Uniformly pick an interior pixel center whose rho_min-disk lies inside
/// the polygon. Throws NoInteriorPointError after 10^4 rejected draws.
Point2 sample_interior_center(const Polygon& gt, int width, int height, double rho_min,
                              Rng& rng);

/// One optimization step at a fixed reference point: cast ground-truth
/// rays, evolve a rho_min circle, backpropagate the L1 ray loss, update.
double train_step(const Polygon& gt, LearnableFields& learnable, Point2 center,
                  const TrainConfig& config);

/// Per-scene learnable grids initialized from each scene's fields; every
/// step draws a scene, an instance, and an interior reference point.
TrainResult train(const std::vector<Scene>& scenes, const TrainConfig& config);

}  // namespace aray

#include "aray/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aray {

LearnableFields::LearnableFields(FieldSet init)
    : fields(std::move(init)),
      grad_d(fields.width(), fields.height()),
      grad_beta(fields.width(), fields.height()),
      grad_kappa(fields.width(), fields.height()),
      grad_gx(fields.width(), fields.height()),
      grad_gy(fields.width(), fields.height()),
      mom_d(fields.width(), fields.height()),
      mom_beta(fields.width(), fields.height()),
      mom_kappa(fields.width(), fields.height()) {}

void LearnableFields::zero_grads() {
    for (ScalarField* g : {&grad_d, &grad_beta, &grad_kappa, &grad_gx, &grad_gy}) {
        std::fill(g->values.begin(), g->values.end(), 0.0);
    }
}

double ray_loss_l1(const std::vector<double>& rho, const std::vector<double>& rho_gt) {
    if (rho.size() != rho_gt.size()) {
        throw LengthMismatchError("ray_loss_l1: length mismatch");
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        loss += std::abs(rho_gt[i] - rho[i]);
    }
    return loss;
}

std::vector<double> loss_grad(const std::vector<double>& rho, const std::vector<double>& rho_gt) {
    if (rho.size() != rho_gt.size()) {
        throw LengthMismatchError("loss_grad: length mismatch");
    }
    std::vector<double> g(rho.size(), 0.0);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] > rho_gt[i]) g[i] = 1.0;
        else if (rho[i] < rho_gt[i]) g[i] = -1.0;
    }
    return g;
}

namespace {

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

void scatter(ScalarField& grad, const BilinearSample& s, double v) {
    if (v == 0.0) return;
    grad.at(s.ix0, s.iy0) += v * s.w00;
    if (s.ix0 + 1 < grad.width) grad.at(s.ix0 + 1, s.iy0) += v * s.w10;
    if (s.iy0 + 1 < grad.height) grad.at(s.ix0, s.iy0 + 1) += v * s.w01;
    if (s.ix0 + 1 < grad.width && s.iy0 + 1 < grad.height) {
        grad.at(s.ix0 + 1, s.iy0 + 1) += v * s.w11;
    }
}

inline double directional(const BilinearSample& s, double cos_t, double sin_t) {
    return s.ddx * cos_t + s.ddy * sin_t;
}

}  // namespace

void backward_through_evolution(const Trajectory& traj, LearnableFields& learnable,
                                const std::vector<double>& d_loss_d_rho_final) {
    if (traj.solver != SolverKind::Explicit) {
        throw TrajectoryMismatchError("backward: trajectory was not produced by the explicit solver");
    }
    if (traj.field_width != learnable.fields.width() ||
        traj.field_height != learnable.fields.height()) {
        throw TrajectoryMismatchError("backward: trajectory grid size differs from fields");
    }
    if (traj.rho.empty() || traj.rho.size() != traj.clamped.size() + 1) {
        throw TrajectoryMismatchError("backward: malformed trajectory");
    }
    const int l_rays = static_cast<int>(traj.rho.front().size());
    if (static_cast<int>(d_loss_d_rho_final.size()) != l_rays ||
        static_cast<int>(traj.rho_max.values.size()) != l_rays) {
        throw TrajectoryMismatchError("backward: ray count mismatch");
    }

    const FieldSet& f = learnable.fields;
    const double dtheta = 2.0 * std::numbers::pi / l_rays;
    const double c1 = std::cos(dtheta);
    const double c2 = std::cos(2.0 * dtheta);
    std::vector<double> cos_t(static_cast<std::size_t>(l_rays));
    std::vector<double> sin_t(static_cast<std::size_t>(l_rays));
    for (int i = 0; i < l_rays; ++i) {
        cos_t[static_cast<std::size_t>(i)] = std::cos(i * dtheta);
        sin_t[static_cast<std::size_t>(i)] = std::sin(i * dtheta);
    }

    // Fresh staging for the Sobel-derivative grids of this pass; grad_gx /
    // grad_gy persist only within one backward call.
    ScalarField pass_gx(f.width(), f.height());
    ScalarField pass_gy(f.width(), f.height());

    std::vector<double> lambda = d_loss_d_rho_final;
    std::vector<double> next_lambda(static_cast<std::size_t>(l_rays));
    std::vector<double> sigma(static_cast<std::size_t>(l_rays));
    std::vector<BilinearSample> s_beta(static_cast<std::size_t>(l_rays));
    std::vector<BilinearSample> s_kappa(static_cast<std::size_t>(l_rays));
    std::vector<BilinearSample> s_gx(static_cast<std::size_t>(l_rays));
    std::vector<BilinearSample> s_gy(static_cast<std::size_t>(l_rays));

    for (int t = traj.steps_taken() - 1; t >= 0; --t) {
        const std::vector<double>& rho = traj.rho[static_cast<std::size_t>(t)];
        const std::vector<std::uint8_t>& clamp_mask = traj.clamped[static_cast<std::size_t>(t)];

        for (int i = 0; i < l_rays; ++i) {
            const Point2 p{traj.center.x + rho[static_cast<std::size_t>(i)] * cos_t[static_cast<std::size_t>(i)],
                           traj.center.y + rho[static_cast<std::size_t>(i)] * sin_t[static_cast<std::size_t>(i)]};
            s_beta[static_cast<std::size_t>(i)] = sample_image_grad(f.beta, p);
            s_kappa[static_cast<std::size_t>(i)] = sample_image_grad(f.kappa, p);
            s_gx[static_cast<std::size_t>(i)] = sample_image_grad(f.d_grad_x, p);
            s_gy[static_cast<std::size_t>(i)] = sample_image_grad(f.d_grad_y, p);
        }

        for (int i = 0; i < l_rays; ++i) {
            const double lam = clamp_mask[static_cast<std::size_t>(i)] ? 0.0
                                                                       : lambda[static_cast<std::size_t>(i)];
            next_lambda[static_cast<std::size_t>(i)] = lam;
            sigma[static_cast<std::size_t>(i)] = -traj.dt * lam;
        }

        for (int i = 0; i < l_rays; ++i) {
            const double sg = sigma[static_cast<std::size_t>(i)];
            if (sg == 0.0) continue;
            const double b_here = s_beta[static_cast<std::size_t>(i)].value;
            const double b_next = s_beta[static_cast<std::size_t>(wrap(i + 1, l_rays))].value;
            const double b_prev = s_beta[static_cast<std::size_t>(wrap(i - 1, l_rays))].value;

            // Frozen-coefficient matrix part.
            next_lambda[static_cast<std::size_t>(wrap(i + 2, l_rays))] += sg * 2.0 * b_next * c2;
            next_lambda[static_cast<std::size_t>(wrap(i + 1, l_rays))] += sg * -4.0 * (b_next + b_here) * c1;
            next_lambda[static_cast<std::size_t>(i)] += sg * 2.0 * (b_next + 4.0 * b_here + b_prev);
            next_lambda[static_cast<std::size_t>(wrap(i - 1, l_rays))] += sg * -4.0 * (b_here + b_prev) * c1;
            next_lambda[static_cast<std::size_t>(wrap(i - 2, l_rays))] += sg * 2.0 * b_prev * c2;

            // Data and balloon pieces of the force.
            const double ct = cos_t[static_cast<std::size_t>(i)];
            const double st = sin_t[static_cast<std::size_t>(i)];
            scatter(pass_gx, s_gx[static_cast<std::size_t>(i)], sg * ct);
            scatter(pass_gy, s_gy[static_cast<std::size_t>(i)], sg * st);
            const double inv_max = 1.0 / traj.rho_max.values[static_cast<std::size_t>(i)];
            scatter(learnable.grad_kappa, s_kappa[static_cast<std::size_t>(i)], -sg * inv_max);
            next_lambda[static_cast<std::size_t>(i)] +=
                sg * (ct * directional(s_gx[static_cast<std::size_t>(i)], ct, st) +
                      st * directional(s_gy[static_cast<std::size_t>(i)], ct, st) -
                      inv_max * directional(s_kappa[static_cast<std::size_t>(i)], ct, st));
        }

        // Beta enters the update of rays i-1, i, i+1; gather the quadratic
        // coefficient of each sampled beta value, then scatter.
        for (int j = 0; j < l_rays; ++j) {
            const int jm = wrap(j - 1, l_rays);
            const int jp = wrap(j + 1, l_rays);
            auto r = [&](int k) { return rho[static_cast<std::size_t>(wrap(k, l_rays))]; };
            // from step equation i = j-1 (beta_j is its "next" sample)
            const double c_from_prev = 2.0 * c2 * r(j + 1) - 4.0 * c1 * r(j) + 2.0 * r(j - 1);
            // from step equation i = j
            const double c_from_here = -4.0 * c1 * r(j + 1) + 8.0 * r(j) - 4.0 * c1 * r(j - 1);
            // from step equation i = j+1 (beta_j is its "prev" sample)
            const double c_from_next = 2.0 * r(j + 1) - 4.0 * c1 * r(j) + 2.0 * c2 * r(j - 1);
            const double g_beta = sigma[static_cast<std::size_t>(jm)] * c_from_prev +
                                  sigma[static_cast<std::size_t>(j)] * c_from_here +
                                  sigma[static_cast<std::size_t>(jp)] * c_from_next;
            if (g_beta == 0.0) continue;
            scatter(learnable.grad_beta, s_beta[static_cast<std::size_t>(j)], g_beta);
            next_lambda[static_cast<std::size_t>(j)] +=
                g_beta * directional(s_beta[static_cast<std::size_t>(j)],
                                     cos_t[static_cast<std::size_t>(j)],
                                     sin_t[static_cast<std::size_t>(j)]);
        }

        std::swap(lambda, next_lambda);
    }

    sobel_adjoint_accumulate(pass_gx, pass_gy, learnable.grad_d);
    for (std::size_t i = 0; i < pass_gx.values.size(); ++i) {
        learnable.grad_gx.values[i] += pass_gx.values[i];
        learnable.grad_gy.values[i] += pass_gy.values[i];
    }
}

void sgd_momentum_step(LearnableFields& learnable, const TrainConfig& config) {
    auto update = [&](ScalarField& param, ScalarField& mom, const ScalarField& grad) {
        for (std::size_t i = 0; i < param.values.size(); ++i) {
            mom.values[i] = config.momentum * mom.values[i] + grad.values[i];
            param.values[i] = std::max(0.0, param.values[i] - config.learning_rate * mom.values[i]);
        }
    };
    update(learnable.fields.d, learnable.mom_d, learnable.grad_d);
    update(learnable.fields.beta, learnable.mom_beta, learnable.grad_beta);
    update(learnable.fields.kappa, learnable.mom_kappa, learnable.grad_kappa);
    learnable.zero_grads();
    learnable.fields.refresh_d_gradients();
}

Point2 sample_interior_center(const Polygon& gt, int width, int height, double rho_min,
                              Rng& rng) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const int x = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(width)));
        const int y = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(height)));
        const Point2 p{x + 0.5, y + 0.5};
        if (point_in_polygon(p, gt) && polygon_boundary_distance(p, gt) >= rho_min) {
            return p;
        }
    }
    throw NoInteriorPointError("sample_interior_center: no admissible pixel after 10000 draws");
}

double train_step(const Polygon& gt, LearnableFields& learnable, Point2 center,
                  const TrainConfig& config) {
    const std::vector<double> rho_gt = ground_truth_rays(gt, center, config.rays);

    RayContour seed;
    seed.center = center;
    seed.radii.assign(static_cast<std::size_t>(config.rays), config.evolution.rho_min);
    const EvolveResult result = evolve(seed, learnable.fields, config.evolution);

    const double loss = ray_loss_l1(result.contour.radii, rho_gt);
    const std::vector<double> d_loss = loss_grad(result.contour.radii, rho_gt);
    backward_through_evolution(result.trajectory, learnable, d_loss);
    sgd_momentum_step(learnable, config);
    return loss;
}

TrainResult train(const std::vector<Scene>& scenes, const TrainConfig& config) {
    if (scenes.empty()) throw Error("train: no scenes");
    if (!(config.learning_rate >= 0.0) || !(config.momentum >= 0.0) || config.momentum >= 1.0 ||
        config.train_steps < 0 || config.rays < 5) {
        throw Error("train: config requires lr >= 0, momentum in [0, 1), steps >= 0, rays >= 5");
    }
    TrainResult result;
    result.fields.reserve(scenes.size());
    for (const Scene& s : scenes) {
        result.fields.emplace_back(s.fields);
    }
    Rng rng(config.seed);
    for (int step = 0; step < config.train_steps; ++step) {
        const int si = scenes.size() > 1
                           ? static_cast<int>(rng.uniform_int(scenes.size()))
                           : 0;
        const Scene& scene = scenes[static_cast<std::size_t>(si)];
        const int pi = scene.gt_polygons.size() > 1
                           ? static_cast<int>(rng.uniform_int(scene.gt_polygons.size()))
                           : 0;
        const Polygon& poly = scene.gt_polygons[static_cast<std::size_t>(pi)];
        const Point2 center = sample_interior_center(poly, scene.width, scene.height,
                                                     config.evolution.rho_min, rng);
        const double loss =
            train_step(poly, result.fields[static_cast<std::size_t>(si)], center, config);
        result.history.push_back(TrainRecord{step, si, loss});
    }
    return result;
}

}  // namespace aray

#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace aray::cli {

struct SynthArgs {
    std::string out_dir;
    std::uint64_t seed = 0;
    int width = 64;
    int height = 64;
    int instances = 1;
    std::string shape = "convex";
    int count = 1;
    double d_gain = 0.0;      // 0 = library default
    double kappa_gain = 1.0;
};

struct EvolveArgs {
    std::string scene_dir;
    std::string out_dir;
    int rays = 60;
    double dt = 2e-4;
    int steps = 200;
    double rho_min = 1.0;
    std::string solver = "explicit";
    bool multi_init = false;
    std::optional<double> convergence_eps;
    std::string render_path;
    int render_every = 20;
    std::string metrics_path;
    std::string trajectory_path;
};

struct TrainArgs {
    std::string scene_dir;
    std::string out_dir;
    int train_steps = 100;
    double learning_rate = 4e-5;
    double momentum = 0.3;
    std::uint64_t seed = 0;
    int rays = 60;
    double dt = 2e-4;
    int evo_steps = 200;
    double rho_min = 1.0;
    std::string history_path;
};

struct EvalArgs {
    std::string pred_dir;
    std::string gt_dir;
    std::string report_path;
    std::string report_csv_path;
    std::string curve_path;
    std::string curve_svg_path;
};

int run_synth(const SynthArgs& args);
int run_evolve(const EvolveArgs& args);
int run_train(const TrainArgs& args);
int run_eval(const EvalArgs& args);

}  // namespace aray::cli

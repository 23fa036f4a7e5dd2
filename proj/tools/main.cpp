#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "aray/errors.hpp"
#include "commands.hpp"

// Exit codes: 0 success, 2 usage error, 3 I/O failure, 4 numeric failure.

int main(int argc, char** argv) {
    using namespace aray;
    using namespace aray::cli;

    CLI::App app{"Active-ray contour toolkit: synthetic scenes, contour "
                 "evolution, field training, and evaluation"};
    app.require_subcommand(1);

    SynthArgs synth;
    CLI::App* cmd_synth = app.add_subcommand("synth", "Generate synthetic scenes");
    cmd_synth->add_option("--out", synth.out_dir, "Output directory")->required();
    cmd_synth->add_option("--seed", synth.seed, "Base RNG seed");
    cmd_synth->add_option("--width", synth.width)->check(CLI::Range(16, 4096));
    cmd_synth->add_option("--height", synth.height)->check(CLI::Range(16, 4096));
    cmd_synth->add_option("--instances", synth.instances, "Instances per scene")
        ->check(CLI::Range(1, 64));
    cmd_synth->add_option("--shape", synth.shape, "convex | star | ushape");
    cmd_synth->add_option("--count", synth.count, "Number of scenes")->check(CLI::Range(1, 100000));
    cmd_synth->add_option("--d-gain", synth.d_gain, "Data map gain (0 = default)");
    cmd_synth->add_option("--kappa-gain", synth.kappa_gain, "Balloon map gain");

    EvolveArgs evolve;
    double eps_value = 0.0;
    CLI::App* cmd_evolve = app.add_subcommand("evolve", "Evolve contours over a scene");
    cmd_evolve->add_option("--scene", evolve.scene_dir, "Scene directory")->required();
    cmd_evolve->add_option("--out", evolve.out_dir, "Prediction output directory");
    cmd_evolve->add_option("--L", evolve.rays, "Rays per contour")->check(CLI::Range(5, 4096));
    cmd_evolve->add_option("--dt", evolve.dt, "Time step")->check(CLI::PositiveNumber);
    cmd_evolve->add_option("--steps", evolve.steps, "Iterations")->check(CLI::Range(0, 10000000));
    cmd_evolve->add_option("--rho-min", evolve.rho_min)->check(CLI::PositiveNumber);
    cmd_evolve->add_option("--solver", evolve.solver, "explicit | imex");
    cmd_evolve->add_flag("--multi-init", evolve.multi_init,
                         "Cover each segment with several contours");
    CLI::Option* eps_opt =
        cmd_evolve->add_option("--convergence-eps", eps_value, "Early-stop tolerance");
    cmd_evolve->add_option("--render", evolve.render_path, "Overlay SVG path");
    cmd_evolve->add_option("--render-every", evolve.render_every, "Intermediate stride")
        ->check(CLI::Range(1, 1000000));
    cmd_evolve->add_option("--metrics", evolve.metrics_path, "Per-instance metrics CSV");
    cmd_evolve->add_option("--trajectory", evolve.trajectory_path, "Radii trajectory CSV");

    TrainArgs train;
    CLI::App* cmd_train = app.add_subcommand("train", "Train energy fields on a scene");
    cmd_train->add_option("--scene", train.scene_dir, "Scene directory")->required();
    cmd_train->add_option("--out", train.out_dir, "Trained fields directory")->required();
    cmd_train->add_option("--train-steps", train.train_steps)->check(CLI::Range(0, 10000000));
    cmd_train->add_option("--lr", train.learning_rate)->check(CLI::PositiveNumber);
    cmd_train->add_option("--momentum", train.momentum)->check(CLI::Range(0.0, 0.999999));
    cmd_train->add_option("--seed", train.seed, "RNG seed");
    cmd_train->add_option("--L", train.rays, "Rays per contour")->check(CLI::Range(5, 4096));
    cmd_train->add_option("--dt", train.dt, "Evolution time step")->check(CLI::PositiveNumber);
    cmd_train->add_option("--evo-steps", train.evo_steps, "Evolution iterations per training step")
        ->check(CLI::Range(0, 10000000));
    cmd_train->add_option("--rho-min", train.rho_min)->check(CLI::PositiveNumber);
    cmd_train->add_option("--history", train.history_path, "Loss history CSV");

    EvalArgs eval;
    CLI::App* cmd_eval = app.add_subcommand("eval", "Score predictions against a scene");
    cmd_eval->add_option("--pred", eval.pred_dir, "Prediction directory")->required();
    cmd_eval->add_option("--gt", eval.gt_dir, "Ground-truth scene directory")->required();
    cmd_eval->add_option("--out", eval.report_path, "JSON report path")->required();
    cmd_eval->add_option("--csv", eval.report_csv_path, "Per-instance CSV path");
    cmd_eval->add_option("--curve", eval.curve_path, "Alignment curve CSV path");
    cmd_eval->add_option("--curve-svg", eval.curve_svg_path, "Alignment curve SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*cmd_synth) return run_synth(synth);
        if (*cmd_evolve) {
            if (eps_opt->count() > 0) evolve.convergence_eps = eps_value;
            return run_evolve(evolve);
        }
        if (*cmd_train) return run_train(train);
        if (*cmd_eval) return run_eval(eval);
    } catch (const NonFiniteError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 4;
    } catch (const SingularSystemError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 4;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o failure: %s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 2;
}

#include <cstdio>
#include <sstream>

#include "aray/io.hpp"
#include "aray/learning.hpp"
#include "aray/scene.hpp"
#include "commands.hpp"
#include "manifest.hpp"

namespace aray::cli {

int run_train(const TrainArgs& args) {
    const Scene scene = load_scene(args.scene_dir);

    TrainConfig cfg;
    cfg.learning_rate = args.learning_rate;
    cfg.momentum = args.momentum;
    cfg.train_steps = args.train_steps;
    cfg.rays = args.rays;
    cfg.seed = args.seed;
    cfg.evolution.dt = args.dt;
    cfg.evolution.steps = args.evo_steps;
    cfg.evolution.rho_min = args.rho_min;

    ManifestScope manifest("train", args.out_dir);
    manifest.set_seed(args.seed);
    manifest.config() = {{"scene", args.scene_dir},  {"train_steps", args.train_steps},
                         {"lr", args.learning_rate}, {"momentum", args.momentum},
                         {"L", args.rays},           {"dt", args.dt},
                         {"evo_steps", args.evo_steps}, {"rho_min", args.rho_min}};
    manifest.add_input(args.scene_dir);

    const TrainResult result = train({scene}, cfg);

    const std::filesystem::path out(args.out_dir);
    std::filesystem::create_directories(out);
    const FieldSet& trained = result.fields.front().fields;
    write_arf(trained.d, out / "d.arf");
    write_arf(trained.beta, out / "beta.arf");
    write_arf(trained.kappa, out / "kappa.arf");
    manifest.add_output(out / "d.arf");
    manifest.add_output(out / "beta.arf");
    manifest.add_output(out / "kappa.arf");

    if (!args.history_path.empty()) {
        std::ostringstream csv;
        csv << "step,scene_id,loss\n";
        for (const TrainRecord& rec : result.history) {
            csv << rec.step << "," << rec.scene_index << "," << format_double(rec.loss) << "\n";
        }
        write_file_atomic(args.history_path, csv.str());
        manifest.add_output(args.history_path);
    }
    manifest.write();

    double mean_loss = 0.0;
    for (const TrainRecord& rec : result.history) mean_loss += rec.loss;
    if (!result.history.empty()) mean_loss /= static_cast<double>(result.history.size());
    std::printf("train: %d step(s), mean loss %.4f -> %s\n", args.train_steps, mean_loss,
                args.out_dir.c_str());
    return 0;
}

}  // namespace aray::cli

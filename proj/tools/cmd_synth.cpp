#include <cstdio>
#include <vector>

#include "aray/parallel.hpp"
#include "aray/scene.hpp"
#include "commands.hpp"
#include "manifest.hpp"

namespace aray::cli {

int run_synth(const SynthArgs& args) {
    ShapeKind kind;
    if (args.shape == "convex") kind = ShapeKind::Convex;
    else if (args.shape == "star") kind = ShapeKind::Star;
    else if (args.shape == "ushape") kind = ShapeKind::UShape;
    else {
        std::fprintf(stderr, "synth: unknown shape '%s'\n", args.shape.c_str());
        return 2;
    }
    const double d_gain = args.d_gain > 0.0 ? args.d_gain : kDefaultDataGain;

    ManifestScope manifest("synth", args.out_dir);
    manifest.set_seed(args.seed);
    manifest.config() = {{"width", args.width},      {"height", args.height},
                         {"instances", args.instances}, {"shape", args.shape},
                         {"count", args.count},      {"d_gain", d_gain},
                         {"kappa_gain", args.kappa_gain}};

    const std::filesystem::path out(args.out_dir);
    std::filesystem::create_directories(out);

    std::vector<std::filesystem::path> dirs(static_cast<std::size_t>(args.count));
    parallel_for(args.count, [&](int k) {
        const std::uint64_t scene_seed = args.seed + static_cast<std::uint64_t>(k);
        Rng rng(scene_seed);
        Scene scene = build_scene(rng, args.width, args.height, args.instances, kind, d_gain,
                                  args.kappa_gain);
        scene.seed = scene_seed;
        char name[32];
        std::snprintf(name, sizeof(name), "scene_%04d", k);
        dirs[static_cast<std::size_t>(k)] = out / name;
        save_scene(scene, dirs[static_cast<std::size_t>(k)]);
    });
    for (const auto& dir : dirs) manifest.add_output(dir);
    manifest.write();
    std::printf("synth: wrote %d scene(s) under %s\n", args.count, args.out_dir.c_str());
    return 0;
}

}  // namespace aray::cli

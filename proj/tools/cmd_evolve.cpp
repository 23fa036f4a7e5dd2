#include <cstdio>
#include <sstream>
#include <vector>

#include "aray/evolution.hpp"
#include "aray/io.hpp"
#include "aray/metrics.hpp"
#include "aray/scene.hpp"
#include "commands.hpp"
#include "manifest.hpp"
#include "svg_render.hpp"

namespace aray::cli {

int run_evolve(const EvolveArgs& args) {
    const Scene scene = load_scene(args.scene_dir);

    EvolutionConfig cfg;
    cfg.dt = args.dt;
    cfg.steps = args.steps;
    cfg.rho_min = args.rho_min;
    cfg.convergence_eps = args.convergence_eps;
    const bool imex = args.solver == "imex";
    if (!imex && args.solver != "explicit") {
        std::fprintf(stderr, "evolve: unknown solver '%s'\n", args.solver.c_str());
        return 2;
    }
    cfg.solver = imex ? SolverKind::ImplicitExplicit : SolverKind::Explicit;

    const std::filesystem::path out_dir =
        args.out_dir.empty() ? std::filesystem::path(args.scene_dir) / "predictions"
                             : std::filesystem::path(args.out_dir);
    ManifestScope manifest("evolve", out_dir);
    manifest.set_seed(scene.seed);
    manifest.config() = {{"scene", args.scene_dir},
                         {"L", args.rays},
                         {"dt", args.dt},
                         {"steps", args.steps},
                         {"rho_min", args.rho_min},
                         {"solver", args.solver},
                         {"multi_init", args.multi_init}};
    if (args.convergence_eps) manifest.config()["convergence_eps"] = *args.convergence_eps;
    manifest.add_input(args.scene_dir);

    PredictionSet preds;
    preds.width = scene.width;
    preds.height = scene.height;
    std::vector<ContourTrace> traces;
    std::ostringstream metrics_csv;
    metrics_csv << "instance,init_iou,final_iou,boundf\n";
    std::ostringstream traj_csv;
    traj_csv << "step,i,rho\n";
    bool trajectory_written = false;

    auto run_one = [&](const RayContour& seed) {
        const EvolveResult res = imex ? evolve_implicit_explicit(seed, scene.fields, cfg)
                                      : evolve(seed, scene.fields, cfg);
        ContourTrace trace;
        trace.initial = res.trajectory.rho.front();
        for (int t = args.render_every; t + 1 < static_cast<int>(res.trajectory.rho.size());
             t += args.render_every) {
            trace.intermediates.push_back(res.trajectory.rho[static_cast<std::size_t>(t)]);
        }
        trace.final = res.contour;
        traces.push_back(trace);
        if (!trajectory_written) {
            for (std::size_t t = 0; t < res.trajectory.rho.size(); ++t) {
                for (int i = 0; i < res.contour.size(); ++i) {
                    traj_csv << t << "," << i << ","
                             << format_double(res.trajectory.rho[t][static_cast<std::size_t>(i)])
                             << "\n";
                }
            }
            trajectory_written = true;
        }
        return res.contour;
    };

    for (std::size_t k = 0; k < scene.gt_polygons.size(); ++k) {
        const Polygon& gt = scene.gt_polygons[k];
        const Mask segment = rasterize(gt, scene.width, scene.height);
        const Mask gt_mask = segment;

        std::vector<RayContour> finals;
        Mask covered(scene.width, scene.height);
        if (args.multi_init) {
            MultiInitLimits limits;
            limits.rays = args.rays;
            const MultiInitResult res = multi_init_evolve(segment, scene.fields, cfg, limits);
            for (const RayContour& c : res.contours) {
                traces.push_back(ContourTrace{{}, {}, c});
                finals.push_back(c);
            }
            covered = res.covered;
        } else {
            const RayContour final_contour = run_one(seed_for_segment(segment, cfg.rho_min, args.rays));
            finals.push_back(final_contour);
            covered = rasterize(contour_polygon(final_contour), scene.width, scene.height);
        }

        const RayContour seed = seed_for_segment(segment, cfg.rho_min, args.rays);
        const double init_iou =
            iou(rasterize(contour_polygon(seed), scene.width, scene.height), gt_mask);
        const double final_iou = iou(covered, gt_mask);
        const double bf = boundf(covered, gt_mask);
        metrics_csv << k << "," << format_double(init_iou) << "," << format_double(final_iou)
                    << "," << format_double(bf) << "\n";

        for (const RayContour& c : finals) {
            PredictionInstance inst;
            inst.polygon = contour_polygon(c);
            inst.contour = c;
            preds.instances.push_back(std::move(inst));
        }
    }

    save_predictions(preds, out_dir);
    manifest.add_output(out_dir / "predictions.json");
    if (!args.metrics_path.empty()) {
        write_file_atomic(args.metrics_path, metrics_csv.str());
        manifest.add_output(args.metrics_path);
    }
    if (!args.trajectory_path.empty()) {
        write_file_atomic(args.trajectory_path, traj_csv.str());
        manifest.add_output(args.trajectory_path);
    }
    if (!args.render_path.empty()) {
        render_overlay_svg(args.render_path, scene.width, scene.height, scene.gt_polygons, traces);
        manifest.add_output(args.render_path);
    }
    manifest.write();
    std::printf("evolve: %zu instance(s), %zu contour(s) -> %s\n", scene.gt_polygons.size(),
                preds.instances.size(), out_dir.string().c_str());
    return 0;
}

}  // namespace aray::cli

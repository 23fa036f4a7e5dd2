#include <cstdio>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "aray/io.hpp"
#include "aray/metrics.hpp"
#include "aray/scene.hpp"
#include "commands.hpp"
#include "manifest.hpp"
#include "svg_render.hpp"

namespace aray::cli {

int run_eval(const EvalArgs& args) {
    const Scene scene = load_scene(args.gt_dir);
    const PredictionSet preds = load_predictions(args.pred_dir);
    if (preds.width != scene.width || preds.height != scene.height) {
        throw IoError("eval: prediction and scene dimensions differ");
    }

    ManifestScope manifest("eval", std::filesystem::path(args.report_path).parent_path());
    manifest.set_seed(scene.seed);
    manifest.config() = {{"pred", args.pred_dir}, {"gt", args.gt_dir}};
    manifest.add_input(args.pred_dir);
    manifest.add_input(args.gt_dir);

    std::vector<Mask> gt_masks;
    gt_masks.reserve(scene.gt_polygons.size());
    for (const Polygon& poly : scene.gt_polygons) {
        gt_masks.push_back(rasterize(poly, scene.width, scene.height));
    }
    std::vector<Mask> pred_masks;
    pred_masks.reserve(preds.instances.size());
    for (const PredictionInstance& inst : preds.instances) {
        pred_masks.push_back(rasterize(inst.polygon, scene.width, scene.height));
    }

    // Per ground-truth instance: best-IoU prediction, boundary F against it.
    std::vector<InstanceResult> rows;
    double miou = 0.0;
    double mean_bf = 0.0;
    for (const Mask& gt : gt_masks) {
        InstanceResult row;
        row.gt_area = static_cast<double>(gt.count());
        int best = -1;
        for (std::size_t p = 0; p < pred_masks.size(); ++p) {
            const double v = iou(gt, pred_masks[p]);
            if (v > row.iou) {
                row.iou = v;
                best = static_cast<int>(p);
            }
        }
        row.boundf = best >= 0 ? boundf(pred_masks[static_cast<std::size_t>(best)], gt) : 0.0;
        miou += row.iou;
        mean_bf += row.boundf;
        rows.push_back(row);
    }
    if (!rows.empty()) {
        miou /= static_cast<double>(rows.size());
        mean_bf /= static_cast<double>(rows.size());
    }
    const double wcov = weighted_coverage(gt_masks, pred_masks);

    AlignmentCurve curve;
    if (!preds.instances.empty() && !scene.gt_polygons.empty()) {
        std::vector<Polygon> pred_polys;
        for (const PredictionInstance& inst : preds.instances) pred_polys.push_back(inst.polygon);
        curve = alignment_recall_polygons(pred_polys, scene.gt_polygons);
    }

    nlohmann::json report;
    report["miou"] = miou;
    report["wcov"] = wcov;
    report["boundf"] = mean_bf;
    report["num_gt"] = rows.size();
    report["num_pred"] = preds.instances.size();
    nlohmann::json inst_rows = nlohmann::json::array();
    for (const InstanceResult& row : rows) {
        inst_rows.push_back({{"iou", row.iou}, {"gt_area", row.gt_area}, {"boundf", row.boundf}});
    }
    report["instances"] = std::move(inst_rows);
    write_file_atomic(args.report_path, report.dump(2) + "\n");
    manifest.add_output(args.report_path);

    if (!args.report_csv_path.empty()) {
        std::ostringstream csv;
        csv << "gt_index,iou,gt_area,boundf\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            csv << i << "," << format_double(rows[i].iou) << "," << format_double(rows[i].gt_area)
                << "," << format_double(rows[i].boundf) << "\n";
        }
        write_file_atomic(args.report_csv_path, csv.str());
        manifest.add_output(args.report_csv_path);
    }
    if (!args.curve_path.empty()) {
        std::ostringstream csv;
        csv << "alignment_error,recall\n";
        for (const auto& [e, r] : curve.points) {
            csv << format_double(e) << "," << format_double(r) << "\n";
        }
        write_file_atomic(args.curve_path, csv.str());
        manifest.add_output(args.curve_path);
    }
    if (!args.curve_svg_path.empty()) {
        render_curve_svg(args.curve_svg_path, curve);
        manifest.add_output(args.curve_svg_path);
    }
    manifest.write();
    std::printf("eval: mIoU=%.4f WCov=%.4f BoundF=%.4f (%zu gt, %zu pred)\n", miou, wcov, mean_bf,
                rows.size(), preds.instances.size());
    return 0;
}

}  // namespace aray::cli

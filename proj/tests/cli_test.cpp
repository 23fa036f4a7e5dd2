#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aray/io.hpp"
#include "aray/metrics.hpp"
#include "aray/scene.hpp"

using namespace aray;
namespace fs = std::filesystem;

namespace {

const std::string kCli = ARAY_CLI_PATH;

fs::path work_dir(const char* tag) {
    const fs::path dir = fs::temp_directory_path() / (std::string("aray_cli_") + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int sh(const fs::path& cwd, const std::string& cmd) {
    const std::string full = "cd '" + cwd.string() + "' && " + cmd + " >/dev/null 2>&1";
    const int status = std::system(full.c_str());
    return WEXITSTATUS(status);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

TEST_CASE("synth writes loadable scenes and honors seeds") {
    const fs::path dir = work_dir("synth");
    REQUIRE(sh(dir, kCli + " synth --out s --seed 3 --width 48 --height 48 --count 3") == 0);
    for (const char* name : {"scene_0000", "scene_0001", "scene_0002"}) {
        const Scene scene = load_scene(dir / "s" / name);
        CHECK(scene.width == 48);
        CHECK(scene.gt_polygons.size() == 1);
    }
    CHECK(fs::exists(dir / "s/run_manifest.json"));

    CHECK(sh(dir, kCli + " synth --out bad --instances 0") == 2);
    CHECK(sh(dir, kCli + " synth --out bad --shape blob") == 2);
    fs::remove_all(dir);
}

TEST_CASE("synth produces loadable scenes at batch scale") {
    const fs::path dir = work_dir("batch");
    REQUIRE(sh(dir, kCli + " synth --out s --seed 21 --width 64 --height 64 --count 100") == 0);
    int loaded = 0;
    for (int k = 0; k < 100; ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "scene_%04d", k);
        const Scene scene = load_scene(dir / "s" / name);  // loader validates invariants
        CHECK(scene.width == 64);
        ++loaded;
    }
    CHECK(loaded == 100);
    fs::remove_all(dir);
}

TEST_CASE("evolve produces metrics rows and respects --steps 0") {
    const fs::path dir = work_dir("evolve");
    REQUIRE(sh(dir, kCli + " synth --out s --seed 5 --width 64 --height 64 --count 1") == 0);
    REQUIRE(sh(dir, kCli + " evolve --scene s/scene_0000 --out p --metrics m.csv"
                           " --render r.svg --trajectory t.csv") == 0);

    const auto rows = read_csv(dir / "m.csv");
    REQUIRE(rows.size() == 2);  // header + one instance
    CHECK(rows[0] == std::vector<std::string>{"instance", "init_iou", "final_iou", "boundf"});
    const double final_iou = std::stod(rows[1][2]);
    CHECK(final_iou >= 0.0);
    CHECK(final_iou <= 1.0);
    CHECK(std::stod(rows[1][1]) < final_iou);

    const std::string svg = read_file(dir / "r.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polygon") != std::string::npos);

    // steps 0: the output contour equals the initialization
    REQUIRE(sh(dir, kCli + " evolve --scene s/scene_0000 --out p0 --steps 0") == 0);
    const PredictionSet preds = load_predictions(dir / "p0");
    REQUIRE(preds.instances.size() == 1);
    REQUIRE(preds.instances[0].contour.has_value());
    const auto& radii = preds.instances[0].contour->radii;
    for (double r : radii) CHECK(r == radii[0]);  // seed circles are uniform

    CHECK(sh(dir, kCli + " evolve --scene nowhere --out x") == 3);
    CHECK(sh(dir, kCli + " evolve --scene s/scene_0000 --solver magic") == 2);
    fs::remove_all(dir);
}

TEST_CASE("explicit and imex solvers land within half a pixel via the CLI") {
    const fs::path dir = work_dir("solvers");
    REQUIRE(sh(dir, kCli + " synth --out s --seed 11 --width 64 --height 64 --count 1") == 0);
    REQUIRE(sh(dir, kCli + " evolve --scene s/scene_0000 --out pe --solver explicit"
                           " --steps 20000 --convergence-eps 1e-6") == 0);
    REQUIRE(sh(dir, kCli + " evolve --scene s/scene_0000 --out pi --solver imex"
                           " --steps 20000 --convergence-eps 1e-6") == 0);
    const PredictionSet a = load_predictions(dir / "pe");
    const PredictionSet b = load_predictions(dir / "pi");
    REQUIRE(a.instances.size() == b.instances.size());
    for (std::size_t k = 0; k < a.instances.size(); ++k) {
        const auto& ra = a.instances[k].contour->radii;
        const auto& rb = b.instances[k].contour->radii;
        REQUIRE(ra.size() == rb.size());
        for (std::size_t i = 0; i < ra.size(); ++i) {
            CHECK(std::abs(ra[i] - rb[i]) <= 0.5);
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("train with zero steps copies the pretrain fields byte for byte") {
    const fs::path dir = work_dir("train0");
    REQUIRE(sh(dir, kCli + " synth --out s --seed 9 --width 48 --height 48 --count 1") == 0);
    REQUIRE(sh(dir, kCli + " train --scene s/scene_0000 --out f --train-steps 0") == 0);
    for (const char* name : {"d.arf", "beta.arf", "kappa.arf"}) {
        CHECK(read_file(dir / "s/scene_0000" / name) == read_file(dir / "f" / name));
    }
    fs::remove_all(dir);
}

TEST_CASE("eval scores perfect predictions as 1.0") {
    const fs::path dir = work_dir("eval");
    REQUIRE(sh(dir, kCli + " synth --out s --seed 13 --width 64 --height 64 --count 1") == 0);
    const Scene scene = load_scene(dir / "s/scene_0000");

    PredictionSet preds;
    preds.width = scene.width;
    preds.height = scene.height;
    for (const Polygon& poly : scene.gt_polygons) {
        preds.instances.push_back(PredictionInstance{poly, std::nullopt});
    }
    save_predictions(preds, dir / "perfect");

    REQUIRE(sh(dir, kCli + " eval --pred perfect --gt s/scene_0000 --out rep.json"
                           " --curve c.csv --curve-svg c.svg --csv rep.csv") == 0);
    const std::string report = read_file(dir / "rep.json");
    CHECK(report.find("\"miou\": 1.0") != std::string::npos);
    CHECK(report.find("\"wcov\": 1.0") != std::string::npos);
    CHECK(report.find("\"boundf\": 1.0") != std::string::npos);

    // empty prediction set scores zero coverage
    PredictionSet empty;
    empty.width = scene.width;
    empty.height = scene.height;
    save_predictions(empty, dir / "none");
    REQUIRE(sh(dir, kCli + " eval --pred none --gt s/scene_0000 --out rep0.json") == 0);
    const std::string report0 = read_file(dir / "rep0.json");
    CHECK(report0.find("\"wcov\": 0.0") != std::string::npos);
    CHECK(report0.find("\"miou\": 0.0") != std::string::npos);

    fs::remove_all(dir);
}

TEST_CASE("eval reports the same numbers as library-level calls") {
    const fs::path dir = work_dir("eval_consistency");
    REQUIRE(sh(dir, kCli + " synth --out s --seed 17 --width 64 --height 64 --count 1") == 0);
    REQUIRE(sh(dir, kCli + " evolve --scene s/scene_0000 --out p") == 0);
    REQUIRE(sh(dir, kCli + " eval --pred p --gt s/scene_0000 --out rep.json") == 0);

    const Scene scene = load_scene(dir / "s/scene_0000");
    const PredictionSet preds = load_predictions(dir / "p");
    REQUIRE(preds.instances.size() == 1);
    const Mask gt_mask = rasterize(scene.gt_polygons[0], 64, 64);
    const Mask pred_mask = rasterize(preds.instances[0].polygon, 64, 64);
    const double want_iou = iou(gt_mask, pred_mask);
    const double want_bf = boundf(pred_mask, gt_mask);

    const nlohmann::json report = nlohmann::json::parse(read_file(dir / "rep.json"));
    CHECK(report.at("miou").get<double>() == want_iou);
    CHECK(report.at("boundf").get<double>() == want_bf);
    CHECK(report.at("wcov").get<double>() == want_iou);
    fs::remove_all(dir);
}

#include <doctest.h>

#include <cstring>
#include <filesystem>

#include "aray/io.hpp"
#include "aray/rng.hpp"

using namespace aray;

namespace {

std::filesystem::path temp_dir(const char* tag) {
    const auto dir = std::filesystem::temp_directory_path() / (std::string("aray_io_") + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("arf round trip is bitwise") {
    Rng rng(1);
    ScalarField f(13, 7);
    for (double& v : f.values) v = rng.uniform(-1e6, 1e6);
    f.at(0, 0) = 0.0;
    f.at(1, 0) = -0.0;
    f.at(2, 0) = 1e-300;

    const auto dir = temp_dir("arf");
    write_arf(f, dir / "t.arf");
    const ScalarField g = read_arf(dir / "t.arf");
    CHECK(g.width == 13);
    CHECK(g.height == 7);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        CHECK(std::memcmp(&f.values[i], &g.values[i], 8) == 0);
    }

    // header checks
    std::string bytes = read_file(dir / "t.arf");
    CHECK(bytes.substr(0, 4) == "ARF1");
    CHECK(bytes.size() == 16 + 13 * 7 * 8);
    bytes[0] = 'X';
    write_file_atomic(dir / "bad.arf", bytes);
    CHECK_THROWS_AS(read_arf(dir / "bad.arf"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("pgm mask round trip") {
    Mask m(9, 5);
    m.set(0, 0, true);
    m.set(8, 4, true);
    m.set(4, 2, true);
    const auto dir = temp_dir("pgm");
    write_pgm(m, dir / "m.pgm");
    const Mask n = read_pgm_mask(dir / "m.pgm");
    CHECK(n.width == 9);
    CHECK(n.height == 5);
    CHECK(n.bits == m.bits);

    const std::string bytes = read_file(dir / "m.pgm");
    CHECK(bytes.substr(0, 3) == "P5\n");
    CHECK(bytes.find("255") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("pgm field export and import") {
    ScalarField f(4, 3);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = static_cast<double>(i);
    const auto dir = temp_dir("pgmf");
    write_pgm(f, dir / "f.pgm");
    const ScalarField g = read_pgm_field(dir / "f.pgm");
    CHECK(g.width == 4);
    CHECK(g.height == 3);
    CHECK(g.values.front() == 0.0);
    CHECK(g.values.back() == 255.0);  // max quantizes to maxval
    std::filesystem::remove_all(dir);
}

TEST_CASE("prediction files round trip") {
    PredictionSet preds;
    preds.width = 64;
    preds.height = 48;
    PredictionInstance inst;
    inst.polygon = Polygon{{{1.5, 2.25}, {10, 2}, {8, 9}}};
    RayContour c{{5.5, 4.5}, {1, 2, 3, 2.5, 1.5}};
    inst.contour = c;
    preds.instances.push_back(inst);
    PredictionInstance bare;
    bare.polygon = Polygon{{{20, 20}, {30, 20}, {25, 30}}};
    preds.instances.push_back(bare);

    const auto dir = temp_dir("preds");
    save_predictions(preds, dir);
    const PredictionSet got = load_predictions(dir);
    CHECK(got.width == 64);
    CHECK(got.height == 48);
    REQUIRE(got.instances.size() == 2);
    CHECK(got.instances[0].polygon.vertices[0].x == 1.5);
    REQUIRE(got.instances[0].contour.has_value());
    CHECK(got.instances[0].contour->radii == c.radii);
    CHECK_FALSE(got.instances[1].contour.has_value());
    std::filesystem::remove_all(dir);
}

TEST_CASE("format_double round trips") {
    for (double v : {0.0, 1.0, -1.5, 2e-4, 4e-5, 0.3, 1e300, -7.25e-12}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

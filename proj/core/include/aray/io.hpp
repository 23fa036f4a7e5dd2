#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aray/fields.hpp"
#include "aray/geometry.hpp"

namespace aray {

// ---- flat field binary (.arf) ----
// 16-byte header: magic "ARF1", u32 width, u32 height, u32 dtype (0 = f64
// little-endian), followed by the row-major payload.

void write_arf(const ScalarField& field, const std::filesystem::path& path);
ScalarField read_arf(const std::filesystem::path& path);

// ---- PGM (P5, maxval 255) ----

void write_pgm(const Mask& mask, const std::filesystem::path& path);  // foreground = 255
Mask read_pgm_mask(const std::filesystem::path& path);                // nonzero = foreground

/// Min-max quantized view of a field, for eyeballing only.
void write_pgm(const ScalarField& field, const std::filesystem::path& path);
ScalarField read_pgm_field(const std::filesystem::path& path);  // gray value as double

// ---- misc ----

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// Write via a temp file in the same directory, then rename over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

// ---- prediction files ----

struct PredictionInstance {
    Polygon polygon;
    std::optional<RayContour> contour;
};

struct PredictionSet {
    int width = 0;
    int height = 0;
    std::vector<PredictionInstance> instances;
};

/// predictions.json in `dir`: polygons as arrays of [x, y] pairs, plus the
/// ray form (center, radii) when available.
void save_predictions(const PredictionSet& preds, const std::filesystem::path& dir);
PredictionSet load_predictions(const std::filesystem::path& dir);

}  // namespace aray

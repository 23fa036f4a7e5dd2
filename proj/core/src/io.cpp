#include "aray/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace aray {

namespace {

constexpr char kArfMagic[4] = {'A', 'R', 'F', '1'};

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32(const std::string& s, std::size_t off) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(s[off])) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 3])) << 24);
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + path.string() + " (" + ec.message() + ")");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_arf(const ScalarField& field, const std::filesystem::path& path) {
    std::string out;
    out.reserve(16 + field.values.size() * 8);
    out.append(kArfMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(field.width));
    put_u32(out, static_cast<std::uint32_t>(field.height));
    put_u32(out, 0);  // dtype 0: f64 little-endian
    for (double v : field.values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        for (int b = 0; b < 8; ++b) {
            out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
        }
    }
    write_file_atomic(path, out);
}

ScalarField read_arf(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    if (data.size() < 16 || std::memcmp(data.data(), kArfMagic, 4) != 0) {
        throw IoError("not an ARF1 file: " + path.string());
    }
    const std::uint32_t w = get_u32(data, 4);
    const std::uint32_t h = get_u32(data, 8);
    const std::uint32_t dtype = get_u32(data, 12);
    if (dtype != 0) throw IoError("unsupported ARF dtype: " + path.string());
    const std::size_t need = 16 + static_cast<std::size_t>(w) * h * 8;
    if (data.size() != need) throw IoError("truncated ARF payload: " + path.string());

    ScalarField field(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) {
            bits |= static_cast<std::uint64_t>(
                        static_cast<unsigned char>(data[16 + i * 8 + static_cast<std::size_t>(b)]))
                    << (8 * b);
        }
        double v;
        std::memcpy(&v, &bits, 8);
        field.values[i] = v;
    }
    return field;
}

namespace {

std::string pgm_header(int w, int h) {
    return "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
}

struct PgmData {
    int width = 0;
    int height = 0;
    std::vector<unsigned char> gray;
};

PgmData read_pgm(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    std::istringstream in(data);
    std::string magic;
    in >> magic;
    if (magic != "P5") throw IoError("not a P5 PGM: " + path.string());
    auto next_token = [&in, &path]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw IoError("truncated PGM header: " + path.string());
    };
    const int w = std::stoi(next_token());
    const int h = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (maxval != 255) throw IoError("unsupported PGM maxval: " + path.string());
    const std::size_t off = static_cast<std::size_t>(in.tellg()) + 1;  // single whitespace
    const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (data.size() < off + need) throw IoError("truncated PGM payload: " + path.string());
    PgmData out;
    out.width = w;
    out.height = h;
    out.gray.assign(data.begin() + static_cast<std::ptrdiff_t>(off),
                    data.begin() + static_cast<std::ptrdiff_t>(off + need));
    return out;
}

}  // namespace

void write_pgm(const Mask& mask, const std::filesystem::path& path) {
    std::string out = pgm_header(mask.width, mask.height);
    for (std::uint8_t b : mask.bits) out.push_back(b ? static_cast<char>(255) : 0);
    write_file_atomic(path, out);
}

Mask read_pgm_mask(const std::filesystem::path& path) {
    const PgmData data = read_pgm(path);
    Mask mask(data.width, data.height);
    for (std::size_t i = 0; i < data.gray.size(); ++i) mask.bits[i] = data.gray[i] ? 1 : 0;
    return mask;
}

void write_pgm(const ScalarField& field, const std::filesystem::path& path) {
    double lo = field.values.empty() ? 0.0 : field.values[0];
    double hi = lo;
    for (double v : field.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double scale = (hi > lo) ? 255.0 / (hi - lo) : 0.0;
    std::string out = pgm_header(field.width, field.height);
    for (double v : field.values) {
        out.push_back(static_cast<char>(static_cast<int>((v - lo) * scale + 0.5)));
    }
    write_file_atomic(path, out);
}

ScalarField read_pgm_field(const std::filesystem::path& path) {
    const PgmData data = read_pgm(path);
    ScalarField field(data.width, data.height);
    for (std::size_t i = 0; i < data.gray.size(); ++i) {
        field.values[i] = static_cast<double>(data.gray[i]);
    }
    return field;
}

namespace {

nlohmann::json polygon_to_json(const Polygon& poly) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Point2& p : poly.vertices) {
        arr.push_back({p.x, p.y});
    }
    return arr;
}

Polygon polygon_from_json(const nlohmann::json& arr) {
    Polygon poly;
    for (const auto& pair : arr) {
        poly.vertices.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
    }
    return poly;
}

}  // namespace

void save_predictions(const PredictionSet& preds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json root;
    root["width"] = preds.width;
    root["height"] = preds.height;
    nlohmann::json items = nlohmann::json::array();
    for (const PredictionInstance& inst : preds.instances) {
        nlohmann::json item;
        item["polygon"] = polygon_to_json(inst.polygon);
        if (inst.contour) {
            item["contour"] = {{"center", {inst.contour->center.x, inst.contour->center.y}},
                               {"radii", inst.contour->radii}};
        }
        items.push_back(std::move(item));
    }
    root["instances"] = std::move(items);
    write_file_atomic(dir / "predictions.json", root.dump(2) + "\n");
}

PredictionSet load_predictions(const std::filesystem::path& dir) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(read_file(dir / "predictions.json"));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad predictions.json: " + std::string(e.what()));
    }
    PredictionSet preds;
    try {
        preds.width = root.at("width").get<int>();
        preds.height = root.at("height").get<int>();
        for (const auto& item : root.at("instances")) {
            PredictionInstance inst;
            inst.polygon = polygon_from_json(item.at("polygon"));
            if (item.contains("contour")) {
                RayContour c;
                c.center = {item["contour"].at("center").at(0).get<double>(),
                            item["contour"].at("center").at(1).get<double>()};
                c.radii = item["contour"].at("radii").get<std::vector<double>>();
                inst.contour = std::move(c);
            }
            preds.instances.push_back(std::move(inst));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad predictions.json: " + std::string(e.what()));
    }
    return preds;
}

}  // namespace aray

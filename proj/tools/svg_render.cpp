#include "svg_render.hpp"

#include <sstream>
#include <string>

#include "aray/io.hpp"

namespace aray::cli {

namespace {

void polygon_element(std::ostringstream& out, const std::vector<Point2>& pts,
                     const std::string& style) {
    out << "<polygon style=\"" << style << "\" points=\"";
    for (const Point2& p : pts) {
        out << format_double(p.x) << "," << format_double(p.y) << " ";
    }
    out << "\"/>\n";
}

}  // namespace

void render_overlay_svg(const std::filesystem::path& path, int width, int height,
                        const std::vector<Polygon>& gt_polygons,
                        const std::vector<ContourTrace>& traces) {
    std::ostringstream out;
    const int scale = 6;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width * scale
        << "\" height=\"" << height * scale << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    for (const Polygon& gt : gt_polygons) {
        polygon_element(out, gt.vertices,
                        "fill:#c8c8c8;fill-opacity:0.6;stroke:#606060;stroke-width:0.3");
    }
    for (const ContourTrace& trace : traces) {
        for (const auto& radii : trace.intermediates) {
            RayContour c{trace.final.center, radii};
            polygon_element(out, contour_points(c),
                            "fill:none;stroke:#9ecae1;stroke-width:0.15");
        }
        if (!trace.initial.empty()) {
            RayContour init{trace.final.center, trace.initial};
            polygon_element(out, contour_points(init),
                            "fill:none;stroke:#d62728;stroke-width:0.3;stroke-dasharray:1,0.6");
        }
        polygon_element(out, contour_points(trace.final),
                        "fill:none;stroke:#1f77b4;stroke-width:0.4");
    }
    out << "</svg>\n";
    write_file_atomic(path, out.str());
}

void render_curve_svg(const std::filesystem::path& path, const AlignmentCurve& curve) {
    const int w = 480;
    const int h = 360;
    const int margin = 40;
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    auto px = [&](double e) { return margin + e * (w - 2 * margin); };
    auto py = [&](double r) { return h - margin - r * (h - 2 * margin); };
    out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\""
        << py(0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\""
        << py(1) << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double v = t / 5.0;
        out << "<text x=\"" << px(v) - 8 << "\" y=\"" << py(0) + 16
            << "\" font-size=\"10\">" << format_double(v) << "</text>\n";
        out << "<text x=\"" << px(0) - 30 << "\" y=\"" << py(v) + 3
            << "\" font-size=\"10\">" << format_double(v) << "</text>\n";
    }
    out << "<text x=\"" << w / 2 - 50 << "\" y=\"" << h - 8
        << "\" font-size=\"11\">alignment error</text>\n";
    out << "<text x=\"10\" y=\"" << h / 2 << "\" font-size=\"11\" transform=\"rotate(-90 14 "
        << h / 2 << ")\">recall</text>\n";

    if (!curve.points.empty()) {
        out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
        double prev_recall = 0.0;
        out << format_double(px(0)) << "," << format_double(py(0)) << " ";
        for (const auto& [e, r] : curve.points) {
            out << format_double(px(e)) << "," << format_double(py(prev_recall)) << " ";
            out << format_double(px(e)) << "," << format_double(py(r)) << " ";
            prev_recall = r;
        }
        out << format_double(px(1)) << "," << format_double(py(prev_recall)) << " ";
        out << "\"/>\n";
    }
    out << "</svg>\n";
    write_file_atomic(path, out.str());
}

}  // namespace aray::cli

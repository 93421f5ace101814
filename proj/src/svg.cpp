#include "curveflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace curveflow {

namespace {

std::string fmt(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

std::string heat_color(double u) {
    // Blue (0) through white (0.5) to red (1).
    u = std::clamp(u, 0.0, 1.0);
    int r, g, b;
    if (u < 0.5) {
        const double w = u / 0.5;
        r = static_cast<int>(255.0 * w);
        g = static_cast<int>(255.0 * w);
        b = 255;
    } else {
        const double w = (u - 0.5) / 0.5;
        r = 255;
        g = static_cast<int>(255.0 * (1.0 - w));
        b = static_cast<int>(255.0 * (1.0 - w));
    }
    char buffer[16];
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", r, g, b);
    return buffer;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out.good())
        throw std::invalid_argument("cannot open for writing: " + path.string());
    out << text;
}

}  // namespace

std::string curve_frame_svg(const SampledCurve& curve, const std::string& title) {
    const CurveGeometry geom = geometry(curve);
    const double box = 760.0;
    double xmin = curve[0].x, xmax = curve[0].x, ymin = curve[0].y, ymax = curve[0].y;
    for (const Vec2& p : curve.points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double pad = 0.05 * span;
    const double scale = box / (span + 2.0 * pad);
    const auto map_x = [&](double x) { return 20.0 + (x - xmin + pad) * scale; };
    const auto map_y = [&](double y) { return 20.0 + (ymax + pad - y) * scale; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"900\" "
           "viewBox=\"0 0 800 900\">\n"
        << "<rect width=\"800\" height=\"900\" fill=\"white\"/>\n"
        << "<text x=\"20\" y=\"16\" font-family=\"monospace\" font-size=\"14\">" << title
        << "</text>\n<path d=\"";
    for (std::size_t i = 0; i < curve.size(); ++i)
        out << (i ? " L " : "M ") << fmt(map_x(curve[i].x)) << ' ' << fmt(map_y(curve[i].y));
    out << " Z\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

    const auto [kmin_it, kmax_it] =
        std::minmax_element(geom.curvature.begin(), geom.curvature.end());
    const double kmin = *kmin_it, kmax = *kmax_it;
    const double strip_y = 810.0, strip_h = 40.0;
    const double cell = 760.0 / static_cast<double>(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double u = kmax > kmin ? (geom.curvature[i] - kmin) / (kmax - kmin) : 0.5;
        out << "<rect x=\"" << fmt(20.0 + cell * static_cast<double>(i)) << "\" y=\""
            << fmt(strip_y) << "\" width=\"" << fmt(cell + 0.5) << "\" height=\""
            << fmt(strip_h) << "\" fill=\"" << heat_color(u) << "\"/>\n";
    }
    out << "<text x=\"20\" y=\"880\" font-family=\"monospace\" font-size=\"12\">k: "
        << fmt(kmin) << " (blue) to " << fmt(kmax) << " (red), along the vertex index"
        << "</text>\n</svg>\n";
    return out.str();
}

void write_curve_frame(const std::filesystem::path& path, const SampledCurve& curve,
                       const std::string& title) {
    write_text(path, curve_frame_svg(curve, title));
}

std::string series_svg(const std::vector<double>& x,
                       const std::vector<std::pair<std::string, std::vector<double>>>& series,
                       const std::string& title, const std::string& x_label) {
    if (x.empty() || series.empty())
        throw std::invalid_argument("series_svg: empty input");
    for (const auto& [name, values] : series)
        if (values.size() != x.size())
            throw std::invalid_argument("series_svg: length mismatch for " + name);

    double xmin = x.front(), xmax = x.front();
    for (double v : x) {
        xmin = std::min(xmin, v);
        xmax = std::max(xmax, v);
    }
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();
    for (const auto& [name, values] : series)
        for (double v : values)
            if (std::isfinite(v)) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
    if (!(ymin < ymax)) {
        ymin = std::isfinite(ymin) ? ymin - 1.0 : -1.0;
        ymax = ymin + 2.0;
    }
    if (!(xmin < xmax)) xmax = xmin + 1.0;

    const double left = 70.0, top = 40.0, width = 780.0, height = 400.0;
    const auto map_x = [&](double v) { return left + (v - xmin) / (xmax - xmin) * width; };
    const auto map_y = [&](double v) { return top + (ymax - v) / (ymax - ymin) * height; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"520\" "
           "viewBox=\"0 0 900 520\">\n"
        << "<rect width=\"900\" height=\"520\" fill=\"white\"/>\n"
        << "<text x=\"70\" y=\"24\" font-family=\"monospace\" font-size=\"14\">" << title
        << "</text>\n"
        << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(width)
        << "\" height=\"" << fmt(height)
        << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double fx = xmin + (xmax - xmin) * tick / 4.0;
        const double fy = ymin + (ymax - ymin) * tick / 4.0;
        out << "<text x=\"" << fmt(map_x(fx) - 10.0)
            << "\" y=\"470\" font-family=\"monospace\" font-size=\"11\">" << fmt(fx)
            << "</text>\n"
            << "<text x=\"4\" y=\"" << fmt(map_y(fy) + 4.0)
            << "\" font-family=\"monospace\" font-size=\"11\">" << fmt(fy) << "</text>\n";
    }
    out << "<text x=\"440\" y=\"500\" font-family=\"monospace\" font-size=\"12\">" << x_label
        << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& [name, values] = series[s];
        const char* color = palette[s % 6];
        out << "<path d=\"";
        bool pen_down = false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(values[i])) {
                pen_down = false;
                continue;
            }
            out << (pen_down ? " L " : " M ") << fmt(map_x(x[i])) << ' '
                << fmt(map_y(values[i]));
            pen_down = true;
        }
        out << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n"
            << "<text x=\"" << fmt(500.0 + 110.0 * static_cast<double>(s))
            << "\" y=\"24\" font-family=\"monospace\" font-size=\"12\" fill=\"" << color
            << "\">" << name << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void write_series_svg(const std::filesystem::path& path, const std::vector<double>& x,
                      const std::vector<std::pair<std::string, std::vector<double>>>& series,
                      const std::string& title, const std::string& x_label) {
    write_text(path, series_svg(x, series, title, x_label));
}

}  // namespace curveflow

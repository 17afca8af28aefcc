#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "loggrowth/newton_polygon.hpp"

/*
 * Hand-written SVG overlay of the two Newton polygons: two polylines,
 * circle markers on the left endpoints, axes, and the endpoint gap
 * annotated as an exact rational.  Coordinates are printed with fixed
 * precision so output is byte-deterministic.
 */

namespace loggrowth {

namespace detail {

inline std::string fmt_coord(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace detail

inline std::string polygon_overlay_svg(const NewtonPolygon& special, const NewtonPolygon& generic,
                                       const Rational& gap) {
    if (special.empty() || generic.empty())
        throw std::invalid_argument("polygon_overlay_svg: polygons must be non-empty");

    const double width = 480, height = 360, margin = 48;
    double x_min = 0, x_max = 1, y_min = 0, y_max = 0;
    for (const auto* P : {&special, &generic})
        for (const auto& v : P->vertices()) {
            x_min = std::min(x_min, static_cast<double>(v.x));
            x_max = std::max(x_max, static_cast<double>(v.x));
            y_min = std::min(y_min, v.y.convert_to<double>());
            y_max = std::max(y_max, v.y.convert_to<double>());
        }
    if (y_max == y_min) y_min -= 1; // keep a nonzero vertical span
    const double sx = (width - 2 * margin) / (x_max - x_min);
    const double sy = (height - 2 * margin) / (y_max - y_min);
    auto px = [&](double x) { return margin + (x - x_min) * sx; };
    auto py = [&](double y) { return height - margin - (y - y_min) * sy; };

    auto polyline = [&](const NewtonPolygon& P, const char* cls, const char* color) {
        std::string pts;
        for (const auto& v : P.vertices()) {
            if (!pts.empty()) pts += ' ';
            pts += detail::fmt_coord(px(static_cast<double>(v.x))) + ',' +
                   detail::fmt_coord(py(v.y.convert_to<double>()));
        }
        return "  <polyline class=\"" + std::string(cls) + "\" points=\"" + pts +
               "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    };
    auto marker = [&](const Vertex& v, const char* color) {
        return "  <circle cx=\"" + detail::fmt_coord(px(static_cast<double>(v.x))) + "\" cy=\"" +
               detail::fmt_coord(py(v.y.convert_to<double>())) + "\" r=\"4\" fill=\"" + color +
               "\"/>\n";
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt_coord(width) +
           "\" height=\"" + detail::fmt_coord(height) + "\" viewBox=\"0 0 " +
           detail::fmt_coord(width) + " " + detail::fmt_coord(height) + "\">\n";
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes: y = 0 and x = 0
    svg += "  <line x1=\"" + detail::fmt_coord(px(x_min)) + "\" y1=\"" + detail::fmt_coord(py(0)) +
           "\" x2=\"" + detail::fmt_coord(px(x_max)) + "\" y2=\"" + detail::fmt_coord(py(0)) +
           "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    svg += "  <line x1=\"" + detail::fmt_coord(px(0)) + "\" y1=\"" + detail::fmt_coord(py(y_min)) +
           "\" x2=\"" + detail::fmt_coord(px(0)) + "\" y2=\"" + detail::fmt_coord(py(y_max)) +
           "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    for (const auto& v : special.vertices())
        svg += "  <text x=\"" + detail::fmt_coord(px(static_cast<double>(v.x))) + "\" y=\"" +
               detail::fmt_coord(py(0) + 16) + "\" font-size=\"10\" fill=\"#555\">" +
               std::to_string(v.x) + "</text>\n";

    svg += polyline(special, "special", "#1f77b4");
    svg += polyline(generic, "generic", "#d62728");
    svg += marker(special.left_endpoint(), "#1f77b4");
    svg += marker(generic.left_endpoint(), "#d62728");

    svg += "  <text x=\"" + detail::fmt_coord(margin) + "\" y=\"" + detail::fmt_coord(margin / 2) +
           "\" font-size=\"12\" fill=\"#111\">left endpoint gap = " + gap.str() + "</text>\n";
    svg += "  <text x=\"" + detail::fmt_coord(width - margin - 150) + "\" y=\"" +
           detail::fmt_coord(margin / 2) +
           "\" font-size=\"11\"><tspan fill=\"#1f77b4\">special</tspan>  <tspan fill=\"#d62728\">"
           "generic</tspan></text>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace loggrowth

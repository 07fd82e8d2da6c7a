// Minimal deterministic SVG writer for curve figures.
#pragma once

#include <string>
#include <vector>

#include "gm4/geom.hpp"

namespace gm4 {

class SvgCanvas {
public:
    SvgCanvas(double width, double height) : width_(width), height_(height) {}

    // All coordinates are in data space; set_viewport maps them to the canvas.
    void set_viewport(double x0, double x1, double y0, double y1);
    void polyline(const std::vector<Vec2>& pts, const std::string& color, double stroke_width,
                  bool closed = false);
    void circle(const Vec2& center, double radius_px, const std::string& color, bool filled);
    void text(const Vec2& at, const std::string& s, const std::string& color);
    void frame_box(const std::string& color);

    std::string str() const;

private:
    Vec2 map(const Vec2& p) const;
    double width_, height_;
    double x0_ = -1, x1_ = 1, y0_ = -1, y1_ = 1;
    std::vector<std::string> elements_;
};

// Two-panel figure: the singular curves in the parameter domain on the left,
// their images on the component sphere (orthographic projection) on the
// right, with cusp markers.
struct CurveFigure {
    std::vector<std::vector<Vec2>> domain_curves;
    std::vector<std::vector<Vec2>> image_curves;  // projected to 2d
    std::vector<Vec2> domain_cusps;
    std::vector<Vec2> image_cusps;
    std::string title;
};
std::string render_curve_figure(const CurveFigure& fig);

}  // namespace gm4

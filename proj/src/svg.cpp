#include "gm4/svg.hpp"

#include <cstdio>
#include <sstream>

namespace gm4 {

namespace {
std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}
}  // namespace

void SvgCanvas::set_viewport(double x0, double x1, double y0, double y1) {
    x0_ = x0;
    x1_ = x1;
    y0_ = y0;
    y1_ = y1;
}

Vec2 SvgCanvas::map(const Vec2& p) const {
    const double margin = 10.0;
    const double sx = (width_ - 2 * margin) / (x1_ - x0_);
    const double sy = (height_ - 2 * margin) / (y1_ - y0_);
    const double s = std::min(sx, sy);
    return {margin + (p.x - x0_) * s, height_ - margin - (p.y - y0_) * s};
}

void SvgCanvas::polyline(const std::vector<Vec2>& pts, const std::string& color,
                         double stroke_width, bool closed) {
    if (pts.size() < 2) return;
    std::ostringstream os;
    os << "<path d=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
        const Vec2 m = map(pts[i]);
        os << (i == 0 ? "M" : "L") << fmt(m.x) << " " << fmt(m.y);
    }
    if (closed) os << "Z";
    os << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt(stroke_width)
       << "\"/>";
    elements_.push_back(os.str());
}

void SvgCanvas::circle(const Vec2& center, double radius_px, const std::string& color,
                       bool filled) {
    const Vec2 m = map(center);
    std::ostringstream os;
    os << "<circle cx=\"" << fmt(m.x) << "\" cy=\"" << fmt(m.y) << "\" r=\"" << fmt(radius_px)
       << "\" fill=\"" << (filled ? color : std::string("none")) << "\" stroke=\"" << color
       << "\"/>";
    elements_.push_back(os.str());
}

void SvgCanvas::text(const Vec2& at, const std::string& s, const std::string& color) {
    const Vec2 m = map(at);
    std::ostringstream os;
    os << "<text x=\"" << fmt(m.x) << "\" y=\"" << fmt(m.y) << "\" fill=\"" << color
       << "\" font-size=\"11\">" << s << "</text>";
    elements_.push_back(os.str());
}

void SvgCanvas::frame_box(const std::string& color) {
    std::ostringstream os;
    os << "<rect x=\"0.5\" y=\"0.5\" width=\"" << fmt(width_ - 1) << "\" height=\""
       << fmt(height_ - 1) << "\" fill=\"none\" stroke=\"" << color << "\"/>";
    elements_.push_back(os.str());
}

std::string SvgCanvas::str() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_) << "\" height=\""
       << fmt(height_) << "\">\n";
    for (const auto& e : elements_) os << "  " << e << "\n";
    os << "</svg>\n";
    return os.str();
}

std::string render_curve_figure(const CurveFigure& fig) {
    auto bounds = [](const std::vector<std::vector<Vec2>>& curves, const std::vector<Vec2>& extra) {
        double x0 = -1e-6, x1 = 1e-6, y0 = -1e-6, y1 = 1e-6;
        bool any = false;
        auto eat = [&](const Vec2& p) {
            if (!any) {
                x0 = x1 = p.x;
                y0 = y1 = p.y;
                any = true;
            }
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        };
        for (const auto& c : curves)
            for (const auto& p : c) eat(p);
        for (const auto& p : extra) eat(p);
        const double padx = 0.08 * (x1 - x0 + 1e-9), pady = 0.08 * (y1 - y0 + 1e-9);
        return std::array<double, 4>{x0 - padx, x1 + padx, y0 - pady, y1 + pady};
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"840\" height=\"420\">\n";
    {
        SvgCanvas left(420, 420);
        const auto b = bounds(fig.domain_curves, fig.domain_cusps);
        left.set_viewport(b[0], b[1], b[2], b[3]);
        left.frame_box("#888888");
        for (const auto& c : fig.domain_curves) left.polyline(c, "#1f4e9c", 1.4);
        for (const auto& p : fig.domain_cusps) left.circle(p, 4.0, "#c02020", true);
        left.text({b[0] + 0.02 * (b[1] - b[0]), b[3] - 0.05 * (b[3] - b[2])},
                  fig.title + " (domain)", "#333333");
        std::istringstream items(left.str());
        std::string line;
        bool first = true;
        while (std::getline(items, line)) {
            if (first || line == "</svg>") {
                first = false;
                continue;
            }
            os << "  <g>" << line << "</g>\n";
        }
    }
    {
        SvgCanvas right(420, 420);
        const auto b = bounds(fig.image_curves, fig.image_cusps);
        right.set_viewport(b[0], b[1], b[2], b[3]);
        right.frame_box("#888888");
        for (const auto& c : fig.image_curves) right.polyline(c, "#0a7a51", 1.4);
        for (const auto& p : fig.image_cusps) right.circle(p, 4.0, "#c02020", true);
        right.text({b[0] + 0.02 * (b[1] - b[0]), b[3] - 0.05 * (b[3] - b[2])},
                   fig.title + " (image)", "#333333");
        std::istringstream items(right.str());
        std::string line;
        bool first = true;
        while (std::getline(items, line)) {
            if (first || line == "</svg>") {
                first = false;
                continue;
            }
            os << "  <g transform=\"translate(420 0)\">" << line << "</g>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace gm4

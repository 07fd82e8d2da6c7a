#include "gm4/atlas.hpp"

#include <algorithm>
#include <cmath>

namespace gm4 {

bool Domain::contains(double u, double v, const ParamTable& params, double margin) const {
    if (kind == Kind::Rect)
        return u >= u0 + margin && u <= u1 - margin && v >= v0 + margin && v <= v1 - margin;
    const double hv = h->eval(u, v, params);
    const double kv = k ? k->eval(u, v, params) : 1.0;
    return hv >= margin && kv >= margin;
}

double Domain::clearance(double u, double v, const ParamTable& params) const {
    if (kind == Kind::Rect)
        return std::min(std::min(u - u0, u1 - u), std::min(v - v0, v1 - v));
    const double hv = h->eval(u, v, params);
    const double kv = k ? k->eval(u, v, params) : 1.0;
    return std::min(hv, kv);
}

std::array<Jet2, 4> Chart::eval_jets(double u, double v, int order, const ParamTable& params) const {
    if (!domain.contains(u, v, params))
        throw OutOfDomain("point (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") outside domain of chart '" + name + "'");
    std::array<Jet2, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = coords[i]->eval_jet(u, v, order, params);
    return out;
}

Vec4 Chart::eval_point(double u, double v, const ParamTable& params) const {
    Vec4 p;
    for (int i = 0; i < 4; ++i) p[i] = coords[i]->eval(u, v, params);
    return p;
}

namespace {

// Boundary positions evaluate radicands that vanish on the gluing curve; the
// one-sided limit of sqrt there is 0, so tiny residuals are snapped instead of
// rejected.
double eval_snapped(const Expr& e, double u, double v, const ParamTable& params);

double eval_snapped_node(const Expr& e, double u, double v, const ParamTable& params) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::Sqrt: {
            const double x = eval_snapped(*e.a, u, v, params);
            if (std::fabs(x) <= 1e-13) return 0.0;
            if (x < 0.0) throw DomainError("sqrt of negative value at glue boundary");
            return std::sqrt(x);
        }
        case K::Neg: return -eval_snapped(*e.a, u, v, params);
        case K::Add: return eval_snapped(*e.a, u, v, params) + eval_snapped(*e.b, u, v, params);
        case K::Sub: return eval_snapped(*e.a, u, v, params) - eval_snapped(*e.b, u, v, params);
        case K::Mul: return eval_snapped(*e.a, u, v, params) * eval_snapped(*e.b, u, v, params);
        case K::Div: return eval_snapped(*e.a, u, v, params) / eval_snapped(*e.b, u, v, params);
        case K::Pow: return std::pow(eval_snapped(*e.a, u, v, params), e.exponent);
        case K::Sin: return std::sin(eval_snapped(*e.a, u, v, params));
        case K::Cos: return std::cos(eval_snapped(*e.a, u, v, params));
        default: return e.eval(u, v, params);
    }
}

double eval_snapped(const Expr& e, double u, double v, const ParamTable& params) {
    return eval_snapped_node(e, u, v, params);
}

}  // namespace

Vec4 eval_point_boundary(const Chart& chart, double u, double v, const ParamTable& params) {
    Vec4 p;
    for (int i = 0; i < 4; ++i) p[i] = eval_snapped(*chart.coords[i], u, v, params);
    return p;
}

std::vector<BoundaryPoint> trace_implicit_boundary(const Chart& chart, const ParamTable& params,
                                                   int samples) {
    const Domain& dom = chart.domain;
    const ExprPtr h = dom.h;
    const ExprPtr k = dom.k;
    auto hval = [&](double u, double v) { return h->eval(u, v, params); };
    auto kval = [&](double u, double v) { return k ? k->eval(u, v, params) : 1.0; };
    auto minhk = [&](double u, double v) { return std::min(hval(u, v), kval(u, v)); };

    // Star center: the domains used here (disks, curved hexagons) contain the
    // origin of their parameter plane.
    const double cu = 0.0, cv = 0.0;
    if (minhk(cu, cv) <= 0)
        throw OutOfDomain("implicit domain of chart '" + chart.name + "' does not contain (0,0)");

    auto radial_root = [&](double angle) {
        const double du = std::cos(angle), dv = std::sin(angle);
        double lo = 0.0, hi = 0.0;
        double step = 0.05;
        while (minhk(cu + (hi + step) * du, cv + (hi + step) * dv) > 0) {
            hi += step;
            if (hi > 1e3) throw OutOfDomain("unbounded implicit domain");
        }
        lo = hi;
        hi += step;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (minhk(cu + mid * du, cv + mid * dv) > 0) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    auto active_at = [&](double angle, double r) {
        const double u = cu + r * std::cos(angle), v = cv + r * std::sin(angle);
        return hval(u, v) <= kval(u, v) ? 'h' : 'k';
    };

    const double two_pi = 2.0 * 3.14159265358979323846;
    std::vector<BoundaryPoint> pts;
    std::vector<char> act(samples);
    std::vector<double> rad(samples);
    for (int i = 0; i < samples; ++i) {
        const double ang = two_pi * i / samples;
        rad[i] = radial_root(ang);
        act[i] = k ? active_at(ang, rad[i]) : 'h';
    }
    for (int i = 0; i < samples; ++i) {
        const double ang = two_pi * i / samples;
        const double u = cu + rad[i] * std::cos(ang), v = cv + rad[i] * std::sin(ang);
        pts.push_back({u, v, ang, act[i]});
        const int nxt = (i + 1) % samples;
        if (act[i] != act[nxt]) {
            // Corner where the active constraint switches: bisect the angle.
            double a0 = ang, a1 = two_pi * (i + 1) / samples;
            for (int it = 0; it < 80; ++it) {
                const double am = 0.5 * (a0 + a1);
                const double rm = radial_root(am);
                if (active_at(am, rm) == act[i]) a0 = am;
                else a1 = am;
            }
            const double am = 0.5 * (a0 + a1);
            const double rm = radial_root(am);
            pts.push_back({cu + rm * std::cos(am), cv + rm * std::sin(am), am, 'c'});
        }
    }
    return pts;
}

std::vector<GlueSample> sample_glue(const Atlas& atlas, const GlueEdge& edge, int n) {
    std::vector<GlueSample> out;
    const Chart& ca = atlas.chart(edge.chart_a);
    const Chart& cb = atlas.chart(edge.chart_b);
    if (edge.kind == GlueEdge::Kind::Param) {
        for (int i = 0; i <= n; ++i) {
            const double s = static_cast<double>(i) / n;
            const double sb = edge.reversed ? 1.0 - s : s;
            GlueSample g;
            g.s = s;
            g.a_uv = {edge.au->eval(s, 0, atlas.params), edge.av->eval(s, 0, atlas.params)};
            g.b_uv = {edge.bu->eval(sb, 0, atlas.params), edge.bv->eval(sb, 0, atlas.params)};
            g.point = eval_point_boundary(ca, g.a_uv.x, g.a_uv.y, atlas.params);
            out.push_back(g);
        }
        return out;
    }
    // Identity glue: both charts share the (u, v) domain; take the boundary
    // points of the indicated constraint.
    auto boundary = trace_implicit_boundary(ca, atlas.params, n);
    for (const auto& bp : boundary) {
        if (bp.on != edge.boundary && bp.on != 'c') continue;
        GlueSample g;
        g.s = bp.angle;
        g.a_uv = g.b_uv = {bp.u, bp.v};
        g.point = eval_point_boundary(ca, bp.u, bp.v, atlas.params);
        out.push_back(g);
    }
    (void)cb;
    return out;
}

double glue_consistency(const Atlas& atlas, int samples) {
    double worst = 0.0;
    for (const auto& edge : atlas.glue) {
        const Chart& ca = atlas.chart(edge.chart_a);
        const Chart& cb = atlas.chart(edge.chart_b);
        for (const auto& g : sample_glue(atlas, edge, samples)) {
            const Vec4 pa = eval_point_boundary(ca, g.a_uv.x, g.a_uv.y, atlas.params);
            const Vec4 pb = eval_point_boundary(cb, g.b_uv.x, g.b_uv.y, atlas.params);
            Vec4 d;
            for (int i = 0; i < 4; ++i) d[i] = pa[i] - pb[i];
            worst = std::max(worst, norm4(d));
        }
    }
    return worst;
}

}  // namespace gm4

////////////////////////////////////////////////////////////////////////////////
// atlas.hpp
//
// Surface data model: charts mapping planar domains into R^4, plus gluing
// data along domain boundaries sufficient for global curve joining, meshing
// and integration.  Charts are expression-backed; a jet-backed local graph
// form produced by to_monge() is used for pointwise normal-form work.
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gm4/expr.hpp"
#include "gm4/geom.hpp"

namespace gm4 {

struct OutOfDomain : std::runtime_error {
    explicit OutOfDomain(const std::string& what) : std::runtime_error(what) {}
};
struct NotImmersed : std::runtime_error {
    explicit NotImmersed(const std::string& what) : std::runtime_error(what) {}
};
struct NotClosedSurface : std::runtime_error {
    explicit NotClosedSurface(const std::string& what) : std::runtime_error(what) {}
};

struct Domain {
    enum class Kind { Rect, Implicit } kind = Kind::Rect;
    // Rect
    double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
    // Implicit: { h >= 0 and k >= 0 }; bbox supplied by the surface file.
    ExprPtr h, k;

    bool contains(double u, double v, const ParamTable& params, double margin = 0.0) const;
    // Signed clearance used to keep samples off the boundary: for rects the
    // distance to the nearest edge, for implicit domains min(h, k).
    double clearance(double u, double v, const ParamTable& params) const;
};

struct Chart {
    std::string name;
    std::array<ExprPtr, 4> coords;
    Domain domain;
    int orientation = +1;  // relates (du, dv) to the surface orientation

    std::array<Jet2, 4> eval_jets(double u, double v, int order, const ParamTable& params) const;
    Vec4 eval_point(double u, double v, const ParamTable& params) const;
};

struct GlueEdge {
    enum class Kind { Identity, Param } kind = Kind::Identity;
    int chart_a = 0, chart_b = 0;
    // Identity: both charts share (u, v); the common edge is the indicated
    // zero-set portion of the implicit domain boundary ('h' or 'k').
    char boundary = 'h';
    // Param: explicit curves s in [0,1] -> (u, v) per side; reversed matches
    // s on side a with 1-s on side b.
    ExprPtr au, av, bu, bv;
    bool reversed = false;
};

struct AnalysisOptions {
    int grid = 512;        // invariant-field sampling resolution per chart
    int mesh_grid = 96;    // triangulation resolution per chart
    double tol = 1e-8;
    int quad_grid = 512;   // finest quadrature level
};

struct Atlas {
    std::string name;
    std::vector<Chart> charts;
    std::vector<GlueEdge> glue;
    ParamTable params;
    std::optional<int> topology_hint;
    bool closed = false;
    bool embedded = false;
    AnalysisOptions options;

    const Chart& chart(int i) const { return charts.at(static_cast<size_t>(i)); }
    void require_closed() const {
        if (!closed) throw NotClosedSurface("operation requires a closed surface");
    }
};

// Points sampled along one side of a glue edge, used for joining traced
// curves and identifying mesh boundary vertices across charts.
struct GlueSample {
    double s;
    Vec2 a_uv, b_uv;
    Vec4 point;  // common ambient position
};
std::vector<GlueSample> sample_glue(const Atlas& atlas, const GlueEdge& edge, int n);

// Worst ambient mismatch between the two sides of every glue edge.
double glue_consistency(const Atlas& atlas, int samples = 64);

// Chart evaluation for points on glue boundaries: radicands within 1e-13 of
// zero are taken to their one-sided limit 0 instead of raising DomainError,
// so both sides of a glued edge produce identical ambient positions.
Vec4 eval_point_boundary(const Chart& chart, double u, double v, const ParamTable& params);

// Local graph form at a point: after translating the point to the origin and
// rotating R^4 so the tangent plane becomes the (u, v)-plane, the chart is
// the graph (u, v, a(u, v), b(u, v)) with vanishing first derivatives of a, b.
struct MongeJets {
    Jet2 a, b;                 // graph function jets at the new origin
    std::array<Vec4, 4> frame; // rows: the rotation applied (e1, e2, e3, e4)
    Vec4 origin;
};
MongeJets to_monge(const Chart& chart, double u, double v, const ParamTable& params,
                   int order = Jet2::kMaxOrder);

// Boundary polyline of an implicit domain, traced by polar sampling around an
// interior star center.  Returns points strictly ordered by angle; used for
// meshing and identity-glue discretization.
struct BoundaryPoint {
    double u, v;
    double angle;
    char on = 'h';  // which constraint is active ('h', 'k', or 'c' corner)
};
std::vector<BoundaryPoint> trace_implicit_boundary(const Chart& chart, const ParamTable& params,
                                                   int samples);

}  // namespace gm4

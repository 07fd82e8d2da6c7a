////////////////////////////////////////////////////////////////////////////////
// singular.hpp
//
// Tracing and classification of the singular sets of the Gauss map
// components.  The singular set of component i is the zero set of
// s_i = K + (-1)^{i+1} KN; it is traced by marching squares on a per-chart
// grid, Newton-refined onto the zero set with analytic gradients, joined
// across glued chart boundaries, and classified pointwise into folds and
// cusps by the tangency of the kernel field against the curve.
//
// Cusp signs follow the orientation behavior of the component map on the
// side where it is injective near the cusp: positive when the map preserves
// orientation there (equivalently, the germ reduces orientation-preservingly
// to (uv - v^3, u) and its local degree is +1).
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include "gm4/invariants.hpp"
#include "gm4/gaussmap.hpp"

namespace gm4 {

struct DegenerateTangency : std::runtime_error {
    explicit DegenerateTangency(const std::string& what) : std::runtime_error(what) {}
};
struct InconclusiveSign : std::runtime_error {
    explicit InconclusiveSign(const std::string& what) : std::runtime_error(what) {}
};

struct CurvePoint {
    int chart = 0;
    double u = 0, v = 0;
    Vec2 tangent;        // traversal-oriented, chart coordinates
    Vec2 kernel;         // continuity-aligned along the curve
    double t = 0;        // tangency function det[kernel, tangent] in the frame basis
    double grad_norm = 0;  // |grad s_i|, scale-normalized
    bool fold = false;
};

struct CuspRecord {
    int chart = 0;
    double u = 0, v = 0;
    int comp = 1;
    int sign = 0;              // +1 / -1; 0 when inconclusive
    double tangency_deriv = 0; // d/ds of the tangency function, must be nonzero
    double normal_form_residual = 0;  // |v^2 coefficient| after reduction
    Vec3 image;                // point on the component sphere
    int curve_index = -1;
    int segment_index = -1;    // insertion position within the curve
};

struct SingularCurve {
    int comp = 1;
    bool closed = false;
    std::vector<CurvePoint> pts;
    std::vector<CuspRecord> cusps;
};

struct TraceResult {
    std::vector<SingularCurve> curves;
    bool field_degenerate = false;  // s_i vanishes identically (gradient too)
    int gradient_violations = 0;    // Newton steps that met a vanishing gradient
    double field_scale = 1.0;
};

TraceResult trace_singular_set(const Atlas& atlas, int comp, int grid);

struct G1Report {
    bool pass = false;
    bool vacuous = false;          // empty singular set
    bool gradient_vanishes = false;
    double min_grad = 0;           // min over traced points of |grad s_i| / scale
};
G1Report check_G1(const Atlas& atlas, const TraceResult& trace, int comp);

// Classifies every traced point as fold or cusp and fills the cusp records.
void classify_points(const Atlas& atlas, TraceResult& trace, int comp);

struct G2Report {
    bool pass = false;
    bool g1_pass = false;
    int fold_points = 0;
    int cusp_count = 0;
    int degenerate_tangencies = 0;
    double min_tangency_deriv = 0;
};
G2Report check_G2(const Atlas& atlas, const TraceResult& trace, const G1Report& g1);

struct G3Report {
    bool pass = false;
    bool vacuous = false;
    int coincident_pairs = 0;
    int cusp_image_collisions = 0;
    int tangential_pairs = 0;
    int triple_points = 0;
};
G3Report check_G3(const Atlas& atlas, const TraceResult& trace, int comp);

struct RankScanEntry {
    int chart;
    double u, v;
    double K, Delta;
    int rank;
};
struct RankScanReport {
    int points_scanned = 0;
    std::vector<RankScanEntry> rank_drops;       // rank < 2 witnesses
    bool characterization_ok = true;  // rank < 2 iff |K| and |Delta| small
    double min_sigma_ratio = 1.0;
};
RankScanReport rank_scan(const Atlas& atlas, int grid);

// Tangency function and fold-criterion machinery exposed for tests.

// Map to the component sphere in orthonormal tangent coordinates at the
// image of (u, v); jets of the two coordinates at the requested order.
std::array<Jet2, 2> component_local_map(const Chart& chart, double u, double v, int comp,
                                        const ParamTable& params, int order);

// The quadratic-part criterion for a fold at a rank-one point:
// Q(ker) lies outside the image of the differential.
double fold_criterion_Q(const Chart& chart, double u, double v, int comp,
                        const ParamTable& params);

// Cusp sign via orientation-preserving reduction of the 3-jet to
// (uv + sigma v^3, u); the sign of the cusp is -sigma.  The Jacobian of the
// component is also sampled on the injective side (reached along the kernel
// direction) as an independent cross-check; disagreement throws
// InconclusiveSign.
struct CuspSignDiag {
    double a11 = 0, a02 = 0, a03 = 0;
    int mu_normal_form = 0, mu_jacobian_side = 0;
};
int cusp_sign(const Chart& chart, double u, double v, int comp, const Vec2& kernel_dir,
              const ParamTable& params, double* normal_form_residual = nullptr,
              CuspSignDiag* diag = nullptr);

// Local mapping degree of the component germ at a point, by the winding
// number of the image of a small source circle (test oracle for cusp signs).
int local_degree(const Chart& chart, double u, double v, int comp, const ParamTable& params,
                 double radius);

}  // namespace gm4

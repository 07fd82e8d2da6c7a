////////////////////////////////////////////////////////////////////////////////
// quadrature.hpp
//
// Composite midpoint quadrature of invariant fields over the surface, with
// quadtree refinement of boundary cells (the area element of graph-type
// charts has an integrable inverse-square-root blowup at implicit domain
// boundaries) and a measured-order Richardson extrapolation across three
// grid levels.  Also: mapping degrees of the Gauss map components and the
// geodesic curvature integral of singular-value curves on the component
// spheres, with shell extrapolation around cusps.
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <functional>

#include "gm4/singular.hpp"

namespace gm4 {

struct NonConvergent : std::runtime_error {
    explicit NonConvergent(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureResult {
    double value = 0;
    double estimated_error = 0;
    long samples = 0;
};

// field(chart_index, u, v, invariants, out[n_fields]); integrands are
// multiplied by the area element internally.
using FieldFn = std::function<void(int, double, double, const InvariantSample&, double*)>;

std::vector<QuadratureResult> integrate_fields(const Atlas& atlas, int n_fields,
                                               const FieldFn& field, int finest_grid);

QuadratureResult integrate_surface(const Atlas& atlas,
                                   const std::function<double(const InvariantSample&)>& field,
                                   int finest_grid);

struct DegreeResult {
    double raw;      // integral / (2 pi)
    int rounded;
    bool integer_ok; // |raw - rounded| < 0.05
    double estimated_error;
};
DegreeResult mapping_degree(const Atlas& atlas, int comp, int finest_grid);

// Geodesic curvature of a curve c on a sphere of radius |c| centered at the
// origin, from position and two derivatives in an arbitrary parameter.
double geodesic_curvature(const Vec3& c, const Vec3& c1, const Vec3& c2);

struct KgIntegral {
    double value = 0;            // sum over curves of the kappa_g arclength integral
    double image_length = 0;
    int curves = 0;
    int cusp_shells = 0;
    double extrapolation_span = 0;  // |I(eps) - I(4 eps)| diagnostic
    bool converged = true;
};
// Arclength integral of kappa_g along the image curves of component `comp`,
// oriented so the component image lies on the left; cusp neighborhoods are
// handled by geometric shell extrapolation.
KgIntegral curve_integral_kg(const Atlas& atlas, const TraceResult& trace, int comp);

}  // namespace gm4

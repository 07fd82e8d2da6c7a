////////////////////////////////////////////////////////////////////////////////
// invariants.hpp
//
// Second-order invariants of the immersion: Gaussian curvature K, normal
// curvature KN, the discriminant Delta of the second fundamental form, and
// the squared mean curvature |H|^2, together with the Jacobians of the two
// Gauss map components.  K + KN and K - KN are computed as 2x2 determinants
// of connection-form values; the component Jacobians are half their sum and
// difference, and an independent pullback route is provided for
// cross-checking.
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include "gm4/frame.hpp"

namespace gm4 {

// Coefficients of the second fundamental form in the orthonormal tangent
// basis (e1, e2): II = (l3 t1^2 + 2 m3 t1 t2 + n3 t2^2) e3 + (...) e4.
struct IIForm {
    double l3, m3, n3;
    double l4, m4, n4;
    double symmetry_error;  // |w_1^j(e2) - w_2^j(e1)| worst case
};

struct InvariantSample {
    double K = 0, KN = 0, Delta = 0, H2 = 0;
    double Jg1 = 0, Jg2 = 0;
    double area_element = 0;  // |x_u ^ x_v| = (theta1 ^ theta2)(du, dv)
};

IIForm second_fundamental_form(const ConnectionForms& cf, const FrameJets& frame);

InvariantSample curvatures(const ConnectionForms& cf, const FrameJets& frame);

// Convenience: frame + forms + invariants at a point (frame order >= 1).
InvariantSample invariants_at(const Chart& chart, double u, double v, const ParamTable& params,
                              int frame_order = 1);

// K + KN and K - KN as jets (for gradients and curve geometry the caller
// should build the frame at order 3, i.e. chart order 4).
struct InvariantJets {
    Jet2 sum;   // K + KN
    Jet2 diff;  // K - KN
    Jet2 area;  // (theta1 ^ theta2)(du, dv)
};
InvariantJets invariant_jets(const ConnectionForms& cf);

// Independent route for the component Jacobians: the pullback of the sphere
// area form through the actual component map (fixed bivector basis), divided
// by the surface area element.  comp is 1 or 2.
double jacobian_by_pullback(const Chart& chart, double u, double v, int comp,
                            const ParamTable& params);

// Residuals of the structural equations d w_1^2 + K theta1^theta2 = 0 and
// d w_3^4 + KN theta1^theta2 = 0, with the exterior derivative taken
// analytically from the form jets.
struct StructuralResidual {
    double gauss, normal;
};
StructuralResidual structural_residual(const Chart& chart, double u, double v,
                                       const ParamTable& params);

}  // namespace gm4

////////////////////////////////////////////////////////////////////////////////
// frame.hpp
//
// Darboux frames and connection forms.  A frame (e1, e2, e3, e4) is a
// positive orthonormal frame of R^4 along the chart with e1, e2 spanning the
// tangent plane (positively w.r.t. the surface orientation) and e3, e4 the
// normal plane.  Two constructions are available and cross-validated:
//
//  * the closed-form frame for graph charts x(u,v) = (u, v, a, b), built
//    from the first derivatives of a and b;
//  * orientation-fixed Gram-Schmidt on (x_u, x_v, E_a, E_b) for general
//    charts, where E_a, E_b are the two standard basis vectors least aligned
//    with the tangent plane at the base point.
//
// All frame vectors are jets, so the connection forms w_i^j = <de_i, e_j>
// come out as jets one order lower.
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include "gm4/atlas.hpp"

namespace gm4 {

struct FrameJets {
    std::array<Jet2, 4> x;                      // chart coordinates, order p+1
    std::array<std::array<Jet2, 4>, 4> e;       // e[i][component], order p
    int order = 0;                              // p
    bool graph_closed_form = false;
};

// Covector on the (u, v) plane: values on the coordinate vectors.
struct Covector {
    Jet2 du, dv;
    double u_val() const { return du.value(); }
    double v_val() const { return dv.value(); }
};

struct ConnectionForms {
    // omega[i][j] for 1-based i, j in 1..4; antisymmetric, diagonal zero.
    std::array<std::array<Covector, 5>, 5> omega;
    Covector theta1, theta2;
    int order = 0;
    const Covector& w(int i, int j) const { return omega[i][j]; }
};

// Builds the frame at (u, v) with frame jets of order `order` (the chart is
// evaluated at order+1).  Throws NotImmersed if the differential is rank
// deficient at the point.
FrameJets darboux_frame(const Chart& chart, double u, double v, int order,
                        const ParamTable& params);

ConnectionForms connection_forms(const FrameJets& frame);

// Block rotation by angle alpha in the tangent plane and beta in the normal
// plane; preserves the Darboux property and the R^4 orientation.
FrameJets rotate_frame(const FrameJets& frame, double alpha, double beta);

struct KernelResult {
    enum class Rank { None, Line, Full } rank = Rank::None;  // None: kernel {0}
    Vec2 dir;  // unit kernel direction in the (du, dv) basis when rank == Line
};

// Kernel of the system {p = 0, q = 0} of two covectors (values only).
// `scale` normalizes the rank tests; pass a typical covector magnitude.
KernelResult pfaffian_kernel(const Vec2& p, const Vec2& q, double scale = 1.0,
                             double eps = 1e-8);

// Orthonormality / orientation / tangency diagnostics at the base point.
struct FrameCheck {
    double max_gram_error;   // |<e_i, e_j> - delta_ij|
    double det_error;        // |det(e1..e4) - 1|
    double max_normal_tangency;  // |<e3, x_u>| etc.
};
FrameCheck check_frame(const FrameJets& frame);

}  // namespace gm4

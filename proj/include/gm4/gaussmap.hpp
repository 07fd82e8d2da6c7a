////////////////////////////////////////////////////////////////////////////////
// gaussmap.hpp
//
// The Gauss map into the oriented 2-plane Grassmannian, modeled as the
// product of two spheres of radius 1/sqrt(2) inside the self-dual and
// anti-self-dual parts of Lambda^2 R^4.  The tangent plane's unit bivector
// e1 ^ e2 splits as g = g1 + g2 with g1 = (e1^e2 + e3^e4)/2 living in
// span(X1, X2, X3) and g2 = (e1^e2 - e3^e4)/2 in span(Y1, Y2, Y3), where
// X_i, Y_i is the fixed orthonormal bivector basis built from the standard
// basis of R^4.
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <optional>

#include "gm4/frame.hpp"

namespace gm4 {

struct StereoPole : std::runtime_error {
    explicit StereoPole(const std::string& what) : std::runtime_error(what) {}
};

// Plucker components of a decomposable bivector, ordered
// (a12, a23, a31, a34, a14, a24).
struct Bivector {
    std::array<double, 6> a{};
    double decomposability() const { return a[0] * a[3] + a[1] * a[4] + a[2] * a[5]; }
    double norm2() const {
        double s = 0;
        for (double c : a) s += c * c;
        return s;
    }
};

Bivector plucker(const FrameJets& frame);

struct GaussPoint {
    Vec3 beta;     // g1 in the fixed basis (X1, X2, X3); |beta|^2 = 1/2
    Vec3 gamma;    // g2 in (Y1, Y2, Y3); |gamma|^2 = 1/2
    Vec2 stereo1, stereo2;
    bool stereo1_valid = true, stereo2_valid = true;
};

// Stereographic projection from the antipode -X1/sqrt(2) (resp. -Y1/sqrt(2)).
GaussPoint gauss_components(const FrameJets& frame);

// Jets of the beta (comp 1) or gamma (comp 2) coordinates; order equals the
// frame order.
std::array<Jet2, 3> component_jets(const FrameJets& frame, int comp);

// Differential of component `comp` in the bases (du, dv) -> (x2(p), x3(p))
// (the moving bivector basis adapted to the frame), computed from the
// connection forms.  det(dgauss) / area_element is the component Jacobian.
Mat2 dgauss(const ConnectionForms& cf, int comp);

KernelResult kernel_direction(const Mat2& m, double eps = 1e-8);

// Rank of the full Gauss map differential: the rank of the 4x2 matrix of
// connection-form values (w_1^3, w_1^4, w_2^3, w_2^4) on (du, dv).
struct RankResult {
    int rank;
    std::array<double, 2> sigma;
};
RankResult rank_dg(const ConnectionForms& cf, double eps = 1e-8);

// Orthonormal tangent basis of the component sphere at base point b0
// (|b0| = 1/sqrt(2)), right-handed w.r.t. the outward normal.
struct SphereTangentBasis {
    Vec3 t1, t2, normal;
};
SphereTangentBasis sphere_tangent_basis(const Vec3& b0);

}  // namespace gm4

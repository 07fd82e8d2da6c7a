// Reduction of a chart to local graph form at a point: translate the point to
// the origin, rotate R^4 by the Darboux frame so the tangent plane becomes
// the parameter plane, and invert the induced (u, v) reparameterization on
// jets.  The result carries the full order-4 Taylor data of the graph
// functions, which is everything the pointwise invariant and normal-form
// computations consume.
#include <cmath>

#include "gm4/frame.hpp"

namespace gm4 {

MongeJets to_monge(const Chart& chart, double u, double v, const ParamTable& params, int order) {
    const FrameJets f = darboux_frame(chart, u, v, order - 1, params);

    std::array<Vec4, 4> rot;
    Vec4 origin;
    for (int i = 0; i < 4; ++i) {
        origin[i] = f.x[i].value();
        for (int j = 0; j < 4; ++j) rot[i][j] = f.e[i][j].value();
    }

    // Rotated, translated coordinates as jets of the original parameters.
    std::array<Jet2, 4> xt;
    for (int i = 0; i < 4; ++i) {
        Jet2 acc(order, 0.0);
        for (int j = 0; j < 4; ++j) acc += (f.x[j].truncated(order) - origin[j]) * rot[i][j];
        xt[i] = acc;
    }

    // Invert the planar map (du, dv) -> (ut, vt) = L (du, dv) + N(du, dv).
    const double L00 = xt[0].coeff(1, 0), L01 = xt[0].coeff(0, 1);
    const double L10 = xt[1].coeff(1, 0), L11 = xt[1].coeff(0, 1);
    const double det = L00 * L11 - L01 * L10;
    if (std::fabs(det) < 1e-14)
        throw NotImmersed("tangent reparameterization is singular");
    const double I00 = L11 / det, I01 = -L01 / det, I10 = -L10 / det, I11 = L00 / det;

    Jet2 nu = xt[0], nv = xt[1];
    nu.set_coeff(0, 0, 0.0);
    nu.set_coeff(1, 0, nu.coeff(1, 0) - L00);
    nu.set_coeff(0, 1, nu.coeff(0, 1) - L01);
    nv.set_coeff(0, 0, 0.0);
    nv.set_coeff(1, 0, nv.coeff(1, 0) - L10);
    nv.set_coeff(0, 1, nv.coeff(0, 1) - L11);

    const Jet2 U = Jet2::variable(0.0, 0, order);
    const Jet2 V = Jet2::variable(0.0, 1, order);
    Jet2 gu = U * I00 + V * I01;
    Jet2 gv = U * I10 + V * I11;
    for (int it = 0; it < order; ++it) {
        const Jet2 ru = U - Jet2::compose2(nu, gu, gv);
        const Jet2 rv = V - Jet2::compose2(nv, gu, gv);
        gu = ru * I00 + rv * I01;
        gv = ru * I10 + rv * I11;
    }

    MongeJets m;
    m.a = Jet2::compose2(xt[2], gu, gv);
    m.b = Jet2::compose2(xt[3], gu, gv);
    m.frame = rot;
    m.origin = origin;

    const double first = std::max(std::max(std::fabs(m.a.coeff(1, 0)), std::fabs(m.a.coeff(0, 1))),
                                  std::max(std::fabs(m.b.coeff(1, 0)), std::fabs(m.b.coeff(0, 1))));
    if (first > 1e-8)
        throw NotImmersed("graph reduction failed to kill first derivatives");
    return m;
}

}  // namespace gm4

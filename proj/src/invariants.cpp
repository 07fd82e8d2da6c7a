#include "gm4/invariants.hpp"

#include <cmath>

#include "gm4/gaussmap.hpp"

namespace gm4 {

namespace {

// Values of a covector on the orthonormal tangent basis: solve
// [phi(du); phi(dv)] = [[t1(du), t2(du)], [t1(dv), t2(dv)]] [phi(e1); phi(e2)].
Vec2 on_frame(const Covector& phi, const ConnectionForms& cf) {
    return solve2(cf.theta1.u_val(), cf.theta2.u_val(), cf.theta1.v_val(), cf.theta2.v_val(),
                  {phi.u_val(), phi.v_val()});
}

double wedge_uv(const Covector& p, const Covector& q) {
    return p.u_val() * q.v_val() - p.v_val() * q.u_val();
}

Covector cov_sub(const Covector& p, const Covector& q) { return {p.du - q.du, p.dv - q.dv}; }
Covector cov_add(const Covector& p, const Covector& q) { return {p.du + q.du, p.dv + q.dv}; }

}  // namespace

IIForm second_fundamental_form(const ConnectionForms& cf, const FrameJets& frame) {
    (void)frame;
    const Vec2 w13 = on_frame(cf.w(1, 3), cf);
    const Vec2 w23 = on_frame(cf.w(2, 3), cf);
    const Vec2 w14 = on_frame(cf.w(1, 4), cf);
    const Vec2 w24 = on_frame(cf.w(2, 4), cf);
    IIForm ii;
    ii.l3 = w13.x;
    ii.m3 = 0.5 * (w13.y + w23.x);
    ii.n3 = w23.y;
    ii.l4 = w14.x;
    ii.m4 = 0.5 * (w14.y + w24.x);
    ii.n4 = w24.y;
    ii.symmetry_error = std::max(std::fabs(w13.y - w23.x), std::fabs(w14.y - w24.x));
    return ii;
}

InvariantSample curvatures(const ConnectionForms& cf, const FrameJets& frame) {
    InvariantSample s;
    const double area = wedge_uv(cf.theta1, cf.theta2);
    s.area_element = area;

    const Covector p1 = cov_sub(cf.w(1, 3), cf.w(2, 4));
    const Covector q1 = cov_add(cf.w(1, 4), cf.w(2, 3));
    const Covector p2 = cov_sub(cf.w(1, 4), cf.w(2, 3));
    const Covector q2 = cov_add(cf.w(2, 4), cf.w(1, 3));

    const double sum = wedge_uv(p1, q1) / area;   // K + KN
    const double diff = wedge_uv(p2, q2) / area;  // K - KN
    s.K = 0.5 * (sum + diff);
    s.KN = 0.5 * (sum - diff);
    s.Jg1 = 0.5 * sum;
    s.Jg2 = 0.5 * diff;

    const IIForm ii = second_fundamental_form(cf, frame);
    const double af_be = ii.l3 * ii.m4 - ii.m3 * ii.l4;
    const double bg_cf = ii.m3 * ii.n4 - ii.n3 * ii.m4;
    const double ag_ce = ii.l3 * ii.n4 - ii.n3 * ii.l4;
    s.Delta = af_be * bg_cf - 0.25 * ag_ce * ag_ce;
    s.H2 = 0.25 * ((ii.l3 + ii.n3) * (ii.l3 + ii.n3) + (ii.l4 + ii.n4) * (ii.l4 + ii.n4));
    return s;
}

InvariantSample invariants_at(const Chart& chart, double u, double v, const ParamTable& params,
                              int frame_order) {
    const FrameJets f = darboux_frame(chart, u, v, frame_order, params);
    const ConnectionForms cf = connection_forms(f);
    return curvatures(cf, f);
}

InvariantJets invariant_jets(const ConnectionForms& cf) {
    InvariantJets out;
    const Jet2 area = cf.theta1.du * cf.theta2.dv - cf.theta1.dv * cf.theta2.du;
    const Jet2 inv_area = jet_reciprocal(area);

    const Jet2 p1u = cf.w(1, 3).du - cf.w(2, 4).du, p1v = cf.w(1, 3).dv - cf.w(2, 4).dv;
    const Jet2 q1u = cf.w(1, 4).du + cf.w(2, 3).du, q1v = cf.w(1, 4).dv + cf.w(2, 3).dv;
    const Jet2 p2u = cf.w(1, 4).du - cf.w(2, 3).du, p2v = cf.w(1, 4).dv - cf.w(2, 3).dv;
    const Jet2 q2u = cf.w(2, 4).du + cf.w(1, 3).du, q2v = cf.w(2, 4).dv + cf.w(1, 3).dv;

    out.sum = (p1u * q1v - p1v * q1u) * inv_area;
    out.diff = (p2u * q2v - p2v * q2u) * inv_area;
    out.area = area;
    return out;
}

double jacobian_by_pullback(const Chart& chart, double u, double v, int comp,
                            const ParamTable& params) {
    const FrameJets f = darboux_frame(chart, u, v, 1, params);
    const auto bj = component_jets(f, comp);
    const Vec3 b0{bj[0].value(), bj[1].value(), bj[2].value()};
    const Vec3 bu{bj[0].partial(0).value(), bj[1].partial(0).value(), bj[2].partial(0).value()};
    const Vec3 bv{bj[0].partial(1).value(), bj[1].partial(1).value(), bj[2].partial(1).value()};
    const Vec3 n = b0.normalized();  // outward normal of the component sphere

    // Pullback of the sphere area form: sigma(X, Y) = det[n, X, Y].
    const double pulled = n.x * (bu.y * bv.z - bu.z * bv.y) - n.y * (bu.x * bv.z - bu.z * bv.x) +
                          n.z * (bu.x * bv.y - bu.y * bv.x);

    const ConnectionForms cf = connection_forms(f);
    const double area = wedge_uv(cf.theta1, cf.theta2);
    return pulled / area;
}

StructuralResidual structural_residual(const Chart& chart, double u, double v,
                                       const ParamTable& params) {
    const FrameJets f = darboux_frame(chart, u, v, 2, params);
    const ConnectionForms cf = connection_forms(f);
    const InvariantSample s = curvatures(cf, f);

    auto exterior_d = [](const Covector& phi) {
        return phi.dv.partial(0).value() - phi.du.partial(1).value();
    };
    const double area = wedge_uv(cf.theta1, cf.theta2);
    StructuralResidual r;
    r.gauss = exterior_d(cf.w(1, 2)) + s.K * area;
    r.normal = exterior_d(cf.w(3, 4)) + s.KN * area;
    return r;
}

}  // namespace gm4

#include "gm4/gaussmap.hpp"

#include <cmath>

namespace gm4 {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;

// Index pairs for the Plucker component order (a12, a23, a31, a34, a14, a24).
constexpr int kPairs[6][2] = {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {0, 3}, {1, 3}};
}  // namespace

Bivector plucker(const FrameJets& frame) {
    Bivector b;
    for (int k = 0; k < 6; ++k) {
        const int i = kPairs[k][0], j = kPairs[k][1];
        b.a[k] = frame.e[0][i].value() * frame.e[1][j].value() -
                 frame.e[0][j].value() * frame.e[1][i].value();
    }
    return b;
}

GaussPoint gauss_components(const FrameJets& frame) {
    const Bivector b = plucker(frame);
    GaussPoint g;
    g.beta = {(b.a[0] + b.a[3]) * kInvSqrt2, (b.a[1] + b.a[4]) * kInvSqrt2,
              (b.a[2] + b.a[5]) * kInvSqrt2};
    g.gamma = {(b.a[0] - b.a[3]) * kInvSqrt2, (b.a[1] - b.a[4]) * kInvSqrt2,
               (b.a[2] - b.a[5]) * kInvSqrt2};
    const double d1 = kInvSqrt2 + g.beta.x;
    const double d2 = kInvSqrt2 + g.gamma.x;
    if (d1 > 1e-9) g.stereo1 = {g.beta.y / d1, g.beta.z / d1};
    else g.stereo1_valid = false;
    if (d2 > 1e-9) g.stereo2 = {g.gamma.y / d2, g.gamma.z / d2};
    else g.stereo2_valid = false;
    return g;
}

std::array<Jet2, 3> component_jets(const FrameJets& frame, int comp) {
    std::array<Jet2, 6> alpha;
    for (int k = 0; k < 6; ++k) {
        const int i = kPairs[k][0], j = kPairs[k][1];
        alpha[k] = frame.e[0][i] * frame.e[1][j] - frame.e[0][j] * frame.e[1][i];
    }
    const double sgn = comp == 1 ? 1.0 : -1.0;
    std::array<Jet2, 3> out;
    for (int i = 0; i < 3; ++i) out[i] = (alpha[i] + alpha[i + 3] * sgn) * kInvSqrt2;
    return out;
}

Mat2 dgauss(const ConnectionForms& cf, int comp) {
    Mat2 m;
    const auto& w13 = cf.w(1, 3);
    const auto& w14 = cf.w(1, 4);
    const auto& w23 = cf.w(2, 3);
    const auto& w24 = cf.w(2, 4);
    if (comp == 1) {
        m.a = (w24.u_val() - w13.u_val()) * kInvSqrt2;
        m.b = (w24.v_val() - w13.v_val()) * kInvSqrt2;
        m.c = (-w14.u_val() - w23.u_val()) * kInvSqrt2;
        m.d = (-w14.v_val() - w23.v_val()) * kInvSqrt2;
    } else {
        m.a = (-w24.u_val() - w13.u_val()) * kInvSqrt2;
        m.b = (-w24.v_val() - w13.v_val()) * kInvSqrt2;
        m.c = (w14.u_val() - w23.u_val()) * kInvSqrt2;
        m.d = (w14.v_val() - w23.v_val()) * kInvSqrt2;
    }
    return m;
}

KernelResult kernel_direction(const Mat2& m, double eps) {
    KernelResult res;
    const std::array<std::array<double, 2>, 4> rows = {{{m.a, m.b}, {m.c, m.d}, {0, 0}, {0, 0}}};
    const auto sv = singular_values_4x2(rows);
    if (sv[0] <= eps) {
        res.rank = KernelResult::Rank::Full;
        return res;
    }
    if (sv[1] > eps * sv[0]) {
        res.rank = KernelResult::Rank::None;
        return res;
    }
    // Rank one: the kernel is orthogonal to the larger row.
    const Vec2 r1{m.a, m.b}, r2{m.c, m.d};
    const Vec2& lead = r1.norm() >= r2.norm() ? r1 : r2;
    Vec2 dir{-lead.y, lead.x};
    dir = dir.normalized();
    if (dir.x < 0 || (dir.x == 0 && dir.y < 0)) dir = dir * -1.0;
    res.rank = KernelResult::Rank::Line;
    res.dir = dir;
    return res;
}

RankResult rank_dg(const ConnectionForms& cf, double eps) {
    const std::array<std::array<double, 2>, 4> m = {{
        {cf.w(1, 3).u_val(), cf.w(1, 3).v_val()},
        {cf.w(1, 4).u_val(), cf.w(1, 4).v_val()},
        {cf.w(2, 3).u_val(), cf.w(2, 3).v_val()},
        {cf.w(2, 4).u_val(), cf.w(2, 4).v_val()},
    }};
    RankResult r;
    r.sigma = singular_values_4x2(m);
    if (r.sigma[0] <= eps) r.rank = 0;
    else if (r.sigma[1] <= eps * r.sigma[0]) r.rank = 1;
    else r.rank = 2;
    return r;
}

SphereTangentBasis sphere_tangent_basis(const Vec3& b0) {
    SphereTangentBasis basis;
    basis.normal = b0.normalized();
    // Seed with the standard axis least aligned with the normal.
    const double ax = std::fabs(basis.normal.x), ay = std::fabs(basis.normal.y),
                 az = std::fabs(basis.normal.z);
    Vec3 seed = (ax <= ay && ax <= az) ? Vec3{1, 0, 0} : (ay <= az ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    basis.t1 = (seed - basis.normal * seed.dot(basis.normal)).normalized();
    basis.t2 = basis.normal.cross(basis.t1);
    return basis;
}

}  // namespace gm4

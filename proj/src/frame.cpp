#include "gm4/frame.hpp"

#include <algorithm>
#include <cmath>

namespace gm4 {

namespace {

using JVec = std::array<Jet2, 4>;

Jet2 jdot(const JVec& a, const JVec& b) {
    Jet2 s = a[0] * b[0];
    s += a[1] * b[1];
    s += a[2] * b[2];
    s += a[3] * b[3];
    return s;
}

JVec jscale(const JVec& a, const Jet2& s) {
    return {a[0] * s, a[1] * s, a[2] * s, a[3] * s};
}

JVec jsub(const JVec& a, const JVec& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

JVec normalize(const JVec& a) {
    const Jet2 n = jet_sqrt(jdot(a, a));
    const Jet2 inv = jet_reciprocal(n);
    return jscale(a, inv);
}

bool is_coordinate_jet(const Jet2& j, double base, int axis) {
    const int p = j.order();
    for (int d = 0; d <= p; ++d)
        for (int jj = 0; jj <= d; ++jj) {
            const int i = d - jj;
            double expect = 0.0;
            if (i == 0 && jj == 0) expect = base;
            if (axis == 0 && i == 1 && jj == 0) expect = 1.0;
            if (axis == 1 && i == 0 && jj == 1) expect = 1.0;
            if (std::fabs(j.coeff(i, jj) - expect) > 1e-12) return false;
        }
    return true;
}

}  // namespace

FrameJets darboux_frame(const Chart& chart, double u, double v, int order,
                        const ParamTable& params) {
    FrameJets f;
    f.order = order;
    f.x = chart.eval_jets(u, v, order + 1, params);

    JVec xu, xv;
    for (int i = 0; i < 4; ++i) {
        xu[i] = f.x[i].partial(0);
        xv[i] = f.x[i].partial(1);
    }

    const bool graph_chart = chart.orientation > 0 && is_coordinate_jet(f.x[0], u, 0) &&
                             is_coordinate_jet(f.x[1], v, 1);

    if (graph_chart) {
        f.graph_closed_form = true;
        const Jet2 a10 = f.x[2].partial(0), a01 = f.x[2].partial(1);
        const Jet2 b10 = f.x[3].partial(0), b01 = f.x[3].partial(1);
        const Jet2 one(order, 1.0);
        const Jet2 zero(order, 0.0);

        const Jet2 n1sq = one + a10 * a10 + b10 * b10;
        const Jet2 n1 = jet_sqrt(n1sq);
        const Jet2 cross = a01 * b10 - a10 * b01;
        const Jet2 h = jet_sqrt(one + a10 * a10 + a01 * a01 + b10 * b10 + b01 * b01 + cross * cross);
        const Jet2 n3sq = one + a10 * a10 + a01 * a01;
        const Jet2 n3 = jet_sqrt(n3sq);

        f.e[0] = jscale(JVec{one, zero, a10, b10}, jet_reciprocal(n1));
        f.e[1] = jscale(JVec{-(a10 * a01 + b10 * b01), n1sq,
                             a01 - a10 * b10 * b01 + a01 * (b10 * b10),
                             b01 - a10 * a01 * b10 + b01 * (a10 * a10)},
                        jet_reciprocal(h * n1));
        f.e[2] = jscale(JVec{-a10, -a01, one, zero}, jet_reciprocal(n3));
        f.e[3] = jscale(JVec{a01 * a10 * b01 - b10 * (one + a01 * a01),
                             a01 * a10 * b10 - b01 * (one + a10 * a10),
                             -(a01 * b01) - a10 * b10, n3sq},
                        jet_reciprocal(h * n3));
        return f;
    }

    // General chart: Gram-Schmidt, seeded in orientation order.
    const JVec& t1 = chart.orientation > 0 ? xu : xv;
    const JVec& t2 = chart.orientation > 0 ? xv : xu;

    const double t1n = jdot(t1, t1).value();
    if (t1n < 1e-20) throw NotImmersed("x_u vanishes at (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    f.e[0] = normalize(t1);
    JVec w = jsub(t2, jscale(f.e[0], jdot(t2, f.e[0])));
    const double wn = jdot(w, w).value();
    if (wn < 1e-20 * jdot(t2, t2).value())
        throw NotImmersed("differential rank deficient at (" + std::to_string(u) + ", " +
                          std::to_string(v) + ")");
    f.e[1] = normalize(w);

    // Pick the two standard basis vectors least aligned with the tangent plane.
    std::array<std::pair<double, int>, 4> align;
    for (int k = 0; k < 4; ++k) {
        const double c1 = f.e[0][k].value();
        const double c2 = f.e[1][k].value();
        align[k] = {c1 * c1 + c2 * c2, k};
    }
    std::sort(align.begin(), align.end());
    const int ka = std::min(align[0].second, align[1].second);
    const int kb = std::max(align[0].second, align[1].second);

    auto basis_jet = [&](int k) {
        JVec e;
        for (int i = 0; i < 4; ++i) e[i] = Jet2(order, i == k ? 1.0 : 0.0);
        return e;
    };
    JVec u3 = basis_jet(ka);
    u3 = jsub(u3, jscale(f.e[0], jdot(u3, f.e[0])));
    u3 = jsub(u3, jscale(f.e[1], jdot(u3, f.e[1])));
    f.e[2] = normalize(u3);
    JVec u4 = basis_jet(kb);
    u4 = jsub(u4, jscale(f.e[0], jdot(u4, f.e[0])));
    u4 = jsub(u4, jscale(f.e[1], jdot(u4, f.e[1])));
    u4 = jsub(u4, jscale(f.e[2], jdot(u4, f.e[2])));
    f.e[3] = normalize(u4);

    std::array<Vec4, 4> rows;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rows[i][j] = f.e[i][j].value();
    if (det4(rows) < 0)
        for (int j = 0; j < 4; ++j) f.e[3][j] = -f.e[3][j];
    return f;
}

ConnectionForms connection_forms(const FrameJets& frame) {
    ConnectionForms cf;
    const int p = frame.order - 1;
    if (p < 0) throw OrderUnderflow("connection forms need frame jets of order >= 1");
    cf.order = p;

    std::array<std::array<Jet2, 4>, 4> e, eu, ev;
    for (int i = 0; i < 4; ++i)
        for (int c = 0; c < 4; ++c) {
            e[i][c] = frame.e[i][c].truncated(p);
            eu[i][c] = frame.e[i][c].partial(0);
            ev[i][c] = frame.e[i][c].partial(1);
        }

    auto dot_p = [&](const std::array<Jet2, 4>& a, const std::array<Jet2, 4>& b) {
        Jet2 s = a[0] * b[0];
        s += a[1] * b[1];
        s += a[2] * b[2];
        s += a[3] * b[3];
        return s;
    };

    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j) {
                cf.omega[i + 1][j + 1] = Covector{Jet2(p), Jet2(p)};
                continue;
            }
            cf.omega[i + 1][j + 1] = Covector{dot_p(eu[i], e[j]), dot_p(ev[i], e[j])};
        }

    std::array<Jet2, 4> xu, xv;
    for (int c = 0; c < 4; ++c) {
        xu[c] = frame.x[c].partial(0).truncated(p);
        xv[c] = frame.x[c].partial(1).truncated(p);
    }
    cf.theta1 = Covector{dot_p(xu, e[0]), dot_p(xv, e[0])};
    cf.theta2 = Covector{dot_p(xu, e[1]), dot_p(xv, e[1])};
    return cf;
}

FrameJets rotate_frame(const FrameJets& frame, double alpha, double beta) {
    FrameJets r = frame;
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cb = std::cos(beta), sb = std::sin(beta);
    for (int c = 0; c < 4; ++c) {
        r.e[0][c] = frame.e[0][c] * ca + frame.e[1][c] * sa;
        r.e[1][c] = frame.e[0][c] * (-sa) + frame.e[1][c] * ca;
        r.e[2][c] = frame.e[2][c] * cb + frame.e[3][c] * sb;
        r.e[3][c] = frame.e[2][c] * (-sb) + frame.e[3][c] * cb;
    }
    return r;
}

KernelResult pfaffian_kernel(const Vec2& p, const Vec2& q, double scale, double eps) {
    KernelResult res;
    const double np = p.norm(), nq = q.norm();
    const double tol = eps * std::max(scale, 1e-300);
    if (np <= tol && nq <= tol) {
        res.rank = KernelResult::Rank::Full;
        return res;
    }
    const double det = p.cross(q);
    if (std::fabs(det) > eps * std::max(np * nq, tol * tol)) {
        res.rank = KernelResult::Rank::None;
        return res;
    }
    const Vec2& lead = (np >= nq) ? p : q;
    Vec2 dir{-lead.y, lead.x};
    dir = dir.normalized();
    if (dir.x < 0 || (dir.x == 0 && dir.y < 0)) dir = dir * -1.0;
    res.rank = KernelResult::Rank::Line;
    res.dir = dir;
    return res;
}

FrameCheck check_frame(const FrameJets& frame) {
    FrameCheck c{0, 0, 0};
    std::array<Vec4, 4> rows;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rows[i][j] = frame.e[i][j].value();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double g = dot4(rows[i], rows[j]) - (i == j ? 1.0 : 0.0);
            c.max_gram_error = std::max(c.max_gram_error, std::fabs(g));
        }
    c.det_error = std::fabs(det4(rows) - 1.0);
    Vec4 xu, xv;
    for (int k = 0; k < 4; ++k) {
        xu[k] = frame.x[k].partial(0).value();
        xv[k] = frame.x[k].partial(1).value();
    }
    for (int i = 2; i < 4; ++i) {
        c.max_normal_tangency = std::max(c.max_normal_tangency, std::fabs(dot4(rows[i], xu)));
        c.max_normal_tangency = std::max(c.max_normal_tangency, std::fabs(dot4(rows[i], xv)));
    }
    return c;
}

}  // namespace gm4

#include <doctest.h>

#include "gm4/singular.hpp"
#include "helpers.hpp"

using namespace gm4;

TEST_CASE("example1: singular curve of the singular component passes the origin") {
    Atlas ex1 = test::fixture("example1.surf");
    TraceResult trace = trace_singular_set(ex1, 1, 256);
    REQUIRE(!trace.curves.empty());
    REQUIRE(!trace.field_degenerate);

    // Nearest traced point to the origin lies on the curve with tangent (1,0).
    double best = 1e30;
    CurvePoint best_pt;
    for (const auto& c : trace.curves)
        for (const auto& p : c.pts) {
            const double d = std::hypot(p.u, p.v);
            if (d < best) {
                best = d;
                best_pt = p;
            }
        }
    CHECK(best < 2e-2);

    classify_points(ex1, trace, 1);
    const G1Report g1 = check_G1(ex1, trace, 1);
    CHECK(g1.pass);
    CHECK(g1.min_grad > 1e-3);

    // The traced zero set is a closed oval through the origin carrying three
    // genuine 1-tangency points: the origin plus two more near
    // (-0.144, 0.386) and (0.330, 0.369), all verified against the local
    // degree and the quadratic-part criterion, and all negative.  (An odd
    // count on a closed fold loop is consistent: the kernel line field has
    // monodromy -1 around it.)
    int cusps_near_origin = 0, cusps_total = 0;
    CuspRecord origin_cusp;
    for (const auto& c : trace.curves)
        for (const auto& r : c.cusps) {
            ++cusps_total;
            CHECK(r.sign == -1);
            if (std::hypot(r.u, r.v) < 0.1) {
                ++cusps_near_origin;
                origin_cusp = r;
            }
        }
    REQUIRE(cusps_near_origin == 1);
    CHECK(cusps_total == 3);
    CHECK(std::hypot(origin_cusp.u, origin_cusp.v) < 1e-6);
    CHECK(std::fabs(origin_cusp.tangency_deriv) > 1e-3);

    // The other component has no singular points near the origin.
    TraceResult trace2 = trace_singular_set(ex1, 2, 256);
    for (const auto& c : trace2.curves)
        for (const auto& p : c.pts) CHECK(std::hypot(p.u, p.v) > 0.1);
}

TEST_CASE("example1: fold criterion equivalence along the curve") {
    Atlas ex1 = test::fixture("example1.surf");
    TraceResult trace = trace_singular_set(ex1, 1, 192);
    classify_points(ex1, trace, 1);
    int checked = 0;
    for (const auto& c : trace.curves)
        for (const auto& p : c.pts) {
            if (std::hypot(p.u, p.v) > 0.45) continue;  // stay well inside
            const double q = fold_criterion_Q(ex1.chart(0), p.u, p.v, 1, ex1.params);
            // Q-criterion nonzero <=> kernel transverse to the curve (fold).
            if (p.fold) {
                CHECK(std::fabs(q) > 1e-5);
                ++checked;
            } else if (std::fabs(p.t) < 1e-6) {
                CHECK(std::fabs(q) < 1e-2);
                ++checked;
            }
        }
    CHECK(checked > 20);
}

TEST_CASE("clifford: degenerate field reported through G1") {
    Atlas cl = test::fixture("clifford.surf");
    TraceResult trace = trace_singular_set(cl, 1, 64);
    CHECK(trace.field_degenerate);
    const G1Report g1 = check_G1(cl, trace, 1);
    CHECK(!g1.pass);
    CHECK(g1.gradient_vanishes);
}

TEST_CASE("plane: vacuous singular set") {
    Atlas pl = test::fixture("plane.surf");
    TraceResult trace = trace_singular_set(pl, 1, 64);
    CHECK(trace.curves.empty());
    // A plane is flat: K +/- KN vanishes identically, which the tracer
    // reports as a degenerate field rather than an empty singular set.
    CHECK(trace.field_degenerate);
    const G1Report g1 = check_G1(pl, trace, 1);
    CHECK(g1.gradient_vanishes);
    CHECK(!g1.pass);
}

TEST_CASE("cusp normal forms of synthetic maps") {
    // Build graph immersions whose first component map reduces to the two
    // cusp normal forms, and check the sign convention: the map preserves
    // orientation on its injective side exactly for (uv - v^3, u).
    // Embedding the plane map (f1, f2) as the graph immersion
    // (u, v, f1, f2) makes the first component of the Gauss map behave like
    // the plane map near the origin up to first order of its stereo image.
    // Rather than engineering that, check the sign machinery on example1's
    // detected cusp against the local degree oracle elsewhere; here check the
    // local degree of explicit plane maps through a tiny direct winding.
    auto winding_sign = [](double cubic) {
        // map (u, v) -> (u v + cubic v^3, u)
        const int n = 2048;
        double total = 0;
        double prev = 0;
        bool first = true;
        double px = 0, py = 0;
        for (int i = 0; i <= n; ++i) {
            const double th = 2 * 3.14159265358979323846 * i / n;
            const double u = 1e-2 * std::cos(th), v = 1e-2 * std::sin(th);
            const double x = u * v + cubic * v * v * v;
            const double y = u;
            if (!first) {
                const double cross = px * y - py * x;
                const double dot = px * x + py * y;
                total += std::atan2(cross, dot);
            }
            first = false;
            px = x;
            py = y;
            (void)prev;
        }
        return static_cast<int>(std::lround(total / (2 * 3.14159265358979323846)));
    };
    CHECK(winding_sign(-1.0) == +1);  // (uv - v^3, u): positive cusp
    CHECK(winding_sign(+1.0) == -1);  // (uv + v^3, u): negative cusp
}

TEST_CASE("example1 cusp sign agrees with the local degree oracle") {
    Atlas ex1 = test::fixture("example1.surf");
    TraceResult trace = trace_singular_set(ex1, 1, 192);
    classify_points(ex1, trace, 1);
    for (const auto& c : trace.curves)
        for (const auto& r : c.cusps) {
            if (std::hypot(r.u, r.v) > 0.5) continue;
            REQUIRE(r.sign != 0);
            const int deg = local_degree(ex1.chart(0), r.u, r.v, 1, ex1.params, 5e-3);
            CHECK(deg == r.sign);
            CHECK(r.normal_form_residual < 0.05);
        }
}

TEST_CASE("rank scan fixtures") {
    Atlas ff = test::fixture("flat_family.surf");
    const RankScanReport rs = rank_scan(ff, 64);
    CHECK(rs.points_scanned > 1000);
    CHECK(rs.rank_drops.empty());
    CHECK(rs.characterization_ok);
}

TEST_CASE("G3 on example1 restricted to a disk") {
    Atlas ex1 = test::fixture("example1.surf");
    TraceResult trace = trace_singular_set(ex1, 1, 192);
    classify_points(ex1, trace, 1);
    const G3Report g3 = check_G3(ex1, trace, 1);
    CHECK(g3.triple_points == 0);
    CHECK(g3.cusp_image_collisions == 0);
}

TEST_CASE("traced points have rank-one differential with the Pfaffian kernel") {
    Atlas ex1 = test::fixture("example1.surf");
    TraceResult trace = trace_singular_set(ex1, 1, 160);
    classify_points(ex1, trace, 1);
    int checked = 0;
    for (const auto& curve : trace.curves)
        for (size_t i = 0; i < curve.pts.size(); i += 5) {
            const CurvePoint& p = curve.pts[i];
            const FrameJets f = darboux_frame(ex1.chart(0), p.u, p.v, 1, ex1.params);
            const ConnectionForms cf = connection_forms(f);
            const KernelResult kd = kernel_direction(dgauss(cf, 1), 1e-5);
            REQUIRE(kd.rank == KernelResult::Rank::Line);
            const Vec2 pf{cf.w(1, 3).u_val() - cf.w(2, 4).u_val(),
                          cf.w(1, 3).v_val() - cf.w(2, 4).v_val()};
            const Vec2 qf{cf.w(1, 4).u_val() + cf.w(2, 3).u_val(),
                          cf.w(1, 4).v_val() + cf.w(2, 3).v_val()};
            const KernelResult kp = pfaffian_kernel(pf, qf, 1.0, 1e-5);
            REQUIRE(kp.rank == KernelResult::Rank::Line);
            CHECK(std::fabs(kd.dir.cross(kp.dir)) < 1e-6);
            ++checked;
        }
    CHECK(checked > 30);
}

TEST_CASE("semiumbilic surfaces: both components share the singular set") {
    Atlas dt = test::fixture("double_torus.surf");
    TraceResult t1 = trace_singular_set(dt, 1, 128);
    TraceResult t2 = trace_singular_set(dt, 2, 128);
    CHECK(t1.curves.size() == t2.curves.size());
    // Every comp-1 traced point satisfies K - KN = 0 as well (KN vanishes).
    int checked = 0;
    for (const auto& curve : t1.curves)
        for (size_t i = 0; i < curve.pts.size(); i += 9) {
            const CurvePoint& p = curve.pts[i];
            const InvariantSample s =
                invariants_at(dt.chart(p.chart), p.u, p.v, dt.params, 1);
            CHECK(std::fabs(s.K - s.KN) < 1e-7);
            CHECK(std::fabs(s.KN) < 1e-9);
            ++checked;
        }
    CHECK(checked > 50);
}

TEST_CASE("G2 classification reports") {
    Atlas ex1 = test::fixture("example1.surf");
    TraceResult tr = trace_singular_set(ex1, 1, 160);
    const G1Report g1 = check_G1(ex1, tr, 1);
    classify_points(ex1, tr, 1);
    const G2Report g2 = check_G2(ex1, tr, g1);
    CHECK(g2.pass);
    CHECK(g2.cusp_count >= 1);
    CHECK(g2.fold_points > 100);
    CHECK(g2.degenerate_tangencies == 0);
    CHECK(g2.min_tangency_deriv > 1e-3);

    // The flat torus fails already at the regularity stage.
    Atlas cl = test::fixture("clifford.surf");
    TraceResult trc = trace_singular_set(cl, 1, 64);
    const G1Report g1c = check_G1(cl, trc, 1);
    const G2Report g2c = check_G2(cl, trc, g1c);
    CHECK(!g2c.pass);
    CHECK(!g2c.g1_pass);
}

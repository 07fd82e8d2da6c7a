#include <doctest.h>

#include "gm4/invariants.hpp"
#include "gm4/gaussmap.hpp"
#include "helpers.hpp"

using namespace gm4;

TEST_CASE("second fundamental form on model charts") {
    Atlas pl = test::fixture("plane.surf");
    const FrameJets fp = darboux_frame(pl.chart(0), 0, 0, 1, pl.params);
    const IIForm iip = second_fundamental_form(connection_forms(fp), fp);
    CHECK(std::fabs(iip.l3) + std::fabs(iip.m3) + std::fabs(iip.n3) + std::fabs(iip.l4) +
              std::fabs(iip.m4) + std::fabs(iip.n4) <
          1e-12);

    // Example1 origin: a = uv + ..., b = -u^2/2 + ...; the II coefficients in
    // graph form are the Hessian entries of a and b.
    Atlas ex1 = test::fixture("example1.surf");
    const FrameJets fe = darboux_frame(ex1.chart(0), 0, 0, 1, ex1.params);
    const IIForm ii = second_fundamental_form(connection_forms(fe), fe);
    CHECK(ii.l3 == doctest::Approx(0).epsilon(1e-12));
    CHECK(ii.m3 == doctest::Approx(1));
    CHECK(ii.n3 == doctest::Approx(0).epsilon(1e-12));
    CHECK(ii.l4 == doctest::Approx(-1));
    CHECK(ii.m4 == doctest::Approx(0).epsilon(1e-12));
    CHECK(ii.n4 == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("flat-family origin: K = KN = 0, Delta < 0, Gauss map regular") {
    // Hessians at the origin: a -> (41, -2, 3), b -> (-94, 5, 1); both
    // curvature determinants cancel exactly while the discriminant
    // (af-be)(bg-cf) - (ag-ce)^2/4 = 17*(-17) - 323^2/4 = -26371.25.
    Atlas ff = test::fixture("flat_family.surf");
    const FrameJets f = darboux_frame(ff.chart(0), 0, 0, 1, ff.params);
    const ConnectionForms cf = connection_forms(f);
    const IIForm ii = second_fundamental_form(cf, f);
    CHECK(ii.l3 == doctest::Approx(41));
    CHECK(ii.m3 == doctest::Approx(-2));
    CHECK(ii.n3 == doctest::Approx(3));
    CHECK(ii.l4 == doctest::Approx(-94));
    CHECK(ii.m4 == doctest::Approx(5));
    CHECK(ii.n4 == doctest::Approx(1));

    const InvariantSample s = curvatures(cf, f);
    CHECK(std::fabs(s.K) < 1e-9);
    CHECK(std::fabs(s.KN) < 1e-9);
    CHECK(s.Delta == doctest::Approx(-26371.25));
    CHECK(s.Delta < 0);

    CHECK(rank_dg(cf).rank == 2);
}

TEST_CASE("example1 invariants at the origin") {
    // The graph osculates (uv, -u^2/2): K = det Hess a + det Hess b = -1 and
    // KN = +1 in the orientation fixed by the frame construction, so the
    // origin lies on {K + KN = 0}: the first component is singular there and
    // the second is regular, with |K - KN| = 2.
    Atlas ex1 = test::fixture("example1.surf");
    const InvariantSample s = invariants_at(ex1.chart(0), 0, 0, ex1.params, 1);
    CHECK(s.K == doctest::Approx(-1).epsilon(1e-10));
    CHECK(s.KN == doctest::Approx(1).epsilon(1e-10));
    CHECK(s.K + s.KN == doctest::Approx(0).epsilon(1e-10));
    CHECK(s.K - s.KN == doctest::Approx(-2).epsilon(1e-10));
    CHECK(s.Jg1 == doctest::Approx(0).epsilon(1e-10));
    CHECK(s.Jg2 == doctest::Approx(-1).epsilon(1e-10));
}

TEST_CASE("clifford torus is flat and semiumbilic") {
    Atlas cl = test::fixture("clifford.surf");
    for (int trial = 0; trial < 40; ++trial) {
        const double u = test::uniform(0.3, 6.0), v = test::uniform(0.3, 6.0);
        const InvariantSample s = invariants_at(cl.chart(0), u, v, cl.params, 1);
        CHECK(std::fabs(s.K) < 1e-10);
        CHECK(std::fabs(s.KN) < 1e-10);
    }
}

TEST_CASE("hyperplane surfaces have vanishing normal curvature") {
    Atlas sph = test::fixture("sphere.surf");
    for (int trial = 0; trial < 30; ++trial) {
        const double r = test::uniform(0, 0.9), phi = test::uniform(0, 6.28);
        const double u = r * std::cos(phi), v = r * std::sin(phi);
        const InvariantSample s =
            invariants_at(sph.chart(trial % 2), u, v, sph.params, 1);
        CHECK(std::fabs(s.KN) < 1e-9);
        CHECK(s.K == doctest::Approx(1).epsilon(1e-8));  // unit sphere
    }
}

TEST_CASE("two-route jacobian agreement") {
    // Pullback of the sphere area form vs half-sum/difference of curvatures.
    for (const char* name : {"example1.surf", "flat_family.surf", "double_torus.surf"}) {
        Atlas atlas = test::fixture(name);
        int done = 0;
        while (done < 60) {
            const int ci = static_cast<int>(test::rng()() % atlas.charts.size());
            const Chart& chart = atlas.chart(ci);
            const double u = test::uniform(chart.domain.u0, chart.domain.u1);
            const double v = test::uniform(chart.domain.v0, chart.domain.v1);
            if (!chart.domain.contains(u, v, atlas.params, 1e-2)) continue;
            InvariantSample s;
            double j1, j2;
            try {
                s = invariants_at(chart, u, v, atlas.params, 1);
                j1 = jacobian_by_pullback(chart, u, v, 1, atlas.params);
                j2 = jacobian_by_pullback(chart, u, v, 2, atlas.params);
            } catch (const std::runtime_error&) {
                continue;
            }
            ++done;
            const double tol = 1e-6 * (1 + std::fabs(s.K) + std::fabs(s.KN));
            CHECK(std::fabs(j1 - 0.5 * (s.K + s.KN)) < tol);
            CHECK(std::fabs(j2 - 0.5 * (s.K - s.KN)) < tol);
        }
    }
}

TEST_CASE("pfaffian dependence matches the vanishing of K +/- KN") {
    Atlas ex1 = test::fixture("example1.surf");
    for (int trial = 0; trial < 200; ++trial) {
        const double u = test::uniform(-0.7, 0.7), v = test::uniform(-0.7, 0.7);
        const FrameJets f = darboux_frame(ex1.chart(0), u, v, 1, ex1.params);
        const ConnectionForms cf = connection_forms(f);
        const InvariantSample s = curvatures(cf, f);
        // det of the covector pair in the (du, dv) basis, normalized by the
        // area element, equals K + KN (and the companion pair K - KN).
        const Vec2 p1{cf.w(1, 3).u_val() - cf.w(2, 4).u_val(),
                      cf.w(1, 3).v_val() - cf.w(2, 4).v_val()};
        const Vec2 q1{cf.w(1, 4).u_val() + cf.w(2, 3).u_val(),
                      cf.w(1, 4).v_val() + cf.w(2, 3).v_val()};
        CHECK(p1.cross(q1) / s.area_element == doctest::Approx(s.K + s.KN).epsilon(1e-9));
    }
}

TEST_CASE("example1 singular polynomial identity") {
    // Independent closed form: q (K + KN) + P7 = 0 where P7 is the degree-7
    // polynomial cutting out the singular set of the first component and q is
    // the square of the metric normalizer, both computed symbolically from
    // the chart functions.
    Atlas ex1 = test::fixture("example1.surf");
    ParamTable none;
    ExprPtr P7 = parse_expr(
        "-4*v + 8*u^2 - 4*u*v + 8*v^2 - 4*u^2*v + 2*u*v^2 + 2*u*v^3 + v^4 + 6*u*v^4"
        " - 6*u^2*v^3 + 4*u^4*v - 6*u^3*v^2 + 2*v^5 - 28*u^3*v^3 + 32*u^2*v^4"
        " - 16*u*v^5 + 24*u^4*v^2");
    ExprPtr qe = parse_expr(
        "(1 + v^2 + 2*u^3*v^2*(-6*v^3 - 5*v^2 + v + 1) + 2*u*v^2*(1 - 2*v)"
        " + 2*(v - 1)*v^3 + u^4*(v*(v + 1)*(3*v - 2)*(3*v + 1) + 2)"
        " + u^2*((v^2*(2*v + 1)^2 + 8)*v^2 + 2))^2");
    for (int trial = 0; trial < 200; ++trial) {
        const double u = test::uniform(-0.6, 0.6), v = test::uniform(-0.6, 0.6);
        const InvariantSample s = invariants_at(ex1.chart(0), u, v, ex1.params, 1);
        const double lhs = qe->eval(u, v, none) * (s.K + s.KN);
        const double rhs = -P7->eval(u, v, none);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
    }
}

TEST_CASE("invariants agree across glued charts of the double torus") {
    Atlas dt = test::fixture("double_torus.surf");
    // Charts pp and pm share (u, v); so do pp and mp.  At common interior
    // points of the shared domain the invariant fields agree.
    for (int trial = 0; trial < 25; ++trial) {
        const double r = test::uniform(0, 0.6), phi = test::uniform(0, 6.28);
        const double u = r * std::cos(phi), v = r * std::sin(phi);
        if (!dt.chart(0).domain.contains(u, v, dt.params, 1e-2)) continue;
        const InvariantSample a = invariants_at(dt.chart(0), u, v, dt.params, 1);
        for (int c = 1; c < 4; ++c) {
            const InvariantSample b = invariants_at(dt.chart(c), u, v, dt.params, 1);
            CHECK(a.K == doctest::Approx(b.K).epsilon(1e-7));
            CHECK(std::fabs(b.KN) < 1e-9);  // spheric surface: semiumbilic
            CHECK(a.Delta == doctest::Approx(b.Delta).epsilon(1e-6));
        }
        CHECK(std::fabs(a.KN) < 1e-9);
    }
}

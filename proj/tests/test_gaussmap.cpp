#include <doctest.h>

#include <sstream>

#include "gm4/gaussmap.hpp"
#include "gm4/invariants.hpp"
#include "helpers.hpp"

using namespace gm4;

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

TEST_CASE("plucker coordinates of coordinate planes") {
    Atlas pl = test::fixture("plane.surf");
    const FrameJets f = darboux_frame(pl.chart(0), 0, 0, 1, pl.params);
    const Bivector b = plucker(f);
    CHECK(b.a[0] == doctest::Approx(1));  // a12
    for (int k = 1; k < 6; ++k) CHECK(std::fabs(b.a[static_cast<size_t>(k)]) < 1e-12);
    CHECK(b.decomposability() == doctest::Approx(0).epsilon(1e-12));
    CHECK(b.norm2() == doctest::Approx(1));

    // Orientation reversal flips the sign.
    const FrameJets r = rotate_frame(f, 3.14159265358979323846, 0);  // e1,e2 -> -e1,-e2
    const Bivector br = plucker(r);
    CHECK(br.a[0] == doctest::Approx(1));  // even rotation keeps the plane
}

TEST_CASE("bivector invariants on random fixture points") {
    for (const char* name : {"example1.surf", "clifford.surf", "double_torus.surf"}) {
        Atlas atlas = test::fixture(name);
        int done = 0;
        while (done < 30) {
            const int ci = static_cast<int>(test::rng()() % atlas.charts.size());
            const Chart& chart = atlas.chart(ci);
            const double u = test::uniform(chart.domain.u0, chart.domain.u1);
            const double v = test::uniform(chart.domain.v0, chart.domain.v1);
            if (!chart.domain.contains(u, v, atlas.params, 5e-2)) continue;
            FrameJets f;
            try {
                f = darboux_frame(chart, u, v, 1, atlas.params);
            } catch (const std::runtime_error&) {
                continue;
            }
            ++done;
            const Bivector b = plucker(f);
            CHECK(std::fabs(b.decomposability()) < 1e-10);
            CHECK(b.norm2() == doctest::Approx(1).epsilon(1e-10));
            const GaussPoint g = gauss_components(f);
            CHECK(g.beta.dot(g.beta) == doctest::Approx(0.5).epsilon(1e-10));
            CHECK(g.gamma.dot(g.gamma) == doctest::Approx(0.5).epsilon(1e-10));
        }
    }
}

TEST_CASE("gauss components at a graph origin and their frame independence") {
    Atlas ex1 = test::fixture("example1.surf");
    const FrameJets f = darboux_frame(ex1.chart(0), 0, 0, 1, ex1.params);
    const GaussPoint g = gauss_components(f);
    CHECK(g.beta.x == doctest::Approx(kInvSqrt2));
    CHECK(g.stereo1.x == doctest::Approx(0).epsilon(1e-12));
    CHECK(g.stereo1.y == doctest::Approx(0).epsilon(1e-12));
    CHECK(g.stereo2.x == doctest::Approx(0).epsilon(1e-12));

    for (int trial = 0; trial < 100; ++trial) {
        const double u = test::uniform(-0.7, 0.7), v = test::uniform(-0.7, 0.7);
        const double alpha = test::uniform(-3, 3), beta = test::uniform(-3, 3);
        const FrameJets fa = darboux_frame(ex1.chart(0), u, v, 1, ex1.params);
        const GaussPoint g1 = gauss_components(fa);
        const GaussPoint g2 = gauss_components(rotate_frame(fa, alpha, beta));
        CHECK((g1.beta - g2.beta).norm() < 1e-10);
        CHECK((g1.gamma - g2.gamma).norm() < 1e-10);
    }
}

TEST_CASE("stereographic images match the closed-form graph formulas") {
    // For a graph chart the components project to
    //   r (b01 - a10, -a01 - b10)  and  p (-a10 - b01, b10 - a01)
    // with r, p the reciprocal shifted normalizers; the denominators exceed 1.
    Atlas ex1 = test::fixture("example1.surf");
    ParamTable none;
    ExprPtr a10e = parse_expr("v - v^2");
    ExprPtr a01e = parse_expr("u - 2*u*v + v^2");
    ExprPtr b10e = parse_expr("-u - 2*u*v");
    ExprPtr b01e = parse_expr("-u^2");
    for (int trial = 0; trial < 120; ++trial) {
        const double u = test::uniform(-0.7, 0.7), v = test::uniform(-0.7, 0.7);
        const double a10 = a10e->eval(u, v, none), a01 = a01e->eval(u, v, none);
        const double b10 = b10e->eval(u, v, none), b01 = b01e->eval(u, v, none);
        const double cross = a01 * b10 - a10 * b01;
        const double h = std::sqrt(1 + a10 * a10 + a01 * a01 + b10 * b10 + b01 * b01 +
                                   cross * cross);
        const double den1 = 1 - a01 * b10 + a10 * b01 + h;
        const double den2 = 1 + a01 * b10 - a10 * b01 + h;
        CHECK(den1 > 1.0);
        CHECK(den2 > 1.0);

        const FrameJets f = darboux_frame(ex1.chart(0), u, v, 1, ex1.params);
        const GaussPoint g = gauss_components(f);
        CHECK(g.stereo1.x == doctest::Approx((b01 - a10) / den1).epsilon(1e-9));
        CHECK(g.stereo1.y == doctest::Approx((-a01 - b10) / den1).epsilon(1e-9));
        CHECK(g.stereo2.x == doctest::Approx((-a10 - b01) / den2).epsilon(1e-9));
        CHECK(g.stereo2.y == doctest::Approx((b10 - a01) / den2).epsilon(1e-9));
    }
}

TEST_CASE("clifford torus components trace circles in the two sphere factors") {
    Atlas cl = test::fixture("clifford.surf");
    for (int trial = 0; trial < 40; ++trial) {
        const double u = test::uniform(0.2, 6.0), v = test::uniform(0.2, 6.0);
        const FrameJets f = darboux_frame(cl.chart(0), u, v, 1, cl.params);
        const GaussPoint g = gauss_components(f);
        // First factor: (0, -sin(u+v), cos(u+v))/sqrt(2); second factor:
        // (0, sin(u-v), -cos(u-v))/sqrt(2).
        CHECK(g.beta.x == doctest::Approx(0).epsilon(1e-10));
        CHECK(g.beta.y == doctest::Approx(-std::sin(u + v) * kInvSqrt2).epsilon(1e-9));
        CHECK(g.beta.z == doctest::Approx(std::cos(u + v) * kInvSqrt2).epsilon(1e-9));
        CHECK(g.gamma.x == doctest::Approx(0).epsilon(1e-10));
        CHECK(g.gamma.y == doctest::Approx(std::sin(u - v) * kInvSqrt2).epsilon(1e-9));
        CHECK(g.gamma.z == doctest::Approx(-std::cos(u - v) * kInvSqrt2).epsilon(1e-9));
    }
}

TEST_CASE("differential of the components and kernels") {
    Atlas pl = test::fixture("plane.surf");
    const FrameJets fp = darboux_frame(pl.chart(0), 0, 0, 1, pl.params);
    const ConnectionForms cfp = connection_forms(fp);
    const Mat2 z1 = dgauss(cfp, 1), z2 = dgauss(cfp, 2);
    CHECK(std::fabs(z1.a) + std::fabs(z1.b) + std::fabs(z1.c) + std::fabs(z1.d) < 1e-12);
    CHECK(std::fabs(z2.a) + std::fabs(z2.b) + std::fabs(z2.c) + std::fabs(z2.d) < 1e-12);
    CHECK(kernel_direction(z1).rank == KernelResult::Rank::Full);
    CHECK(rank_dg(cfp).rank == 0);

    // Determinant route equals the Jacobians at random example1 points.
    Atlas ex1 = test::fixture("example1.surf");
    for (int trial = 0; trial < 60; ++trial) {
        const double u = test::uniform(-0.7, 0.7), v = test::uniform(-0.7, 0.7);
        const FrameJets f = darboux_frame(ex1.chart(0), u, v, 1, ex1.params);
        const ConnectionForms cf = connection_forms(f);
        const InvariantSample s = curvatures(cf, f);
        CHECK(dgauss(cf, 1).det() / s.area_element ==
              doctest::Approx(0.5 * (s.K + s.KN)).epsilon(1e-9));
        CHECK(dgauss(cf, 2).det() / s.area_element ==
              doctest::Approx(0.5 * (s.K - s.KN)).epsilon(1e-9));
    }

    // At the example1 origin the singular component has kernel (1, 0).
    const FrameJets f0 = darboux_frame(ex1.chart(0), 0, 0, 1, ex1.params);
    const ConnectionForms cf0 = connection_forms(f0);
    const KernelResult k1 = kernel_direction(dgauss(cf0, 1));
    CHECK(k1.rank == KernelResult::Rank::Line);
    CHECK(k1.dir.x == doctest::Approx(1).epsilon(1e-10));
    CHECK(k1.dir.y == doctest::Approx(0).epsilon(1e-10));
    CHECK(kernel_direction(dgauss(cf0, 2)).rank == KernelResult::Rank::None);

    // Identity-like matrices.
    CHECK(kernel_direction(Mat2{1, 0, 0, 1}).rank == KernelResult::Rank::None);
    const KernelResult kd = kernel_direction(Mat2{0, 0, 0, 1});
    CHECK(kd.rank == KernelResult::Rank::Line);
    CHECK(kd.dir.x == doctest::Approx(1));

    // The kernel of the singular component matches the Pfaffian system kernel.
    const Vec2 p{cf0.w(1, 3).u_val() - cf0.w(2, 4).u_val(),
                 cf0.w(1, 3).v_val() - cf0.w(2, 4).v_val()};
    const Vec2 q{cf0.w(1, 4).u_val() + cf0.w(2, 3).u_val(),
                 cf0.w(1, 4).v_val() + cf0.w(2, 3).v_val()};
    const KernelResult kp = pfaffian_kernel(p, q);
    CHECK(kp.rank == KernelResult::Rank::Line);
    CHECK(std::fabs(kp.dir.cross(k1.dir)) < 1e-10);
}

TEST_CASE("full gauss map rank on the fixtures") {
    // The flat-family origin has both components singular but the Gauss map
    // itself regular.
    Atlas ff = test::fixture("flat_family.surf");
    const ConnectionForms cf =
        connection_forms(darboux_frame(ff.chart(0), 0, 0, 1, ff.params));
    CHECK(rank_dg(cf).rank == 2);

    // Random cubic graph charts: rank 2 at every sampled point.
    for (int seed = 0; seed < 20; ++seed) {
        std::ostringstream os;
        os << "name rnd\nclosed false\nembedded false\n\nchart main\ncoord u\ncoord v\ncoord ";
        os.precision(17);
        os << test::uniform(-1, 1) << "*u^2 + " << test::uniform(-1, 1) << "*u*v + "
           << test::uniform(-1, 1) << "*v^2 + " << test::uniform(-1, 1) << "*u^3 + "
           << test::uniform(-1, 1) << "*v^3\ncoord " << test::uniform(-1, 1) << "*u^2 + "
           << test::uniform(-1, 1) << "*u*v + " << test::uniform(-1, 1) << "*v^2 + "
           << test::uniform(-1, 1) << "*u^2*v\ndomain rect -0.4 0.4 -0.4 0.4\norientation +1\n";
        Atlas rnd = parse_surface(os.str());
        bool all_rank2 = true;
        for (int trial = 0; trial < 25; ++trial) {
            const double u = test::uniform(-0.35, 0.35), v = test::uniform(-0.35, 0.35);
            const ConnectionForms c =
                connection_forms(darboux_frame(rnd.chart(0), u, v, 1, rnd.params));
            if (rank_dg(c).rank < 2) all_rank2 = false;
        }
        CHECK(all_rank2);
    }
}

#include <doctest.h>

#include "gm4/quadrature.hpp"
#include "helpers.hpp"

using namespace gm4;

TEST_CASE("sphere integrals and degrees") {
    Atlas sph = test::fixture("sphere.surf");
    const QuadratureResult K = integrate_surface(
        sph, [](const InvariantSample& s) { return s.K; }, 128);
    const double four_pi = 4 * 3.14159265358979323846;
    CHECK(std::fabs(K.value - four_pi) < 0.01 * four_pi);

    const QuadratureResult KN = integrate_surface(
        sph, [](const InvariantSample& s) { return s.KN; }, 128);
    CHECK(std::fabs(KN.value) < 1e-3 * four_pi);

    const DegreeResult d1 = mapping_degree(sph, 1, 128);
    const DegreeResult d2 = mapping_degree(sph, 2, 128);
    CHECK(d1.integer_ok);
    CHECK(d2.integer_ok);
    CHECK(d1.rounded == 1);
    CHECK(d2.rounded == 1);
}

TEST_CASE("open surfaces cannot have degrees") {
    Atlas ex1 = test::fixture("example1.surf");
    CHECK_THROWS_AS(mapping_degree(ex1, 1, 64), NotClosedSurface);
}

TEST_CASE("geodesic curvature closed forms") {
    // Great circle on the radius-1/sqrt(2) sphere: kappa_g = 0.
    const double R = 1.0 / std::sqrt(2.0);
    {
        const Vec3 c{R, 0, 0}, c1{0, R, 0}, c2{-R, 0, 0};
        CHECK(geodesic_curvature(c, c1, c2) == doctest::Approx(0).epsilon(1e-12));
    }
    // Small circle at colatitude alpha: kappa_g = cot(alpha)/R = tan(pi/2 -
    // alpha)/R; check against the determinant formula at several alphas.
    for (double alpha : {0.3, 0.7, 1.1, 1.9}) {
        const double rc = R * std::sin(alpha), z = R * std::cos(alpha);
        auto c = [&](double t) { return Vec3{rc * std::cos(t), rc * std::sin(t), z}; };
        const Vec3 c0 = c(0.4);
        const Vec3 c1{-rc * std::sin(0.4), rc * std::cos(0.4), 0};
        const Vec3 c2{-rc * std::cos(0.4), -rc * std::sin(0.4), 0};
        const double expected = std::cos(alpha) / (R * std::sin(alpha));
        CHECK(geodesic_curvature(c0, c1, c2) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("empty singular set integrates to zero") {
    Atlas sph = test::fixture("sphere.surf");
    TraceResult trace = trace_singular_set(sph, 1, 96);
    CHECK(trace.curves.empty());
    const KgIntegral kg = curve_integral_kg(sph, trace, 1);
    CHECK(kg.value == doctest::Approx(0));
    CHECK(kg.curves == 0);
}

TEST_CASE("degree recovery from the curvature integrals") {
    // deg g1 = (int K + int KN)/(4 pi) and deg g2 = (int K - int KN)/(4 pi)
    // must agree with the direct integral of the component Jacobians.
    Atlas sph = test::fixture("sphere.surf");
    auto ints = integrate_fields(
        sph, 4,
        [](int, double, double, const InvariantSample& s, double* o) {
            o[0] = s.K;
            o[1] = s.KN;
            o[2] = s.Jg1;
            o[3] = s.Jg2;
        },
        96);
    const double four_pi = 4 * 3.14159265358979323846;
    const double two_pi = four_pi / 2;
    const double d1_from_K = (ints[0].value + ints[1].value) / four_pi;
    const double d2_from_K = (ints[0].value - ints[1].value) / four_pi;
    CHECK(std::fabs(d1_from_K - ints[2].value / two_pi) < 1e-3);
    CHECK(std::fabs(d2_from_K - ints[3].value / two_pi) < 1e-3);
}

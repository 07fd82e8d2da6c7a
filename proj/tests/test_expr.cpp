#include <doctest.h>

#include "helpers.hpp"

using namespace gm4;

TEST_CASE("parser handles the fixture coordinate functions") {
    ParamTable params;
    ExprPtr e = parse_expr("u*v - u*v^2 + v^3/3");
    CHECK(e->eval(2, 3, params) == doctest::Approx(2 * 3 - 2 * 9 + 27.0 / 3));

    CHECK(parse_expr("0")->eval(5, 5, params) == doctest::Approx(0));

    ExprPtr s = parse_expr("sqrt(1 - u^2 - v^2)");
    CHECK(s->eval(0, 0, params) == doctest::Approx(1));
    CHECK_THROWS_AS(s->eval(2, 0, params), DomainError);
}

TEST_CASE("parser reports positions and unknown names") {
    CHECK_THROWS_AS(parse_expr("u + * v"), ParseError);
    CHECK_THROWS_AS(parse_expr("frob(u)"), ParseError);
    CHECK_THROWS_AS(parse_expr("(u + v"), ParseError);
    CHECK_THROWS_AS(parse_expr("u ^ v"), ParseError);
    ParamTable empty;
    CHECK_THROWS_AS(parse_expr("missing_param + 1")->eval(0, 0, empty), UnknownIdentifier);

    try {
        parse_expr("u +\n* v");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("precedence and unary minus") {
    ParamTable params;
    CHECK(parse_expr("-u^2")->eval(3, 0, params) == doctest::Approx(-9));
    CHECK(parse_expr("2 + 3*4")->eval(0, 0, params) == doctest::Approx(14));
    CHECK(parse_expr("2*u^3")->eval(2, 0, params) == doctest::Approx(16));
    CHECK(parse_expr("u^-2")->eval(2, 0, params) == doctest::Approx(0.25));
    CHECK(parse_expr("-u*v")->eval(2, 3, params) == doctest::Approx(-6));
    CHECK(parse_expr("pi")->eval(0, 0, params) == doctest::Approx(3.14159265358979));
}

TEST_CASE("print round-trips structurally") {
    const char* sources[] = {
        "u*v - u*v^2 + v^3/3",
        "-u^2/2 - u^2*v",
        "sqrt((1 - u^2 - v^2)/2) + sin(u)*cos(v)",
        "(123*u^2 - 12*u*v + 9*v^2)/6 + a30*u^3",
    };
    for (const char* src : sources) {
        ExprPtr e = parse_expr(src);
        ExprPtr back = parse_expr(e->print());
        CHECK(e->structurally_equal(*back));
    }
}

TEST_CASE("order-0 jet evaluation equals scalar evaluation") {
    ParamTable params{{"c", 0.7}};
    const char* sources[] = {
        "sin(u) + cos(v)*c", "sqrt(2 + u*v)", "(u - v)/(3 + u^2)", "u^3*v - c*v^2",
    };
    for (const char* src : sources) {
        ExprPtr e = parse_expr(src);
        for (int trial = 0; trial < 250; ++trial) {
            const double u = test::uniform(-0.9, 0.9), v = test::uniform(-0.9, 0.9);
            const double scalar = e->eval(u, v, params);
            const Jet2 j = e->eval_jet(u, v, 0, params);
            CHECK(j.value() == doctest::Approx(scalar).epsilon(1e-14));
        }
    }
}

TEST_CASE("jet differentiation matches symbolic derivatives of polynomials") {
    ParamTable params;
    // f = u^2 v + 3 v^2; df/du = 2uv, df/dv = u^2 + 6v
    ExprPtr f = parse_expr("u^2*v + 3*v^2");
    ExprPtr fu = parse_expr("2*u*v");
    ExprPtr fv = parse_expr("u^2 + 6*v");
    for (int trial = 0; trial < 50; ++trial) {
        const double u = test::uniform(-1, 1), v = test::uniform(-1, 1);
        const Jet2 j = f->eval_jet(u, v, 3, params);
        const Jet2 ju = j.partial(0);
        const Jet2 jv = j.partial(1);
        const Jet2 su = fu->eval_jet(u, v, 2, params);
        const Jet2 sv = fv->eval_jet(u, v, 2, params);
        for (int d = 0; d <= 2; ++d)
            for (int k = 0; k <= d; ++k) {
                CHECK(ju.coeff(d - k, k) == doctest::Approx(su.coeff(d - k, k)).epsilon(1e-12));
                CHECK(jv.coeff(d - k, k) == doctest::Approx(sv.coeff(d - k, k)).epsilon(1e-12));
            }
    }
}

TEST_CASE("example1 chart coefficients at the origin") {
    ParamTable params;
    ExprPtr a = parse_expr("u*v - u*v^2 + v^3/3");
    const Jet2 j = a->eval_jet(0, 0, 2, params);
    CHECK(j.coeff(1, 0) == doctest::Approx(0));
    CHECK(j.coeff(0, 1) == doctest::Approx(0));
    CHECK(j.derivative(1, 1) == doctest::Approx(1));
}

TEST_CASE("jet evaluation at an offset point") {
    ParamTable params;
    const Jet2 j = parse_expr("u^2")->eval_jet(1, 0, 2, params);
    CHECK(j.coeff(0, 0) == doctest::Approx(1));
    CHECK(j.coeff(1, 0) == doctest::Approx(2));
    CHECK(j.coeff(2, 0) == doctest::Approx(1));

    const Jet2 s = parse_expr("sqrt(4 + u)")->eval_jet(0, 0, 1, params);
    CHECK(s.coeff(0, 0) == doctest::Approx(2));
    CHECK(s.coeff(1, 0) == doctest::Approx(0.25));
}

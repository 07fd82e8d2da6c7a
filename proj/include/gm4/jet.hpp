////////////////////////////////////////////////////////////////////////////////
// jet.hpp
//
// Truncated two-variable Taylor polynomials ("jets") up to total order 4.
// A Jet2 stores Taylor-normalized coefficients c_ij = f_ij / (i! j!) for the
// monomials du^i dv^j with i+j <= order, expanded around an implicit base
// point.  Products are then plain truncated convolutions, and elementary
// functions are evaluated by composing their univariate Taylor series with
// the nilpotent part of the argument.
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace gm4 {

struct DegenerateJet : std::runtime_error {
    explicit DegenerateJet(const std::string& what) : std::runtime_error(what) {}
};
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};
struct OrderUnderflow : std::runtime_error {
    explicit OrderUnderflow(const std::string& what) : std::runtime_error(what) {}
};

class Jet2 {
public:
    static constexpr int kMaxOrder = 4;
    static constexpr int kMaxCoeffs = 15;  // (4+1)(4+2)/2

    Jet2() : order_(0) { coeff_.fill(0.0); }
    explicit Jet2(int order, double value = 0.0) : order_(order) {
        check_order(order);
        coeff_.fill(0.0);
        coeff_[0] = value;
    }

    static Jet2 constant(double value, int order) { return Jet2(order, value); }
    // The jet of the coordinate function u (axis 0) or v (axis 1) at base value x0.
    static Jet2 variable(double x0, int axis, int order);

    int order() const { return order_; }
    double value() const { return coeff_[0]; }

    static int index(int i, int j) {
        const int d = i + j;
        return d * (d + 1) / 2 + j;
    }
    static int coeff_count(int order) { return (order + 1) * (order + 2) / 2; }

    double coeff(int i, int j) const {
        return (i + j <= order_) ? coeff_[index(i, j)] : 0.0;
    }
    void set_coeff(int i, int j, double c) {
        if (i + j > order_) throw OrderUnderflow("coefficient exceeds jet order");
        coeff_[index(i, j)] = c;
    }

    // Scaled derivative value f_ij = c_ij * i! * j!.
    double derivative(int i, int j) const;

    Jet2 operator-() const;
    Jet2& operator+=(const Jet2& rhs);
    Jet2& operator-=(const Jet2& rhs);
    Jet2& operator*=(double s);

    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
    friend Jet2 operator*(double s, Jet2 a) { return a *= s; }
    friend Jet2 operator+(Jet2 a, double c) { a.coeff_[0] += c; return a; }
    friend Jet2 operator+(double c, Jet2 a) { a.coeff_[0] += c; return a; }
    friend Jet2 operator-(Jet2 a, double c) { a.coeff_[0] -= c; return a; }
    friend Jet2 operator-(double c, const Jet2& a);
    friend Jet2 operator*(const Jet2& a, const Jet2& b);
    friend Jet2 operator/(const Jet2& a, const Jet2& b);
    friend Jet2 operator/(Jet2 a, double s) { return a *= 1.0 / s; }

    // Polynomial evaluation at offsets (du, dv) from the base point.
    double eval(double du, double dv) const;

    // Partial derivative: order drops by one.  axis 0 = u, axis 1 = v.
    Jet2 partial(int axis) const;

    // Composition of a univariate Taylor series sum_k series[k] * n^k with the
    // nilpotent part n of this jet (constant term removed).
    Jet2 apply_series(const std::array<double, kMaxOrder + 1>& series) const;

    // f2(x(u,v), y(u,v)) where `outer` is expanded at (x.value(), y.value()).
    static Jet2 compose2(const Jet2& outer, const Jet2& x, const Jet2& y);

    Jet2 truncated(int new_order) const;

private:
    static void check_order(int order) {
        if (order < 0 || order > kMaxOrder)
            throw OrderUnderflow("jet order must lie in [0, 4]");
    }
    int order_;
    std::array<double, kMaxCoeffs> coeff_;
};

Jet2 jet_sqrt(const Jet2& x);
Jet2 jet_sin(const Jet2& x);
Jet2 jet_cos(const Jet2& x);
Jet2 jet_pow(const Jet2& x, int k);
Jet2 jet_reciprocal(const Jet2& x);

}  // namespace gm4

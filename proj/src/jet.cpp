#include "gm4/jet.hpp"

#include <cmath>

namespace gm4 {

namespace {
double factorial(int n) {
    static const double table[] = {1, 1, 2, 6, 24};
    return table[n];
}
}  // namespace

Jet2 Jet2::variable(double x0, int axis, int order) {
    Jet2 j(order, x0);
    if (order >= 1) j.coeff_[axis == 0 ? index(1, 0) : index(0, 1)] = 1.0;
    return j;
}

double Jet2::derivative(int i, int j) const {
    return coeff(i, j) * factorial(i) * factorial(j);
}

Jet2 Jet2::operator-() const {
    Jet2 r = *this;
    for (double& c : r.coeff_) c = -c;
    return r;
}

Jet2& Jet2::operator+=(const Jet2& rhs) {
    if (rhs.order_ != order_) throw OrderUnderflow("jet order mismatch in +");
    const int n = coeff_count(order_);
    for (int k = 0; k < n; ++k) coeff_[k] += rhs.coeff_[k];
    return *this;
}

Jet2& Jet2::operator-=(const Jet2& rhs) {
    if (rhs.order_ != order_) throw OrderUnderflow("jet order mismatch in -");
    const int n = coeff_count(order_);
    for (int k = 0; k < n; ++k) coeff_[k] -= rhs.coeff_[k];
    return *this;
}

Jet2& Jet2::operator*=(double s) {
    for (double& c : coeff_) c *= s;
    return *this;
}

Jet2 operator-(double c, const Jet2& a) {
    Jet2 r = -a;
    r.coeff_[0] += c;
    return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
    if (a.order_ != b.order_) throw OrderUnderflow("jet order mismatch in *");
    const int p = a.order_;
    Jet2 r(p);
    for (int d1 = 0; d1 <= p; ++d1)
        for (int j1 = 0; j1 <= d1; ++j1) {
            const double ca = a.coeff_[Jet2::index(d1 - j1, j1)];
            if (ca == 0.0) continue;
            for (int d2 = 0; d2 + d1 <= p; ++d2)
                for (int j2 = 0; j2 <= d2; ++j2) {
                    const double cb = b.coeff_[Jet2::index(d2 - j2, j2)];
                    if (cb == 0.0) continue;
                    r.coeff_[Jet2::index(d1 + d2 - j1 - j2, j1 + j2)] += ca * cb;
                }
        }
    return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
    return a * jet_reciprocal(b);
}

double Jet2::eval(double du, double dv) const {
    double upow[kMaxOrder + 1], vpow[kMaxOrder + 1];
    upow[0] = vpow[0] = 1.0;
    for (int k = 1; k <= order_; ++k) {
        upow[k] = upow[k - 1] * du;
        vpow[k] = vpow[k - 1] * dv;
    }
    double s = 0.0;
    for (int d = order_; d >= 0; --d)
        for (int j = 0; j <= d; ++j) s += coeff_[index(d - j, j)] * upow[d - j] * vpow[j];
    return s;
}

Jet2 Jet2::partial(int axis) const {
    if (order_ < 1) throw OrderUnderflow("cannot differentiate an order-0 jet");
    Jet2 r(order_ - 1);
    for (int d = 0; d <= order_ - 1; ++d)
        for (int j = 0; j <= d; ++j) {
            const int i = d - j;
            if (axis == 0)
                r.coeff_[index(i, j)] = coeff_[index(i + 1, j)] * (i + 1);
            else
                r.coeff_[index(i, j)] = coeff_[index(i, j + 1)] * (j + 1);
        }
    return r;
}

Jet2 Jet2::apply_series(const std::array<double, kMaxOrder + 1>& series) const {
    Jet2 n = *this;
    n.coeff_[0] = 0.0;
    Jet2 r(order_, series[0]);
    Jet2 npow(order_, 1.0);
    for (int k = 1; k <= order_; ++k) {
        npow = npow * n;
        r += npow * series[k];
    }
    return r;
}

Jet2 Jet2::compose2(const Jet2& outer, const Jet2& x, const Jet2& y) {
    if (x.order_ != y.order_) throw OrderUnderflow("jet order mismatch in compose");
    const int p = x.order_;
    Jet2 dx = x, dy = y;
    dx.coeff_[0] = 0.0;
    dy.coeff_[0] = 0.0;
    std::array<Jet2, kMaxOrder + 1> xp, yp;
    xp[0] = Jet2(p, 1.0);
    yp[0] = Jet2(p, 1.0);
    for (int k = 1; k <= p; ++k) {
        xp[k] = xp[k - 1] * dx;
        yp[k] = yp[k - 1] * dy;
    }
    Jet2 r(p);
    const int q = outer.order();
    for (int d = 0; d <= q && d <= p; ++d)
        for (int j = 0; j <= d; ++j) {
            const double c = outer.coeff(d - j, j);
            if (c == 0.0) continue;
            r += (xp[d - j] * yp[j]) * c;
        }
    return r;
}

Jet2 Jet2::truncated(int new_order) const {
    check_order(new_order);
    Jet2 r(new_order);
    for (int d = 0; d <= new_order && d <= order_; ++d)
        for (int j = 0; j <= d; ++j) r.coeff_[index(d - j, j)] = coeff_[index(d - j, j)];
    return r;
}

Jet2 jet_reciprocal(const Jet2& x) {
    const double c = x.value();
    if (c == 0.0) throw DegenerateJet("division by jet with zero constant term");
    const double ic = 1.0 / c;
    // 1/(c+n) = (1/c) sum_k (-n/c)^k
    std::array<double, Jet2::kMaxOrder + 1> s{};
    double t = ic;
    for (int k = 0; k <= Jet2::kMaxOrder; ++k) {
        s[k] = t;
        t *= -ic;
    }
    return x.apply_series(s);
}

Jet2 jet_sqrt(const Jet2& x) {
    const double c = x.value();
    if (!(c > 0.0)) throw DomainError("sqrt of jet with non-positive constant term");
    const double rc = std::sqrt(c);
    // sqrt(c+n) = rc * (1 + w/2 - w^2/8 + w^3/16 - 5 w^4/128), w = n/c
    std::array<double, Jet2::kMaxOrder + 1> s{};
    s[0] = rc;
    s[1] = rc / (2 * c);
    s[2] = -rc / (8 * c * c);
    s[3] = rc / (16 * c * c * c);
    s[4] = -5 * rc / (128 * c * c * c * c);
    return x.apply_series(s);
}

Jet2 jet_sin(const Jet2& x) {
    const double c = x.value();
    const double sc = std::sin(c), cc = std::cos(c);
    std::array<double, Jet2::kMaxOrder + 1> s = {sc, cc, -sc / 2, -cc / 6, sc / 24};
    return x.apply_series(s);
}

Jet2 jet_cos(const Jet2& x) {
    const double c = x.value();
    const double sc = std::sin(c), cc = std::cos(c);
    std::array<double, Jet2::kMaxOrder + 1> s = {cc, -sc, -cc / 2, sc / 6, cc / 24};
    return x.apply_series(s);
}

Jet2 jet_pow(const Jet2& x, int k) {
    if (k < 0) return jet_reciprocal(jet_pow(x, -k));
    Jet2 r(x.order(), 1.0);
    Jet2 base = x;
    int e = k;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

}  // namespace gm4

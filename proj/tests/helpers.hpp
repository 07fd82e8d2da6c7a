// Shared test utilities: finite-difference oracles and fixture loading.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "gm4/surface_io.hpp"

namespace gm4::test {

inline Atlas fixture(const std::string& name) {
    return load_surface(std::string(GM4_FIXTURE_DIR) + "/" + name);
}

// Richardson-extrapolated central difference of the scaled mixed derivative
// d^{i+j} f / du^i dv^j / (i! j!), the quantity a jet coefficient stores.
inline double fd_jet_coeff(const std::function<double(double, double)>& f, double u0, double v0,
                           int i, int j, double h0 = 0.04) {
    auto d_u = [&](const std::function<double(double, double)>& g, int order) {
        std::function<double(double, double, double)> stencil;
        return [g, order](double u, double v, double h) {
            switch (order) {
                case 0: return g(u, v);
                case 1: return (g(u + h, v) - g(u - h, v)) / (2 * h);
                case 2: return (g(u + h, v) - 2 * g(u, v) + g(u - h, v)) / (h * h);
                case 3:
                    return (g(u + 2 * h, v) - 2 * g(u + h, v) + 2 * g(u - h, v) -
                            g(u - 2 * h, v)) /
                           (2 * h * h * h);
                default:
                    return (g(u + 2 * h, v) - 4 * g(u + h, v) + 6 * g(u, v) - 4 * g(u - h, v) +
                            g(u - 2 * h, v)) /
                           (h * h * h * h);
            }
        };
    };
    auto fv = [&](double u, double v, double h) {
        auto g = [&](double uu, double vv) { return f(uu, vv); };
        switch (j) {
            case 0: return d_u(g, i)(u, v, h);
            case 1: {
                auto gv = [&](double uu, double vv) {
                    return (f(uu, vv + h) - f(uu, vv - h)) / (2 * h);
                };
                return d_u(gv, i)(u, v, h);
            }
            case 2: {
                auto gv = [&](double uu, double vv) {
                    return (f(uu, vv + h) - 2 * f(uu, vv) + f(uu, vv - h)) / (h * h);
                };
                return d_u(gv, i)(u, v, h);
            }
            case 3: {
                auto gv = [&](double uu, double vv) {
                    return (f(uu, vv + 2 * h) - 2 * f(uu, vv + h) + 2 * f(uu, vv - h) -
                            f(uu, vv - 2 * h)) /
                           (2 * h * h * h);
                };
                return d_u(gv, i)(u, v, h);
            }
            default: {
                auto gv = [&](double uu, double vv) {
                    return (f(uu, vv + 2 * h) - 4 * f(uu, vv + h) + 6 * f(uu, vv) -
                            4 * f(uu, vv - h) + f(uu, vv - 2 * h)) /
                           (h * h * h * h);
                };
                return d_u(gv, i)(u, v, h);
            }
        }
    };
    // Two Richardson levels on the O(h^2) stencils.
    const double a1 = fv(u0, v0, h0);
    const double a2 = fv(u0, v0, h0 / 2);
    const double a3 = fv(u0, v0, h0 / 4);
    const double r1 = (4 * a2 - a1) / 3;
    const double r2 = (4 * a3 - a2) / 3;
    const double q = (16 * r2 - r1) / 15;
    double fact = 1;
    for (int k = 2; k <= i; ++k) fact *= k;
    for (int k = 2; k <= j; ++k) fact *= k;
    return q / fact;
}

inline std::mt19937& rng() {
    static std::mt19937 gen(20240817);
    return gen;
}

inline double uniform(double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    return d(rng());
}

}  // namespace gm4::test

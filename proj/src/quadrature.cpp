#include "gm4/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "gm4/parallel.hpp"

namespace gm4 {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

struct CellSampler {
    const Atlas& atlas;
    int chart_idx;
    int n_fields;
    const FieldFn& field;

    // Midpoint sample of one (sub)cell; false if the center is outside.
    bool sample(double uc, double vc, double area_uv, double* acc) const {
        const Chart& chart = atlas.chart(chart_idx);
        if (!chart.domain.contains(uc, vc, atlas.params)) return false;
        InvariantSample s;
        try {
            s = invariants_at(chart, uc, vc, atlas.params, 1);
        } catch (const std::runtime_error&) {
            return false;
        }
        double vals[8];
        field(chart_idx, uc, vc, s, vals);
        // The area element is a positive measure; orientation lives in the
        // integrands (J, KN, ...) which are computed in the oriented frame.
        for (int k = 0; k < n_fields; ++k) acc[k] += vals[k] * std::fabs(s.area_element) * area_uv;
        return true;
    }

    // Adaptive refinement against the implicit domain boundary: interior
    // cells collapse to one midpoint sample, straddling cells subdivide until
    // the depth budget runs out.  The leftover unsampled strip is O(4^-depth)
    // wide, which the level extrapolation then removes.
    void refine(double u0, double v0, double du, double dv, int depth, double* acc,
                long* count) const {
        const Chart& chart = atlas.chart(chart_idx);
        const double uc = u0 + du / 2, vc = v0 + dv / 2;
        double corner_min = 1e300, corner_max = -1e300, span = 0.0;
        const double c_center = chart.domain.clearance(uc, vc, atlas.params);
        for (int k = 0; k < 4; ++k) {
            const double cc = chart.domain.clearance(u0 + (k & 1 ? du : 0.0),
                                                     v0 + (k & 2 ? dv : 0.0), atlas.params);
            corner_min = std::min(corner_min, cc);
            corner_max = std::max(corner_max, cc);
            span = std::max(span, std::fabs(cc - c_center));
        }
        if (corner_min > 0 && c_center > 2.5 * span) {
            if (sample(uc, vc, du * dv, acc)) ++*count;
            return;
        }
        if (corner_max < 0 && c_center < -2.5 * span) return;  // fully outside
        if (depth == 0) {
            if (c_center > 0 && sample(uc, vc, du * dv, acc)) ++*count;
            return;
        }
        const double hu = du / 2, hv = dv / 2;
        refine(u0, v0, hu, hv, depth - 1, acc, count);
        refine(u0 + hu, v0, hu, hv, depth - 1, acc, count);
        refine(u0, v0 + hv, hu, hv, depth - 1, acc, count);
        refine(u0 + hu, v0 + hv, hu, hv, depth - 1, acc, count);
    }
};

struct LevelSums {
    std::vector<double> value;
    long samples = 0;
};

LevelSums integrate_level(const Atlas& atlas, int n_fields, const FieldFn& field, int grid) {
    LevelSums total;
    total.value.assign(static_cast<size_t>(n_fields), 0.0);
    for (int c = 0; c < static_cast<int>(atlas.charts.size()); ++c) {
        const Chart& chart = atlas.chart(c);
        const double u0 = chart.domain.u0, u1 = chart.domain.u1;
        const double v0 = chart.domain.v0, v1 = chart.domain.v1;
        const double du = (u1 - u0) / grid, dv = (v1 - v0) / grid;
        const CellSampler sampler{atlas, c, n_fields, field};

        std::vector<std::vector<double>> row_acc(static_cast<size_t>(grid));
        std::vector<long> row_count(static_cast<size_t>(grid), 0);
        parallel_for(grid, [&](int j) {
            std::vector<double>& acc = row_acc[static_cast<size_t>(j)];
            acc.assign(static_cast<size_t>(n_fields), 0.0);
            long cnt = 0;
            const double vb = v0 + j * dv;
            for (int i = 0; i < grid; ++i) {
                const double ub = u0 + i * du;
                if (chart.domain.kind == Domain::Kind::Rect) {
                    if (sampler.sample(ub + du / 2, vb + dv / 2, du * dv, acc.data())) ++cnt;
                } else {
                    sampler.refine(ub, vb, du, dv, 6, acc.data(), &cnt);
                }
            }
            row_count[static_cast<size_t>(j)] = cnt;
        });
        for (int k = 0; k < n_fields; ++k) {
            std::vector<double> terms(static_cast<size_t>(grid));
            for (int j = 0; j < grid; ++j) terms[static_cast<size_t>(j)] = row_acc[static_cast<size_t>(j)][static_cast<size_t>(k)];
            total.value[static_cast<size_t>(k)] += pairwise_sum(terms);
        }
        for (long cnt : row_count) total.samples += cnt;
    }
    return total;
}

}  // namespace

std::vector<QuadratureResult> integrate_fields(const Atlas& atlas, int n_fields,
                                               const FieldFn& field, int finest_grid) {
    const int g3 = std::max(finest_grid, 32);
    const int g2 = g3 / 2, g1 = g3 / 4;
    const LevelSums s1 = integrate_level(atlas, n_fields, field, g1);
    const LevelSums s2 = integrate_level(atlas, n_fields, field, g2);
    const LevelSums s3 = integrate_level(atlas, n_fields, field, g3);

    std::vector<QuadratureResult> out(static_cast<size_t>(n_fields));
    for (int k = 0; k < n_fields; ++k) {
        const double I1 = s1.value[static_cast<size_t>(k)];
        const double I2 = s2.value[static_cast<size_t>(k)];
        const double I3 = s3.value[static_cast<size_t>(k)];
        const double D1 = I2 - I1, D2 = I3 - I2;
        QuadratureResult r;
        r.samples = s3.samples;
        const double scale = 1.0 + std::fabs(I3);
        if (std::fabs(D2) < 1e-12 * scale) {
            r.value = I3;
            r.estimated_error = std::fabs(D2) + 1e-14 * scale;
        } else {
            const double ratio = D1 / D2;
            if (std::fabs(D2) >= std::fabs(D1) && std::fabs(D2) > 1e-2 * scale)
                throw NonConvergent("quadrature refinement is not converging (ratio " +
                                    std::to_string(ratio) + ")");
            if (ratio > 1.2) {
                const double p = std::min(4.0, std::max(0.25, std::log2(ratio)));
                const double extrap = I3 + D2 / (std::pow(2.0, p) - 1.0);
                r.value = extrap;
                r.estimated_error = std::max(std::fabs(extrap - I3), 1e-14 * scale);
            } else {
                // Oscillating small differences: no extrapolation.
                r.value = I3;
                r.estimated_error = std::fabs(D2) + std::fabs(D1);
            }
        }
        out[static_cast<size_t>(k)] = r;
    }
    return out;
}

QuadratureResult integrate_surface(const Atlas& atlas,
                                   const std::function<double(const InvariantSample&)>& field,
                                   int finest_grid) {
    auto res = integrate_fields(
        atlas, 1,
        [&](int, double, double, const InvariantSample& s, double* out) { out[0] = field(s); },
        finest_grid);
    return res[0];
}

DegreeResult mapping_degree(const Atlas& atlas, int comp, int finest_grid) {
    atlas.require_closed();
    const QuadratureResult q = integrate_surface(
        atlas, [comp](const InvariantSample& s) { return comp == 1 ? s.Jg1 : s.Jg2; },
        finest_grid);
    DegreeResult d;
    d.raw = q.value / kTwoPi;
    d.rounded = static_cast<int>(std::lround(d.raw));
    d.integer_ok = std::fabs(d.raw - d.rounded) < 0.05;
    d.estimated_error = q.estimated_error / kTwoPi;
    return d;
}

double geodesic_curvature(const Vec3& c, const Vec3& c1, const Vec3& c2) {
    const double R = c.norm();
    const double speed = c1.norm();
    const double det = c.dot(c1.cross(c2));
    return det / (R * speed * speed * speed);
}

namespace {

struct CurveSample {
    Vec3 c, c1, c2;      // position and derivatives w.r.t. chart arclength
    double kappa_g;
    double seg_len_img;  // image length to the next sample
    double s_img;        // cumulative image arclength
};

}  // namespace

KgIntegral curve_integral_kg(const Atlas& atlas, const TraceResult& trace, int comp) {
    KgIntegral result;
    for (const auto& curve : trace.curves) {
        const int n = static_cast<int>(curve.pts.size());
        if (n < 8) continue;
        ++result.curves;

        std::vector<CurveSample> samples(static_cast<size_t>(n));
        parallel_for(n, [&](int i) {
            const CurvePoint& p = curve.pts[i];
            const Chart& chart = atlas.chart(p.chart);
            const FrameJets f = darboux_frame(chart, p.u, p.v, 3, atlas.params);
            const ConnectionForms cf = connection_forms(f);
            const InvariantJets ij = invariant_jets(cf);
            const Jet2& s = comp == 1 ? ij.sum : ij.diff;

            // Unit tangent field of the implicit curve as an order-1 jet.
            const Jet2 gx = s.partial(0).truncated(1), gy = s.partial(1).truncated(1);
            const Jet2 gn = jet_sqrt(gx * gx + gy * gy);
            const Jet2 inv = jet_reciprocal(gn);
            Jet2 tx = -gy * inv, ty = gx * inv;
            double sgn = 1.0;
            if (Vec2{tx.value(), ty.value()}.dot(p.tangent) < 0) sgn = -1.0;
            const Vec2 tau{sgn * tx.value(), sgn * ty.value()};
            // Curvature vector of the parameter curve: (grad tau) tau, which is
            // invariant under the sign flip of tau.
            const Vec2 gamma2{
                tx.coeff(1, 0) * tx.value() + tx.coeff(0, 1) * ty.value(),
                ty.coeff(1, 0) * tx.value() + ty.coeff(0, 1) * ty.value()};

            const auto bj = component_jets(f, comp);
            CurveSample cs;
            cs.c = {bj[0].value(), bj[1].value(), bj[2].value()};
            Vec3 bu{bj[0].coeff(1, 0), bj[1].coeff(1, 0), bj[2].coeff(1, 0)};
            Vec3 bv{bj[0].coeff(0, 1), bj[1].coeff(0, 1), bj[2].coeff(0, 1)};
            cs.c1 = bu * tau.x + bv * tau.y;
            Vec3 c2;
            const double Hxx[3] = {2 * bj[0].coeff(2, 0), 2 * bj[1].coeff(2, 0), 2 * bj[2].coeff(2, 0)};
            const double Hxy[3] = {bj[0].coeff(1, 1), bj[1].coeff(1, 1), bj[2].coeff(1, 1)};
            const double Hyy[3] = {2 * bj[0].coeff(0, 2), 2 * bj[1].coeff(0, 2), 2 * bj[2].coeff(0, 2)};
            const double quad[3] = {
                Hxx[0] * tau.x * tau.x + 2 * Hxy[0] * tau.x * tau.y + Hyy[0] * tau.y * tau.y,
                Hxx[1] * tau.x * tau.x + 2 * Hxy[1] * tau.x * tau.y + Hyy[1] * tau.y * tau.y,
                Hxx[2] * tau.x * tau.x + 2 * Hxy[2] * tau.x * tau.y + Hyy[2] * tau.y * tau.y};
            c2 = Vec3{quad[0], quad[1], quad[2]} + bu * gamma2.x + bv * gamma2.y;
            cs.c2 = c2;
            cs.kappa_g = geodesic_curvature(cs.c, cs.c1, cs.c2);
            samples[static_cast<size_t>(i)] = cs;
        });

        // Image arclength accumulation (chord lengths on the sphere).
        double s_acc = 0.0;
        for (int i = 0; i < n; ++i) {
            samples[static_cast<size_t>(i)].s_img = s_acc;
            const int j = (i + 1) % n;
            if (j == 0 && !curve.closed) break;
            const double seg = (samples[static_cast<size_t>(j)].c - samples[static_cast<size_t>(i)].c).norm();
            samples[static_cast<size_t>(i)].seg_len_img = seg;
            s_acc += seg;
        }
        const double total_len = s_acc;
        result.image_length += total_len;

        // Traversal orientation: the component image must lie to the left of
        // the image curve.  Probe at the most transverse fold sample.
        int best = 0;
        for (int i = 0; i < n; ++i)
            if (std::fabs(curve.pts[static_cast<size_t>(i)].t) >
                std::fabs(curve.pts[static_cast<size_t>(best)].t))
                best = i;
        double orient = 1.0;
        {
            const CurvePoint& p = curve.pts[static_cast<size_t>(best)];
            const CurveSample& cs = samples[static_cast<size_t>(best)];
            const Chart& chart = atlas.chart(p.chart);
            const Vec3 nrm = cs.c.normalized();
            const Vec3 dir = cs.c1.normalized();
            const Vec3 left = nrm.cross(dir);
            double vote = 0.0;
            for (double eps : {2e-3, 5e-3, 1e-2}) {
                for (double sgn : {1.0, -1.0}) {
                    const double qu = p.u + sgn * eps * p.kernel.x;
                    const double qv = p.v + sgn * eps * p.kernel.y;
                    if (!chart.domain.contains(qu, qv, atlas.params)) continue;
                    try {
                        const FrameJets fq = darboux_frame(chart, qu, qv, 1, atlas.params);
                        const auto bq = component_jets(fq, comp);
                        const Vec3 off = Vec3{bq[0].value(), bq[1].value(), bq[2].value()} - cs.c;
                        vote += off.dot(left);
                    } catch (const std::runtime_error&) {
                    }
                }
            }
            if (vote < 0) orient = -1.0;
        }

        // Integrate kappa_g dtau = (kappa_g |c'|) dsigma in the chart
        // arclength sigma.  The image arclength degenerates quadratically at
        // a cusp and kappa_g blows up like its inverse square root, but the
        // product kappa_g |c'| stays bounded through the cusp, so plain
        // composite quadrature in sigma converges.  The image-arclength form
        // of the integrand is kept for the near-cusp diagnostic.
        result.cusp_shells += static_cast<int>(curve.cusps.size());
        std::vector<double> terms;
        double near_cusp_mass = 0.0;
        const int m = curve.closed ? n : n - 1;
        for (int i = 0; i < m; ++i) {
            const int j = (i + 1) % n;
            const CurvePoint& pa = curve.pts[static_cast<size_t>(i)];
            const CurvePoint& pb = curve.pts[static_cast<size_t>(j)];
            if (pa.chart != pb.chart) {
                // Chart transition: fall back to the image-arclength segment.
                const CurveSample& A = samples[static_cast<size_t>(i)];
                const CurveSample& B = samples[static_cast<size_t>(j)];
                terms.push_back(0.5 * (A.kappa_g + B.kappa_g) * A.seg_len_img);
                continue;
            }
            const double dsigma = std::hypot(pb.u - pa.u, pb.v - pa.v);
            const CurveSample& A = samples[static_cast<size_t>(i)];
            const CurveSample& B = samples[static_cast<size_t>(j)];
            const double term =
                0.5 * (A.kappa_g * A.c1.norm() + B.kappa_g * B.c1.norm()) * dsigma;
            terms.push_back(term);
            for (const auto& c : curve.cusps) {
                int d = std::abs(i - c.segment_index);
                if (curve.closed) d = std::min(d, n - d);
                if (d <= 4) near_cusp_mass += std::fabs(term);
            }
        }
        result.extrapolation_span = near_cusp_mass;
        result.value += orient * pairwise_sum(terms);
    }
    return result;
}

}  // namespace gm4

#include "gm4/singular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <unordered_map>

#include "gm4/parallel.hpp"

namespace gm4 {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double field_sign_value(const InvariantSample& s, int comp) {
    return comp == 1 ? s.K + s.KN : s.K - s.KN;
}

struct FieldGrid {
    int n = 0;
    double u0, u1, v0, v1;
    std::vector<double> s;  // K + (-1)^{comp+1} KN, NaN outside the domain
    double du() const { return (u1 - u0) / (n - 1); }
    double dv() const { return (v1 - v0) / (n - 1); }
    double at(int i, int j) const { return s[static_cast<size_t>(j) * n + i]; }
};

void domain_box(const Chart& chart, double& u0, double& u1, double& v0, double& v1) {
    u0 = chart.domain.u0;
    u1 = chart.domain.u1;
    v0 = chart.domain.v0;
    v1 = chart.domain.v1;
}

FieldGrid build_field_grid(const Atlas& atlas, int chart_idx, int comp, int n) {
    const Chart& chart = atlas.chart(chart_idx);
    FieldGrid g;
    g.n = n;
    domain_box(chart, g.u0, g.u1, g.v0, g.v1);
    g.s.assign(static_cast<size_t>(n) * n, kNaN);
    parallel_for(n, [&](int j) {
        const double v = g.v0 + (g.v1 - g.v0) * j / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double u = g.u0 + (g.u1 - g.u0) * i / (n - 1);
            if (!chart.domain.contains(u, v, atlas.params)) continue;
            try {
                const InvariantSample s = invariants_at(chart, u, v, atlas.params, 1);
                g.s[static_cast<size_t>(j) * n + i] = field_sign_value(s, comp);
            } catch (const std::runtime_error&) {
            }
        }
    });
    return g;
}

// ---------------------------------------------------------------------------
// Marching squares: segments keyed by the grid edges they cross, then chained
// into polylines.

struct MSPoint {
    int64_t edge_key;
    double u, v;
};

int64_t edge_key(int i, int j, int n, bool horizontal) {
    return ((static_cast<int64_t>(j) * n + i) << 1) | (horizontal ? 0 : 1);
}

struct Segment {
    MSPoint a, b;
};

void marching_squares(const Atlas& atlas, int chart_idx, int comp, const FieldGrid& g,
                      std::vector<Segment>& out) {
    const Chart& chart = atlas.chart(chart_idx);
    const int n = g.n;
    const double du = g.du(), dv = g.dv();
    auto interp = [&](double ua, double va, double fa, double ub, double vb, double fb) {
        const double t = fa / (fa - fb);
        return std::pair<double, double>{ua + t * (ub - ua), va + t * (vb - va)};
    };
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i) {
            const double f00 = g.at(i, j), f10 = g.at(i + 1, j);
            const double f11 = g.at(i + 1, j + 1), f01 = g.at(i, j + 1);
            if (std::isnan(f00) || std::isnan(f10) || std::isnan(f11) || std::isnan(f01)) continue;
            const double u_a = g.u0 + i * du, v_a = g.v0 + j * dv;
            int mask = 0;
            if (f00 > 0) mask |= 1;
            if (f10 > 0) mask |= 2;
            if (f11 > 0) mask |= 4;
            if (f01 > 0) mask |= 8;
            if (mask == 0 || mask == 15) continue;

            MSPoint bottom{edge_key(i, j, n, true), 0, 0};
            MSPoint top{edge_key(i, j + 1, n, true), 0, 0};
            MSPoint left{edge_key(i, j, n, false), 0, 0};
            MSPoint right{edge_key(i + 1, j, n, false), 0, 0};
            if ((f00 > 0) != (f10 > 0))
                std::tie(bottom.u, bottom.v) = interp(u_a, v_a, f00, u_a + du, v_a, f10);
            if ((f01 > 0) != (f11 > 0))
                std::tie(top.u, top.v) = interp(u_a, v_a + dv, f01, u_a + du, v_a + dv, f11);
            if ((f00 > 0) != (f01 > 0))
                std::tie(left.u, left.v) = interp(u_a, v_a, f00, u_a, v_a + dv, f01);
            if ((f10 > 0) != (f11 > 0))
                std::tie(right.u, right.v) = interp(u_a + du, v_a, f10, u_a + du, v_a + dv, f11);

            switch (mask) {
                case 1: case 14: out.push_back({left, bottom}); break;
                case 2: case 13: out.push_back({bottom, right}); break;
                case 4: case 11: out.push_back({right, top}); break;
                case 8: case 7: out.push_back({top, left}); break;
                case 3: case 12: out.push_back({left, right}); break;
                case 6: case 9: out.push_back({bottom, top}); break;
                case 5: case 10: {
                    // Saddle: disambiguate with the center value.
                    double fc;
                    try {
                        fc = field_sign_value(
                            invariants_at(chart, u_a + du / 2, v_a + dv / 2, atlas.params, 1), comp);
                    } catch (const std::runtime_error&) {
                        fc = 0.0;
                    }
                    const bool connect_pos = (fc > 0) == (mask == 5);
                    if (connect_pos == (mask == 5)) {
                        if ((fc > 0) == (f00 > 0)) {
                            out.push_back({left, top});
                            out.push_back({bottom, right});
                        } else {
                            out.push_back({left, bottom});
                            out.push_back({right, top});
                        }
                    }
                    break;
                }
                default: break;
            }
        }
}

std::vector<std::vector<MSPoint>> chain_segments(std::vector<Segment>& segs) {
    std::unordered_map<int64_t, std::vector<int>> by_edge;
    for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
        by_edge[segs[s].a.edge_key].push_back(s);
        by_edge[segs[s].b.edge_key].push_back(s);
    }
    std::vector<bool> used(segs.size(), false);
    std::vector<std::vector<MSPoint>> chains;
    for (int s0 = 0; s0 < static_cast<int>(segs.size()); ++s0) {
        if (used[s0]) continue;
        std::vector<MSPoint> chain = {segs[s0].a, segs[s0].b};
        used[s0] = true;
        // Extend forwards then backwards.
        for (int dir = 0; dir < 2; ++dir) {
            for (;;) {
                const MSPoint& tip = dir == 0 ? chain.back() : chain.front();
                int next = -1;
                for (int cand : by_edge[tip.edge_key])
                    if (!used[cand]) { next = cand; break; }
                if (next < 0) break;
                used[next] = true;
                const Segment& sg = segs[next];
                const MSPoint& add = (sg.a.edge_key == tip.edge_key) ? sg.b : sg.a;
                if (dir == 0) chain.push_back(add);
                else chain.insert(chain.begin(), add);
            }
        }
        chains.push_back(std::move(chain));
    }
    return chains;
}

// ---------------------------------------------------------------------------
// Newton refinement onto the zero set with analytic gradients.

struct FieldJetEval {
    double value = kNaN;
    Vec2 grad;
    double scale = 1.0;
    bool ok = false;
};

FieldJetEval eval_field_jet(const Atlas& atlas, int chart_idx, int comp, double u, double v,
                            int order = 1) {
    FieldJetEval r;
    const Chart& chart = atlas.chart(chart_idx);
    if (!chart.domain.contains(u, v, atlas.params)) return r;
    try {
        const FrameJets f = darboux_frame(chart, u, v, order + 1, atlas.params);
        const ConnectionForms cf = connection_forms(f);
        const InvariantJets ij = invariant_jets(cf);
        const Jet2& s = comp == 1 ? ij.sum : ij.diff;
        r.value = s.value();
        r.grad = {s.coeff(1, 0), s.coeff(0, 1)};
        r.scale = 1.0 + std::fabs(s.value()) + r.grad.norm();
        r.ok = true;
    } catch (const std::runtime_error&) {
    }
    return r;
}

// Projects a seed onto {s = 0}; returns false when the gradient is too small.
// The seed is only overwritten with in-domain iterates.
bool newton_project(const Atlas& atlas, int chart_idx, int comp, double& u, double& v,
                    double step_cap, bool* grad_vanished = nullptr) {
    double cu = u, cv = v;
    for (int it = 0; it < 30; ++it) {
        const FieldJetEval e = eval_field_jet(atlas, chart_idx, comp, cu, cv);
        if (!e.ok) return false;
        u = cu;
        v = cv;
        if (std::fabs(e.value) < 1e-10 * e.scale) return true;
        const double g2 = e.grad.dot(e.grad);
        if (g2 < 1e-12 * e.scale * e.scale) {
            if (grad_vanished) *grad_vanished = true;
            return false;
        }
        double su = -e.value * e.grad.x / g2;
        double sv = -e.value * e.grad.y / g2;
        const double sn = std::hypot(su, sv);
        if (sn > step_cap) {
            su *= step_cap / sn;
            sv *= step_cap / sn;
        }
        cu += su;
        cv += sv;
    }
    const FieldJetEval e = eval_field_jet(atlas, chart_idx, comp, cu, cv);
    if (e.ok && std::fabs(e.value) < 1e-8 * e.scale) {
        u = cu;
        v = cv;
        return true;
    }
    return false;
}

struct AmbientData {
    Vec4 pos;
    Vec4 xu, xv;
    Vec4 e1, e2;
};

AmbientData ambient_at(const Atlas& atlas, int chart_idx, double u, double v) {
    const Chart& chart = atlas.chart(chart_idx);
    const FrameJets f = darboux_frame(chart, u, v, 1, atlas.params);
    AmbientData a;
    for (int c = 0; c < 4; ++c) {
        a.pos[c] = f.x[c].value();
        a.xu[c] = f.x[c].partial(0).value();
        a.xv[c] = f.x[c].partial(1).value();
        a.e1[c] = f.e[0][c].value();
        a.e2[c] = f.e[1][c].value();
    }
    return a;
}

Vec4 push_forward(const AmbientData& a, const Vec2& w) {
    Vec4 out;
    for (int c = 0; c < 4; ++c) out[c] = w.x * a.xu[c] + w.y * a.xv[c];
    const double n = norm4(out);
    if (n > 0)
        for (int c = 0; c < 4; ++c) out[c] /= n;
    return out;
}

// Tangency function: the kernel/tangent determinant taken in the orthonormal
// frame basis, so its sign is orientation-consistent across charts.
double tangency_value(const AmbientData& a, const Vec4& kernel_amb, const Vec4& tangent_amb) {
    const double k1 = dot4(kernel_amb, a.e1), k2 = dot4(kernel_amb, a.e2);
    const double t1 = dot4(tangent_amb, a.e1), t2 = dot4(tangent_amb, a.e2);
    return k1 * t2 - k2 * t1;
}

}  // namespace

// ---------------------------------------------------------------------------

TraceResult trace_singular_set(const Atlas& atlas, int comp, int grid) {
    TraceResult result;

    // Field scale over all charts; an identically vanishing field (flat
    // surfaces in the sense of this component) cannot be contoured.
    double max_abs = 0.0, max_grad = 0.0;
    std::vector<FieldGrid> grids;
    for (int c = 0; c < static_cast<int>(atlas.charts.size()); ++c) {
        grids.push_back(build_field_grid(atlas, c, comp, grid));
        for (double x : grids.back().s)
            if (!std::isnan(x)) max_abs = std::max(max_abs, std::fabs(x));
    }
    result.field_scale = max_abs;
    if (max_abs < 1e-9) {
        const int probe = 16;
        for (int c = 0; c < static_cast<int>(atlas.charts.size()); ++c) {
            const FieldGrid& g = grids[c];
            for (int j = 0; j < probe; ++j)
                for (int i = 0; i < probe; ++i) {
                    const double u = g.u0 + (g.u1 - g.u0) * (i + 0.5) / probe;
                    const double v = g.v0 + (g.v1 - g.v0) * (j + 0.5) / probe;
                    const FieldJetEval e = eval_field_jet(atlas, c, comp, u, v);
                    if (e.ok) max_grad = std::max(max_grad, e.grad.norm());
                }
        }
        if (max_grad < 1e-8) {
            result.field_degenerate = true;
            return result;
        }
    }

    // Per-chart polylines.
    struct RawCurve {
        int chart;
        std::vector<CurvePoint> pts;
        bool closed = false;
    };
    std::vector<RawCurve> raw;
    for (int c = 0; c < static_cast<int>(atlas.charts.size()); ++c) {
        std::vector<Segment> segs;
        marching_squares(atlas, c, comp, grids[c], segs);
        auto chains = chain_segments(segs);
        const double cell = std::max(grids[c].du(), grids[c].dv());
        for (auto& ch : chains) {
            if (ch.size() < 3) continue;
            RawCurve rc;
            rc.chart = c;
            rc.closed = ch.front().edge_key == ch.back().edge_key;
            if (rc.closed) ch.pop_back();
            std::vector<int> refined(ch.size(), 0);
            std::vector<CurvePoint> pts(ch.size());
            parallel_for(static_cast<int>(ch.size()), [&](int i) {
                double u = ch[i].u, v = ch[i].v;
                bool gv = false;
                if (newton_project(atlas, c, comp, u, v, 2 * cell, &gv)) {
                    pts[i].chart = c;
                    pts[i].u = u;
                    pts[i].v = v;
                    refined[i] = 1;
                } else {
                    refined[i] = gv ? -1 : 0;
                }
            });
            for (int i = 0; i < static_cast<int>(ch.size()); ++i) {
                if (refined[i] < 0) ++result.gradient_violations;
                if (refined[i] == 1) rc.pts.push_back(pts[i]);
            }
            if (rc.pts.size() >= 3) raw.push_back(std::move(rc));
        }
    }

    // Extend open polylines toward the domain boundary so cross-chart ends
    // nearly meet in R^4.
    auto extend_end = [&](RawCurve& rc, bool front) {
        const int chart_idx = rc.chart;
        const Chart& chart = atlas.chart(chart_idx);
        const FieldGrid& g = grids[chart_idx];
        const double cell = std::max(g.du(), g.dv());
        for (int step = 0; step < 400; ++step) {
            const CurvePoint& tip = front ? rc.pts.front() : rc.pts[rc.pts.size() - 1];
            const CurvePoint& prev = front ? rc.pts[1] : rc.pts[rc.pts.size() - 2];
            const double clr = chart.domain.clearance(tip.u, tip.v, atlas.params);
            if (clr < 1e-6) break;
            Vec2 dir{tip.u - prev.u, tip.v - prev.v};
            if (dir.norm() == 0) break;
            dir = dir.normalized();
            const double h = std::min(cell, std::max(0.05 * clr, 1e-7));
            double u = tip.u + dir.x * h, v = tip.v + dir.y * h;
            if (!chart.domain.contains(u, v, atlas.params)) break;
            if (!newton_project(atlas, chart_idx, comp, u, v, h)) break;
            CurvePoint np;
            np.chart = chart_idx;
            np.u = u;
            np.v = v;
            // Guard against stalling.
            if (std::hypot(u - tip.u, v - tip.v) < 1e-12) break;
            if (front) rc.pts.insert(rc.pts.begin(), np);
            else rc.pts.push_back(np);
        }
    };
    for (auto& rc : raw)
        if (!rc.closed) {
            extend_end(rc, true);
            extend_end(rc, false);
        }

    // Join open polylines whose ends meet in R^4 (across or within charts).
    // Ends that stop at an unglued domain boundary of an open surface are
    // never joined; ends of closed surfaces meet across glue edges.
    auto end_pos = [&](const RawCurve& rc, bool front) {
        const CurvePoint& p = front ? rc.pts.front() : rc.pts.back();
        return ambient_at(atlas, p.chart, p.u, p.v).pos;
    };
    auto end_joinable = [&](const RawCurve& rc, bool front) {
        if (atlas.closed) return true;
        const CurvePoint& p = front ? rc.pts.front() : rc.pts.back();
        const Chart& chart = atlas.chart(p.chart);
        const FieldGrid& g = grids[static_cast<size_t>(p.chart)];
        const double cell = std::max(g.du(), g.dv());
        return chart.domain.clearance(p.u, p.v, atlas.params) > 5 * cell;
    };
    const double join_tol = 5e-2;
    bool merged = true;
    while (merged) {
        merged = false;
        for (size_t i = 0; i < raw.size() && !merged; ++i) {
            if (raw[i].closed) continue;
            for (int fi = 0; fi < 2 && !merged; ++fi) {
                if (!end_joinable(raw[i], fi == 0)) continue;
                const Vec4 pi = end_pos(raw[i], fi == 0);
                // Closing the same curve?
                if (end_joinable(raw[i], fi != 0)) {
                    const Vec4 po = end_pos(raw[i], fi != 0);
                    Vec4 d;
                    for (int c = 0; c < 4; ++c) d[c] = pi[c] - po[c];
                    if (raw[i].pts.size() > 8 && norm4(d) < join_tol) {
                        raw[i].closed = true;
                        merged = true;
                        break;
                    }
                }
                for (size_t j = i + 1; j < raw.size() && !merged; ++j) {
                    if (raw[j].closed) continue;
                    for (int fj = 0; fj < 2; ++fj) {
                        if (!end_joinable(raw[j], fj == 0)) continue;
                        const Vec4 pj = end_pos(raw[j], fj == 0);
                        Vec4 d;
                        for (int c = 0; c < 4; ++c) d[c] = pi[c] - pj[c];
                        if (norm4(d) > join_tol) continue;
                        // Concatenate j onto i.
                        std::vector<CurvePoint> a = raw[i].pts, b = raw[j].pts;
                        if (fi == 0) std::reverse(a.begin(), a.end());
                        if (fj != 0) std::reverse(b.begin(), b.end());
                        a.insert(a.end(), b.begin(), b.end());
                        raw[i].pts = std::move(a);
                        raw.erase(raw.begin() + static_cast<long>(j));
                        merged = true;
                        break;
                    }
                }
            }
        }
    }

    for (auto& rc : raw) {
        SingularCurve sc;
        sc.comp = comp;
        sc.closed = rc.closed;
        sc.pts = std::move(rc.pts);
        // Only strictly evaluable points survive; boundary grazers from the
        // extension step are dropped.
        std::erase_if(sc.pts, [&](const CurvePoint& p) {
            return !atlas.chart(p.chart).domain.contains(p.u, p.v, atlas.params);
        });
        if (sc.pts.size() >= 3) result.curves.push_back(std::move(sc));
    }
    return result;
}

G1Report check_G1(const Atlas& atlas, const TraceResult& trace, int comp) {
    G1Report rep;
    if (trace.field_degenerate) {
        rep.gradient_vanishes = true;
        rep.pass = false;
        return rep;
    }
    if (trace.curves.empty()) {
        rep.vacuous = true;
        rep.pass = true;
        return rep;
    }
    double min_grad = std::numeric_limits<double>::infinity();
    for (const auto& curve : trace.curves)
        for (const auto& p : curve.pts) {
            const FieldJetEval e = eval_field_jet(atlas, p.chart, comp, p.u, p.v);
            if (!e.ok) continue;
            min_grad = std::min(min_grad, e.grad.norm() / e.scale);
        }
    rep.min_grad = min_grad;
    rep.gradient_vanishes = trace.gradient_violations > 0 || min_grad < 1e-6;
    rep.pass = !rep.gradient_vanishes;
    return rep;
}

void classify_points(const Atlas& atlas, TraceResult& trace, int comp) {
    if (trace.field_degenerate) return;
    for (size_t ci = 0; ci < trace.curves.size(); ++ci) {
        SingularCurve& curve = trace.curves[ci];
        const int n = static_cast<int>(curve.pts.size());
        if (n < 3) continue;

        Vec4 prev_kernel{};
        bool have_prev = false;
        for (int i = 0; i < n; ++i) {
            CurvePoint& p = curve.pts[i];
            const Chart& chart = atlas.chart(p.chart);
            FrameJets f;
            try {
                f = darboux_frame(chart, p.u, p.v, 1, atlas.params);
            } catch (const std::runtime_error&) {
                p.t = 0;
                continue;
            }
            const ConnectionForms cf = connection_forms(f);
            const KernelResult kr = kernel_direction(dgauss(cf, comp), 1e-6);
            p.kernel = kr.rank == KernelResult::Rank::Line ? kr.dir : Vec2{0, 0};

            // Traversal tangent from same-chart neighbors.
            const CurvePoint* nb_prev = nullptr;
            const CurvePoint* nb_next = nullptr;
            for (int k = i - 1; k >= (curve.closed ? i - n : 0); --k) {
                const CurvePoint& q = curve.pts[((k % n) + n) % n];
                if (q.chart == p.chart) { nb_prev = &q; break; }
                break;
            }
            for (int k = i + 1; k <= (curve.closed ? i + n : n - 1); ++k) {
                const CurvePoint& q = curve.pts[k % n];
                if (q.chart == p.chart) { nb_next = &q; break; }
                break;
            }
            Vec2 chord{0, 0};
            if (nb_prev && nb_next) chord = {nb_next->u - nb_prev->u, nb_next->v - nb_prev->v};
            else if (nb_next) chord = {nb_next->u - p.u, nb_next->v - p.v};
            else if (nb_prev) chord = {p.u - nb_prev->u, p.v - nb_prev->v};

            // Analytic curve tangent from the field gradient; the polyline
            // chord only orients the traversal.
            const FieldJetEval e = eval_field_jet(atlas, p.chart, comp, p.u, p.v);
            p.grad_norm = e.ok ? e.grad.norm() / e.scale : 0.0;
            Vec2 tan{-e.grad.y, e.grad.x};
            tan = tan.normalized();
            if (tan.dot(chord) < 0) tan = tan * -1.0;
            p.tangent = tan;

            AmbientData amb = ambient_at(atlas, p.chart, p.u, p.v);
            Vec4 k_amb = push_forward(amb, p.kernel);
            if (have_prev && dot4(k_amb, prev_kernel) < 0) {
                for (int c = 0; c < 4; ++c) k_amb[c] = -k_amb[c];
                p.kernel = p.kernel * -1.0;
            }
            prev_kernel = k_amb;
            have_prev = true;
            const Vec4 t_amb = push_forward(amb, p.tangent);
            p.t = tangency_value(amb, k_amb, t_amb);
        }

        // Cusp candidates at sign changes of the tangency function.
        const int limit = curve.closed ? n : n - 1;
        for (int i = 0; i < limit; ++i) {
            const CurvePoint& a = curve.pts[i];
            const CurvePoint& b = curve.pts[(i + 1) % n];
            if (a.chart != b.chart) continue;
            if (a.t == 0.0 && b.t == 0.0) continue;
            if ((a.t > 0) == (b.t > 0)) continue;
            // A genuine 1-tangency crosses zero; a kernel-alignment artifact
            // jumps between large values of opposite sign.
            if (std::min(std::fabs(a.t), std::fabs(b.t)) > 0.25) continue;

            const int chart_idx = a.chart;
            auto t_at = [&](double lam, double* out_u = nullptr, double* out_v = nullptr) {
                double u = a.u + lam * (b.u - a.u), v = a.v + lam * (b.v - a.v);
                newton_project(atlas, chart_idx, comp, u, v, 1.0);
                const Chart& chart = atlas.chart(chart_idx);
                const FrameJets f = darboux_frame(chart, u, v, 1, atlas.params);
                const ConnectionForms cf = connection_forms(f);
                const KernelResult kr = kernel_direction(dgauss(cf, comp), 1e-6);
                AmbientData amb = ambient_at(atlas, chart_idx, u, v);
                Vec4 k_amb = push_forward(amb, kr.dir);
                Vec4 ka = push_forward(ambient_at(atlas, chart_idx, a.u, a.v), a.kernel);
                if (dot4(k_amb, ka) < 0)
                    for (int c = 0; c < 4; ++c) k_amb[c] = -k_amb[c];
                Vec2 tan{b.u - a.u, b.v - a.v};
                const FieldJetEval e = eval_field_jet(atlas, chart_idx, comp, u, v);
                Vec2 impl{-e.grad.y, e.grad.x};
                if (impl.dot(tan) < 0) impl = impl * -1.0;
                const Vec4 t_amb = push_forward(amb, impl.normalized());
                if (out_u) *out_u = u;
                if (out_v) *out_v = v;
                return tangency_value(amb, k_amb, t_amb);
            };

            double lo = 0.0, hi = 1.0;
            double t_lo = a.t;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double tm = t_at(mid);
                if ((tm > 0) == (t_lo > 0)) { lo = mid; t_lo = tm; }
                else hi = mid;
                if (std::fabs(tm) < 1e-10) { lo = hi = mid; break; }
            }
            double cu, cv;
            const double t_c = t_at(0.5 * (lo + hi), &cu, &cv);
            if (std::fabs(t_c) > 1e-6) continue;  // no zero: spurious flip

            CuspRecord rec;
            rec.chart = chart_idx;
            rec.u = cu;
            rec.v = cv;
            rec.comp = comp;
            rec.curve_index = static_cast<int>(ci);
            rec.segment_index = i;

            // 1-tangency derivative along the curve by stepping to both sides.
            const double ds = std::hypot(b.u - a.u, b.v - a.v);
            const double tp = t_at(std::min(1.0, 0.5 * (lo + hi) + 0.5));
            const double tm = t_at(std::max(0.0, 0.5 * (lo + hi) - 0.5));
            rec.tangency_deriv = (tp - tm) / std::max(ds, 1e-12);

            const Chart& chart = atlas.chart(chart_idx);
            const FrameJets f = darboux_frame(chart, cu, cv, 1, atlas.params);
            const ConnectionForms cf = connection_forms(f);
            const KernelResult kr = kernel_direction(dgauss(cf, comp), 1e-6);
            const auto bj = component_jets(f, comp);
            rec.image = {bj[0].value(), bj[1].value(), bj[2].value()};
            try {
                rec.sign = cusp_sign(chart, cu, cv, comp, kr.dir, atlas.params,
                                     &rec.normal_form_residual);
            } catch (const std::runtime_error&) {
                rec.sign = 0;
            }
            curve.cusps.push_back(rec);
        }

        // Merge duplicate detections of one cusp from adjacent segments.
        std::sort(curve.cusps.begin(), curve.cusps.end(),
                  [](const CuspRecord& a, const CuspRecord& b) {
                      return a.segment_index < b.segment_index;
                  });
        std::vector<CuspRecord> merged;
        for (const auto& r : curve.cusps) {
            if (!merged.empty()) {
                const CuspRecord& prev = merged.back();
                int d = std::abs(r.segment_index - prev.segment_index);
                if (curve.closed) d = std::min(d, n - d);
                if (d <= 2 && std::hypot(r.u - prev.u, r.v - prev.v) < 0.05) continue;
            }
            merged.push_back(r);
        }
        curve.cusps = std::move(merged);

        // Fold labels away from the detected cusps.
        for (int i = 0; i < n; ++i) {
            CurvePoint& p = curve.pts[i];
            bool near_cusp = false;
            for (const auto& c : curve.cusps) {
                int d = std::abs(i - c.segment_index);
                if (curve.closed) d = std::min(d, n - d);
                if (d <= 3) near_cusp = true;
            }
            p.fold = !near_cusp && std::fabs(p.t) > 1e-4;
        }
    }
}

G2Report check_G2(const Atlas& atlas, const TraceResult& trace, const G1Report& g1) {
    (void)atlas;
    G2Report rep;
    rep.g1_pass = g1.pass;
    rep.min_tangency_deriv = std::numeric_limits<double>::infinity();
    if (!g1.pass) {
        rep.pass = false;
        return rep;
    }
    bool all_classified = true;
    for (const auto& curve : trace.curves) {
        const int n = static_cast<int>(curve.pts.size());
        for (int i = 0; i < n; ++i) {
            const CurvePoint& p = curve.pts[i];
            if (p.fold) {
                ++rep.fold_points;
                continue;
            }
            bool near_cusp = false;
            for (const auto& c : curve.cusps) {
                int d = std::abs(i - c.segment_index);
                if (curve.closed) d = std::min(d, n - d);
                if (d <= 3) near_cusp = true;
            }
            if (!near_cusp) all_classified = false;
        }
        for (const auto& c : curve.cusps) {
            ++rep.cusp_count;
            if (c.sign == 0 || std::fabs(c.tangency_deriv) < 1e-6) ++rep.degenerate_tangencies;
            rep.min_tangency_deriv = std::min(rep.min_tangency_deriv, std::fabs(c.tangency_deriv));
        }
    }
    if (rep.cusp_count == 0) rep.min_tangency_deriv = 0;
    rep.pass = all_classified && rep.degenerate_tangencies == 0;
    return rep;
}

G3Report check_G3(const Atlas& atlas, const TraceResult& trace, int comp) {
    G3Report rep;
    struct ImgPoint {
        Vec3 image;
        Vec3 image_tangent;
        Vec4 m_pos;
        int curve;
        int index;
        bool is_cusp;
    };
    std::vector<ImgPoint> pts;
    for (size_t ci = 0; ci < trace.curves.size(); ++ci) {
        const SingularCurve& curve = trace.curves[ci];
        for (size_t i = 0; i < curve.pts.size(); ++i) {
            const CurvePoint& p = curve.pts[i];
            const Chart& chart = atlas.chart(p.chart);
            try {
                const FrameJets f = darboux_frame(chart, p.u, p.v, 1, atlas.params);
                const auto bj = component_jets(f, comp);
                ImgPoint ip;
                ip.image = {bj[0].value(), bj[1].value(), bj[2].value()};
                const Vec3 bu{bj[0].partial(0).value(), bj[1].partial(0).value(),
                              bj[2].partial(0).value()};
                const Vec3 bv{bj[0].partial(1).value(), bj[1].partial(1).value(),
                              bj[2].partial(1).value()};
                ip.image_tangent =
                    (bu * p.tangent.x + bv * p.tangent.y).normalized();
                ip.m_pos = ambient_at(atlas, p.chart, p.u, p.v).pos;
                ip.curve = static_cast<int>(ci);
                ip.index = static_cast<int>(i);
                ip.is_cusp = !p.fold && std::fabs(p.t) < 1e-4;
                pts.push_back(ip);
            } catch (const std::runtime_error&) {
            }
        }
    }
    if (pts.empty()) {
        rep.vacuous = true;
        rep.pass = true;
        return rep;
    }
    const double tol = 1e-4 * 0.7071067811865476;
    // Pairwise scan with a coarse hash to keep it near-linear.
    std::unordered_map<int64_t, std::vector<int>> buckets;
    auto key_of = [&](const Vec3& b) {
        const double cellw = 4 * tol;
        const int64_t kx = static_cast<int64_t>(std::floor(b.x / cellw));
        const int64_t ky = static_cast<int64_t>(std::floor(b.y / cellw));
        const int64_t kz = static_cast<int64_t>(std::floor(b.z / cellw));
        return (kx * 73856093) ^ (ky * 19349663) ^ (kz * 83492791);
    };
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) buckets[key_of(pts[i].image)].push_back(i);

    std::map<std::pair<int, int>, int> coincidences;  // (i, j) -> count
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        // Check this and neighboring buckets.
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    const Vec3 shifted{pts[i].image.x + dx * 4 * tol, pts[i].image.y + dy * 4 * tol,
                                       pts[i].image.z + dz * 4 * tol};
                    auto it = buckets.find(key_of(shifted));
                    if (it == buckets.end()) continue;
                    for (int j : it->second) {
                        if (j <= i) continue;
                        const ImgPoint& A = pts[i];
                        const ImgPoint& B = pts[j];
                        if ((A.image - B.image).norm() > tol) continue;
                        // Same point of the surface (curve continuation), not a
                        // self-intersection of the singular value set.
                        Vec4 d;
                        for (int c = 0; c < 4; ++c) d[c] = A.m_pos[c] - B.m_pos[c];
                        if (norm4(d) < 1e-2) continue;
                        coincidences[{i, j}]++;
                    }
                }
    }
    // Collapse runs of sample-level coincidences into isolated crossings: group
    // by (curve_i, curve_j, rough arc positions).
    std::map<std::tuple<int, int, int, int>, std::pair<int, int>> crossings;
    for (const auto& [pair_idx, cnt] : coincidences) {
        (void)cnt;
        const ImgPoint& A = pts[static_cast<size_t>(pair_idx.first)];
        const ImgPoint& B = pts[static_cast<size_t>(pair_idx.second)];
        const auto key = std::make_tuple(A.curve, B.curve, A.index / 16, B.index / 16);
        crossings[key] = {pair_idx.first, pair_idx.second};
    }
    rep.coincident_pairs = static_cast<int>(crossings.size());
    for (const auto& [key, pr] : crossings) {
        (void)key;
        const ImgPoint& A = pts[static_cast<size_t>(pr.first)];
        const ImgPoint& B = pts[static_cast<size_t>(pr.second)];
        if (A.is_cusp || B.is_cusp) ++rep.cusp_image_collisions;
        const double cr = A.image_tangent.cross(B.image_tangent).norm();
        if (cr < 1e-4) ++rep.tangential_pairs;
    }
    // Triples: three pairwise-coincident distinct surface points.
    for (const auto& [k1, p1] : crossings)
        for (const auto& [k2, p2] : crossings) {
            if (!(k1 < k2)) continue;
            if (p1.first == p2.first &&
                (pts[static_cast<size_t>(p1.second)].image - pts[static_cast<size_t>(p2.second)].image)
                        .norm() < tol) {
                Vec4 d;
                for (int c = 0; c < 4; ++c)
                    d[c] = pts[static_cast<size_t>(p1.second)].m_pos[c] -
                           pts[static_cast<size_t>(p2.second)].m_pos[c];
                if (norm4(d) > 1e-2) ++rep.triple_points;
            }
        }
    rep.pass = rep.cusp_image_collisions == 0 && rep.tangential_pairs == 0 && rep.triple_points == 0;
    return rep;
}

RankScanReport rank_scan(const Atlas& atlas, int grid) {
    RankScanReport rep;
    for (int c = 0; c < static_cast<int>(atlas.charts.size()); ++c) {
        const Chart& chart = atlas.chart(c);
        double u0, u1, v0, v1;
        domain_box(chart, u0, u1, v0, v1);
        std::vector<RankScanEntry> local(static_cast<size_t>(grid) * grid);
        std::vector<uint8_t> valid(static_cast<size_t>(grid) * grid, 0);
        parallel_for(grid, [&](int j) {
            const double v = v0 + (v1 - v0) * (j + 0.5) / grid;
            for (int i = 0; i < grid; ++i) {
                const double u = u0 + (u1 - u0) * (i + 0.5) / grid;
                if (!chart.domain.contains(u, v, atlas.params)) continue;
                try {
                    const FrameJets f = darboux_frame(chart, u, v, 1, atlas.params);
                    const ConnectionForms cf = connection_forms(f);
                    const RankResult rr = rank_dg(cf);
                    const InvariantSample s = curvatures(cf, f);
                    RankScanEntry e{c, u, v, s.K, s.Delta, rr.rank};
                    local[static_cast<size_t>(j) * grid + i] = e;
                    valid[static_cast<size_t>(j) * grid + i] = 1;
                } catch (const std::runtime_error&) {
                }
            }
        });
        for (size_t k = 0; k < local.size(); ++k) {
            if (!valid[k]) continue;
            ++rep.points_scanned;
            const RankScanEntry& e = local[k];
            if (e.rank < 2) {
                rep.rank_drops.push_back(e);
                // A rank drop forces K = Delta = 0 simultaneously.
                if (std::fabs(e.K) > 1e-5 || std::fabs(e.Delta) > 1e-5)
                    rep.characterization_ok = false;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Local component maps and cusp machinery.

namespace {

Jet2 transpose_vars(const Jet2& j) {
    Jet2 r(j.order());
    for (int d = 0; d <= j.order(); ++d)
        for (int q = 0; q <= d; ++q) r.set_coeff(q, d - q, j.coeff(d - q, q));
    return r;
}

// Linear source substitution (u, v) <- M (u', v').
std::array<Jet2, 2> substitute_linear(const std::array<Jet2, 2>& f, const Mat2& m) {
    const int p = f[0].order();
    const Jet2 U = Jet2::variable(0.0, 0, p);
    const Jet2 V = Jet2::variable(0.0, 1, p);
    const Jet2 nu = U * m.a + V * m.b;
    const Jet2 nv = U * m.c + V * m.d;
    return {Jet2::compose2(f[0], nu, nv), Jet2::compose2(f[1], nu, nv)};
}

}  // namespace

std::array<Jet2, 2> component_local_map(const Chart& chart, double u, double v, int comp,
                                        const ParamTable& params, int order) {
    const FrameJets f = darboux_frame(chart, u, v, order, params);
    const auto bj = component_jets(f, comp);
    const Vec3 b0{bj[0].value(), bj[1].value(), bj[2].value()};
    const SphereTangentBasis basis = sphere_tangent_basis(b0);
    Jet2 S = (bj[0] - b0.x) * basis.t1.x + (bj[1] - b0.y) * basis.t1.y + (bj[2] - b0.z) * basis.t1.z;
    Jet2 T = (bj[0] - b0.x) * basis.t2.x + (bj[1] - b0.y) * basis.t2.y + (bj[2] - b0.z) * basis.t2.z;
    if (chart.orientation < 0) {
        S = transpose_vars(S);
        T = transpose_vars(T);
    }
    return {S, T};
}

double fold_criterion_Q(const Chart& chart, double u, double v, int comp,
                        const ParamTable& params) {
    const auto F = component_local_map(chart, u, v, comp, params, 2);
    const Mat2 d{F[0].coeff(1, 0), F[0].coeff(0, 1), F[1].coeff(1, 0), F[1].coeff(0, 1)};
    const KernelResult kr = kernel_direction(d, 1e-6);
    if (kr.rank != KernelResult::Rank::Line) return 0.0;
    const Vec2 k = kr.dir;
    const Vec2 kp{k.y, -k.x};
    const Vec2 img = d.apply(kp);
    const Vec2 Qk{F[0].coeff(2, 0) * k.x * k.x + F[0].coeff(1, 1) * k.x * k.y +
                      F[0].coeff(0, 2) * k.y * k.y,
                  F[1].coeff(2, 0) * k.x * k.x + F[1].coeff(1, 1) * k.x * k.y +
                      F[1].coeff(0, 2) * k.y * k.y};
    const double scale = img.norm() * (Qk.norm() + 1e-300);
    return (Qk.cross(img)) / std::max(scale, 1e-300);
}

int cusp_sign(const Chart& chart, double u, double v, int comp, const Vec2& kernel_dir,
              const ParamTable& params, double* normal_form_residual, CuspSignDiag* diag) {
    auto F = component_local_map(chart, u, v, comp, params, 3);
    const Mat2 d{F[0].coeff(1, 0), F[0].coeff(0, 1), F[1].coeff(1, 0), F[1].coeff(0, 1)};
    KernelResult kr = kernel_direction(d, 1e-5);
    if (kr.rank != KernelResult::Rank::Line)
        throw InconclusiveSign("differential is not rank one at the cusp candidate");
    const Vec2 k = kr.dir;
    const Vec2 kp{k.y, -k.x};  // det[kp, k] = +1

    // Source rotation: kernel becomes the v'-axis.
    F = substitute_linear(F, Mat2{kp.x, k.x, kp.y, k.y});

    // Target rotation: image of the differential becomes the second axis.
    const Vec2 img = d.apply(kp);
    const double c = img.norm();
    if (c < 1e-12) throw InconclusiveSign("vanishing image direction");
    const double phi = std::atan2(img.y, img.x);
    const double cs = std::cos(3.14159265358979323846 / 2 - phi),
                 sn = std::sin(3.14159265358979323846 / 2 - phi);
    Jet2 S = F[0] * cs - F[1] * sn;
    Jet2 T = F[0] * sn + F[1] * cs;

    // Ensure the leading coefficient of T is positive via half-turns.
    if (T.coeff(1, 0) < 0) {
        const Jet2 U = Jet2::variable(0.0, 0, 3), V = Jet2::variable(0.0, 1, 3);
        const Jet2 mu = -U, mv = -V;
        S = -Jet2::compose2(S, mu, mv);
        T = -Jet2::compose2(T, mu, mv);
    }
    T = T * (1.0 / T.coeff(1, 0));

    // Source substitution u'' = T(u', v'): invert (T, v') and compose.
    {
        const int p = 3;
        const Jet2 U = Jet2::variable(0.0, 0, p), V = Jet2::variable(0.0, 1, p);
        Jet2 nT = T;
        const double L00 = T.coeff(1, 0), L01 = T.coeff(0, 1);
        nT.set_coeff(0, 0, 0.0);
        nT.set_coeff(1, 0, 0.0);
        nT.set_coeff(0, 1, 0.0);
        // (u'', v'') = (L00 u' + L01 v' + nT, v'); invert by fixed point.
        const double I00 = 1.0 / L00, I01 = -L01 / L00;
        Jet2 gu = U * I00 + V * I01;
        Jet2 gv = V;
        for (int it = 0; it < p; ++it) {
            const Jet2 ru = U - Jet2::compose2(nT, gu, gv);
            gu = ru * I00 + V * I01;
        }
        S = Jet2::compose2(S, gu, gv);
    }

    // Target shear kills the pure-u terms of S (the second target coordinate
    // is exactly u'' now).
    S.set_coeff(0, 0, 0.0);
    S.set_coeff(1, 0, 0.0);
    S.set_coeff(2, 0, 0.0);
    S.set_coeff(3, 0, 0.0);

    const double a11 = S.coeff(1, 1);
    const double a02 = S.coeff(0, 2);
    const double a03 = S.coeff(0, 3);
    const double scale = std::fabs(a11) + std::fabs(a03) + 1e-300;
    if (normal_form_residual) *normal_form_residual = std::fabs(a02) / scale;
    if (diag) {
        diag->a11 = a11;
        diag->a02 = a02;
        diag->a03 = a03;
    }
    if (std::fabs(a03) < 1e-10 * scale)
        throw InconclusiveSign("cubic coefficient vanishes after reduction");
    const int mu_nf = a03 < 0 ? +1 : -1;
    if (diag) diag->mu_normal_form = mu_nf;

    // Cross-check through the local mapping degree: the winding of the image
    // of a small source circle equals the sign of the Jacobian on the side
    // where the component is injective near the cusp.  (Which side of the
    // singular curve that is cannot be read from the curve's bending alone --
    // it is not a diffeomorphism invariant -- so the degree is computed
    // directly.)
    (void)kernel_dir;
    int mu_deg = 0;
    for (double radius : {4e-3, 1e-2}) {
        int w = 0;
        try {
            w = local_degree(chart, u, v, comp, params, radius);
        } catch (const std::runtime_error&) {
            continue;
        }
        if (w == 1 || w == -1) {
            mu_deg = w;
            break;
        }
    }
    if (diag) diag->mu_jacobian_side = mu_deg;
    if (mu_deg != 0 && mu_deg != mu_nf)
        throw InconclusiveSign("normal form and local degree disagree");
    return mu_nf;
}

int local_degree(const Chart& chart, double u, double v, int comp, const ParamTable& params,
                 double radius) {
    const FrameJets fc = darboux_frame(chart, u, v, 1, params);
    const auto bjc = component_jets(fc, comp);
    const Vec3 b0{bjc[0].value(), bjc[1].value(), bjc[2].value()};
    const SphereTangentBasis basis = sphere_tangent_basis(b0);
    auto value_at = [&](double theta) {
        const double du = radius * std::cos(theta), dv = radius * std::sin(theta);
        const FrameJets fq = darboux_frame(chart, u + du, v + dv, 1, params);
        const auto bj = component_jets(fq, comp);
        const Vec3 o = Vec3{bj[0].value(), bj[1].value(), bj[2].value()} - b0;
        return Vec2{o.dot(basis.t1), o.dot(basis.t2)};
    };
    std::function<double(double, double, const Vec2&, const Vec2&, int)> arc =
        [&](double t0, double t1, const Vec2& v0, const Vec2& v1, int depth) -> double {
        const double dang = std::atan2(v0.cross(v1), v0.dot(v1));
        if (std::fabs(dang) < 0.8 || depth >= 24) return dang;
        const double tm = 0.5 * (t0 + t1);
        const Vec2 vm = value_at(tm);
        return arc(t0, tm, v0, vm, depth + 1) + arc(tm, t1, vm, v1, depth + 1);
    };
    const double two_pi = 2 * 3.14159265358979323846;
    double total = 0.0;
    const int steps = 128;
    Vec2 prev = value_at(0.0);
    for (int i = 1; i <= steps; ++i) {
        const double t = two_pi * i / steps;
        const Vec2 cur = value_at(t);
        total += arc(two_pi * (i - 1) / steps, t, prev, cur, 0);
        prev = cur;
    }
    const int w = static_cast<int>(std::lround(total / two_pi));
    // The winding is taken in a positively oriented source circle; flip for
    // negatively oriented charts.
    return chart.orientation < 0 ? -w : w;
}

}  // namespace gm4

#include "gm4/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace gm4 {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ChartPSLG {
    std::vector<Vec2> points;
    std::vector<std::pair<int, int>> constraints;
    std::vector<char> on_boundary;                 // per point
    std::vector<std::pair<int, int>> sigma_pairs;  // subset of constraints on the curve
};

// Union-find over chart indices connected by identity glue (shared domains).
struct DomainGroups {
    std::vector<int> parent;
    explicit DomainGroups(int n) : parent(static_cast<size_t>(n)) {
        for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
    }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
        return x;
    }
    void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

double point_segment_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

}  // namespace

RegionDecomposition decompose(const Atlas& atlas, const TraceResult& trace, int comp,
                              int mesh_grid) {
    const int n_charts = static_cast<int>(atlas.charts.size());
    RegionDecomposition out;
    out.comp = comp;

    // Shared boundary polygons for identity-glued chart groups.
    DomainGroups groups(n_charts);
    for (const auto& g : atlas.glue)
        if (g.kind == GlueEdge::Kind::Identity) groups.unite(g.chart_a, g.chart_b);

    std::map<int, std::vector<Vec2>> group_boundary;
    for (int c = 0; c < n_charts; ++c) {
        const int rep = groups.find(c);
        if (group_boundary.count(rep)) continue;
        const Chart& chart = atlas.chart(rep);
        std::vector<Vec2> poly;
        if (chart.domain.kind == Domain::Kind::Implicit) {
            const int samples = std::max(64, mesh_grid * 3);
            for (const auto& bp : trace_implicit_boundary(chart, atlas.params, samples))
                poly.push_back({bp.u, bp.v});
        } else {
            const double u0 = chart.domain.u0, u1 = chart.domain.u1;
            const double v0 = chart.domain.v0, v1 = chart.domain.v1;
            const int m = mesh_grid;
            for (int i = 0; i < m; ++i) poly.push_back({u0 + (u1 - u0) * i / m, v0});
            for (int i = 0; i < m; ++i) poly.push_back({u1, v0 + (v1 - v0) * i / m});
            for (int i = 0; i < m; ++i) poly.push_back({u1 - (u1 - u0) * i / m, v1});
            for (int i = 0; i < m; ++i) poly.push_back({v0 == v1 ? u0 : u0, v1 - (v1 - v0) * i / m});
        }
        group_boundary[rep] = std::move(poly);
    }

    // Per-chart singular polylines (decimated to the mesh scale, cusps kept).
    struct ChartCurve {
        std::vector<Vec2> pts;
    };
    std::vector<std::vector<ChartCurve>> chart_curves(static_cast<size_t>(n_charts));
    for (size_t ci = 0; ci < trace.curves.size(); ++ci) {
        const SingularCurve& curve = trace.curves[ci];
        const int n = static_cast<int>(curve.pts.size());
        if (n < 2) continue;
        std::set<int> keep;  // cusp sample indices to preserve
        for (const auto& cr : curve.cusps) keep.insert(cr.segment_index);
        int i = 0;
        ChartCurve cc;
        int cur_chart = curve.pts[0].chart;
        const int total = curve.closed ? n + 1 : n;
        for (i = 0; i < total; ++i) {
            const CurvePoint& p = curve.pts[static_cast<size_t>(i % n)];
            if (p.chart != cur_chart) {
                if (cc.pts.size() >= 2) chart_curves[static_cast<size_t>(cur_chart)].push_back(cc);
                cc.pts.clear();
                cur_chart = p.chart;
            }
            cc.pts.push_back({p.u, p.v});
        }
        if (cc.pts.size() >= 2) chart_curves[static_cast<size_t>(cur_chart)].push_back(cc);

        // Splice cusp locations in as exact vertices.
        for (const auto& cr : curve.cusps)
            for (auto& chain : chart_curves[static_cast<size_t>(cr.chart)])
                for (size_t k = 0; k + 1 < chain.pts.size(); ++k) {
                    const Vec2 cp{cr.u, cr.v};
                    if (point_segment_dist(cp, chain.pts[k], chain.pts[k + 1]) < 1e-6) {
                        chain.pts.insert(chain.pts.begin() + static_cast<long>(k) + 1, cp);
                        goto next_cusp;
                    }
                }
    next_cusp:;
    }

    // Build, triangulate, and label each chart.  Boundary vertices are
    // identified across charts by ambient position: quantized cell hash with
    // neighbor-cell probing, robust against roundoff at cell boundaries.
    std::unordered_map<int64_t, std::vector<std::pair<Vec4, int>>> ambient_cells;
    int next_global = 0;
    const double ident_tol = 1e-7;
    auto cell_key = [&](int64_t a, int64_t b, int64_t c, int64_t d) {
        int64_t h = 1469598103934665603LL;
        for (int64_t x : {a, b, c, d}) {
            h ^= x;
            h *= 1099511628211LL;
        }
        return h;
    };
    auto get_global = [&](const Vec4& p) {
        const double cell = 8 * ident_tol;
        const int64_t qa = static_cast<int64_t>(std::floor(p[0] / cell));
        const int64_t qb = static_cast<int64_t>(std::floor(p[1] / cell));
        const int64_t qc = static_cast<int64_t>(std::floor(p[2] / cell));
        const int64_t qd = static_cast<int64_t>(std::floor(p[3] / cell));
        for (int64_t da = -1; da <= 1; ++da)
            for (int64_t db = -1; db <= 1; ++db)
                for (int64_t dc = -1; dc <= 1; ++dc)
                    for (int64_t dd = -1; dd <= 1; ++dd) {
                        auto it = ambient_cells.find(cell_key(qa + da, qb + db, qc + dc, qd + dd));
                        if (it == ambient_cells.end()) continue;
                        for (const auto& [q, id] : it->second) {
                            Vec4 diff;
                            for (int k = 0; k < 4; ++k) diff[k] = q[k] - p[k];
                            if (norm4(diff) < ident_tol) return id;
                        }
                    }
        ambient_cells[cell_key(qa, qb, qc, qd)].push_back({p, next_global});
        return next_global++;
    };

    std::map<std::pair<int, int>, std::array<int, 3>> edge_info;  // (g1,g2) -> {count, plus, minus}
    std::set<std::pair<int, int>> sigma_edges;
    std::map<int, std::array<int, 2>> vert_labels;  // global id -> {plus count, minus count}
    std::set<int> sigma_verts;
    std::set<int> all_verts;
    int F = 0, chi_F_plus = 0, chi_F_minus = 0;

    for (int c = 0; c < n_charts; ++c) {
        const Chart& chart = atlas.chart(c);
        const std::vector<Vec2>& poly = group_boundary[groups.find(c)];

        // Boundary loop, decimated toward the mesh scale.
        double bbox_w = chart.domain.u1 - chart.domain.u0;
        double bbox_h = chart.domain.v1 - chart.domain.v0;
        const double spacing = std::max(bbox_w, bbox_h) / mesh_grid;
        std::vector<Vec2> loop;
        for (size_t i = 0; i < poly.size(); ++i) {
            if (!loop.empty() && (poly[i] - loop.back()).norm() < 0.35 * spacing) continue;
            loop.push_back(poly[i]);
        }
        while (loop.size() > 3 && (loop.front() - loop.back()).norm() < 0.35 * spacing)
            loop.pop_back();

        // Singular chains: decimate, snap boundary-reaching tips, collect.
        std::vector<std::vector<Vec2>> chains_dec;
        for (const auto& chain : chart_curves[static_cast<size_t>(c)]) {
            std::vector<Vec2> dec;
            for (size_t i = 0; i < chain.pts.size(); ++i) {
                if (!dec.empty() && i + 1 < chain.pts.size() &&
                    (chain.pts[i] - dec.back()).norm() < 0.8 * spacing)
                    continue;
                dec.push_back(chain.pts[i]);
            }
            if (dec.size() < 2) continue;
            // Chains that reach the glue boundary snap onto the nearest shared
            // boundary vertex, so the glued sigma complex closes up across
            // charts.
            for (int side = 0; side < 2; ++side) {
                Vec2& tip = side == 0 ? dec.front() : dec.back();
                double best = 1e30;
                size_t best_vtx = 0;
                for (size_t s = 0; s < loop.size(); ++s) {
                    const double d = (tip - loop[s]).norm();
                    if (d < best) {
                        best = d;
                        best_vtx = s;
                    }
                }
                if (best < 2.5 * spacing) tip = loop[best_vtx];
            }
            chains_dec.push_back(std::move(dec));
        }

        // Assemble the PSLG: boundary loop first, then chains, then grid fill.
        ChartPSLG mesh_in;
        for (const Vec2& p : loop) {
            mesh_in.points.push_back(p);
            mesh_in.on_boundary.push_back(1);
        }
        const int loop_n = static_cast<int>(loop.size());
        for (int i = 0; i < loop_n; ++i)
            mesh_in.constraints.push_back({i, (i + 1) % loop_n});

        // Index chain vertices: snap to boundary vertices when close, and
        // reuse exact repeats (closed chains wrap onto their first vertex).
        std::vector<std::vector<int>> chain_indexed;
        for (const auto& dec : chains_dec) {
            std::vector<int> ids(dec.size(), -1);
            for (size_t k = 0; k < dec.size(); ++k) {
                const Vec2 p = dec[k];
                int found = -1;
                for (int b = 0; b < loop_n && found < 0; ++b)
                    if ((mesh_in.points[static_cast<size_t>(b)] - p).norm() < 0.3 * spacing)
                        found = b;
                for (size_t b = static_cast<size_t>(loop_n);
                     b < mesh_in.points.size() && found < 0; ++b)
                    if ((mesh_in.points[b] - p).norm() < 1e-7)
                        found = static_cast<int>(b);
                if (found >= 0) {
                    ids[k] = found;
                } else {
                    ids[k] = static_cast<int>(mesh_in.points.size());
                    mesh_in.points.push_back(p);
                    mesh_in.on_boundary.push_back(0);
                }
            }
            chain_indexed.push_back(std::move(ids));
        }
        for (const auto& ids : chain_indexed)
            for (size_t i = 0; i + 1 < ids.size(); ++i) {
                if (ids[i] == ids[i + 1]) continue;
                mesh_in.constraints.push_back({ids[i], ids[i + 1]});
                mesh_in.sigma_pairs.push_back({ids[i], ids[i + 1]});
            }

        // Interior grid fill.
        auto inside_loop = [&](const Vec2& p) {
            int winds = 0;
            for (size_t i = 0; i < loop.size(); ++i) {
                const Vec2& a = loop[i];
                const Vec2& b = loop[(i + 1) % loop.size()];
                if ((a.y <= p.y) != (b.y <= p.y)) {
                    const double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                    if (x > p.x) winds ^= 1;
                }
            }
            return winds != 0;
        };
        for (int j = 0; j <= mesh_grid; ++j)
            for (int i = 0; i <= mesh_grid; ++i) {
                const Vec2 p{chart.domain.u0 + bbox_w * i / mesh_grid,
                             chart.domain.v0 + bbox_h * j / mesh_grid};
                if (!inside_loop(p)) continue;
                double clearance = 1e30;
                for (size_t s = 0; s < loop.size(); ++s)
                    clearance = std::min(
                        clearance, point_segment_dist(p, loop[s], loop[(s + 1) % loop.size()]));
                for (const auto& ids : chain_indexed)
                    for (size_t s = 0; s + 1 < ids.size(); ++s)
                        clearance = std::min(
                            clearance,
                            point_segment_dist(p, mesh_in.points[static_cast<size_t>(ids[s])],
                                               mesh_in.points[static_cast<size_t>(ids[s + 1])]));
                if (clearance < 0.6 * spacing) continue;
                mesh_in.points.push_back(p);
                mesh_in.on_boundary.push_back(0);
            }

        TriMesh tm = constrained_delaunay(mesh_in.points, mesh_in.constraints);

        // Global vertex ids (ambient identification for boundary vertices).
        std::vector<int> gid(tm.points.size(), -1);
        for (size_t i = 0; i < tm.points.size(); ++i) {
            const Vec4 pos =
                eval_point_boundary(chart, tm.points[i].x, tm.points[i].y, atlas.params);
            if (i < mesh_in.on_boundary.size() && mesh_in.on_boundary[i]) {
                gid[i] = get_global(pos);
            } else {
                gid[i] = next_global++;  // interior vertices are unique per chart
            }
            all_verts.insert(gid[i]);
        }

        for (const auto& sp : mesh_in.sigma_pairs) {
            const int a = gid[static_cast<size_t>(sp.first)], b = gid[static_cast<size_t>(sp.second)];
            sigma_edges.insert({std::min(a, b), std::max(a, b)});
            sigma_verts.insert(a);
            sigma_verts.insert(b);
        }

        // Labels and counts.
        for (const auto& tri : tm.triangles) {
            const Vec2 bc = (tm.points[static_cast<size_t>(tri[0])] + tm.points[static_cast<size_t>(tri[1])] +
                             tm.points[static_cast<size_t>(tri[2])]) *
                            (1.0 / 3.0);
            int label = 0;
            try {
                const InvariantSample s = invariants_at(chart, bc.x, bc.y, atlas.params, 1);
                const double val = comp == 1 ? s.K + s.KN : s.K - s.KN;
                label = val > 0 ? +1 : -1;
            } catch (const std::runtime_error&) {
                label = 0;
            }
            if (label == 0) {
                ++out.straddling;
                continue;
            }
            ++F;
            if (label > 0) ++chi_F_plus;
            else ++chi_F_minus;
            for (int k = 0; k < 3; ++k) {
                const int a = gid[static_cast<size_t>(tri[static_cast<size_t>(k)])];
                const int b = gid[static_cast<size_t>(tri[(static_cast<size_t>(k) + 1) % 3])];
                auto& info = edge_info[{std::min(a, b), std::max(a, b)}];
                info[0] += 1;
                if (label > 0) info[1] += 1;
                else info[2] += 1;
                auto& vl = vert_labels[a];
                if (label > 0) vl[0] += 1;
                else vl[1] += 1;
            }
        }
    }

    // Glued complex counts.
    const int V = static_cast<int>(all_verts.size());
    const int E = static_cast<int>(edge_info.size());
    out.V = V;
    out.E = E;
    out.F = F;
    out.chi_total = V - E + F;

    int E_plus = 0, E_minus = 0;
    for (const auto& [key, info] : edge_info) {
        if (info[0] == 1) ++out.boundary_unglued;
        if (sigma_edges.count(key)) continue;
        if (info[2] == 0 && info[1] == info[0]) ++E_plus;
        else if (info[1] == 0 && info[2] == info[0]) ++E_minus;
        else ++out.straddling;  // mixed labels across a non-sigma edge
    }
    int V_plus = 0, V_minus = 0;
    for (const auto& [id, vl] : vert_labels) {
        if (sigma_verts.count(id)) continue;
        if (vl[1] == 0 && vl[0] > 0) ++V_plus;
        else if (vl[0] == 0 && vl[1] > 0) ++V_minus;
        else ++out.straddling;
    }
    out.sigma_edges = static_cast<int>(sigma_edges.size());
    out.chi_sigma = static_cast<int>(sigma_verts.size()) - static_cast<int>(sigma_edges.size());
    out.chi_plus = chi_F_plus - E_plus + V_plus;
    out.chi_minus = chi_F_minus - E_minus + V_minus;
    return out;
}

GBReport gauss_bonnet_report(const Atlas& atlas, const GBOptions& opts) {
    atlas.require_closed();
    GBReport rep;
    rep.glue_error = glue_consistency(atlas);

    TraceResult traces[2];
    G1Report g1[2];
    G2Report g2[2];
    for (int i = 0; i < 2; ++i) {
        traces[i] = trace_singular_set(atlas, i + 1, opts.trace_grid);
        g1[i] = check_G1(atlas, traces[i], i + 1);
        classify_points(atlas, traces[i], i + 1);
        g2[i] = check_G2(atlas, traces[i], g1[i]);
        rep.comp[i].comp = i + 1;
        rep.comp[i].g1_pass = g1[i].pass;
        rep.comp[i].g1_vacuous = g1[i].vacuous;
        rep.comp[i].gradient_vanishes = g1[i].gradient_vanishes;
        rep.comp[i].g2_pass = g2[i].pass;
        rep.comp[i].g3_pass = check_G3(atlas, traces[i], i + 1).pass;
        rep.comp[i].curve_count = static_cast<int>(traces[i].curves.size());
    }
    rep.genericity_ok = g2[0].pass && g2[1].pass;
    if (!rep.genericity_ok) {
        rep.notes = "genericity violated; identities are not asserted";
        return rep;
    }

    // All surface integrals in one pass: K, KN, |K+KN|, |K-KN|, Jg1, Jg2.
    auto integrals = integrate_fields(
        atlas, 6,
        [](int, double, double, const InvariantSample& s, double* out) {
            out[0] = s.K;
            out[1] = s.KN;
            out[2] = std::fabs(s.K + s.KN);
            out[3] = std::fabs(s.K - s.KN);
            out[4] = s.Jg1;
            out[5] = s.Jg2;
        },
        opts.quad_grid);
    rep.int_K = integrals[0].value;
    rep.int_K_err = integrals[0].estimated_error;
    rep.int_KN = integrals[1].value;
    rep.int_KN_err = integrals[1].estimated_error;

    int kda_rhs = 0, nda_rhs = 0;
    for (int i = 0; i < 2; ++i) {
        GBComponentReport& cr = rep.comp[i];
        const RegionDecomposition dec = decompose(atlas, traces[i], i + 1, opts.mesh_grid);
        cr.chi_plus = dec.chi_plus;
        cr.chi_minus = dec.chi_minus;
        cr.chi_additivity_residual = dec.chi_total - (dec.chi_plus + dec.chi_minus + dec.chi_sigma);
        if (i == 0) {
            rep.chi_mesh = dec.chi_total;
            if (atlas.topology_hint && *atlas.topology_hint != dec.chi_total)
                rep.chi_matches_hint = false;
        }
        for (const auto& curve : traces[i].curves)
            for (const auto& c : curve.cusps) {
                if (c.sign > 0) ++cr.s_plus;
                else if (c.sign < 0) ++cr.s_minus;
                else ++cr.s_unclassified;
            }
        cr.deg_raw = integrals[static_cast<size_t>(4 + i)].value / (2 * kPi);
        cr.deg = static_cast<int>(std::lround(cr.deg_raw));
        cr.deg_integer_ok = std::fabs(cr.deg_raw - cr.deg) < 0.05;
        cr.int_abs = integrals[static_cast<size_t>(2 + i)].value;

        const KgIntegral kg = curve_integral_kg(atlas, traces[i], i + 1);
        cr.kg = kg.value;
        cr.gb1_residual = 2 * kPi * rep.chi_mesh - cr.int_abs - 2 * cr.kg;
        cr.degree_identity_residual = 2 * cr.deg - (cr.chi_plus - cr.chi_minus + cr.s_plus - cr.s_minus);
        if (atlas.embedded) {
            cr.chMp_residual = rep.chi_mesh - cr.chi_plus - 0.5 * (cr.s_plus - cr.s_minus);
            cr.chMm_residual = cr.chi_minus - 0.5 * (cr.s_plus - cr.s_minus);
        }
        kda_rhs += cr.chi_plus - cr.chi_minus + cr.s_plus - cr.s_minus;
        nda_rhs += (i == 0 ? 1 : -1) * (cr.chi_plus - cr.chi_minus + cr.s_plus - cr.s_minus);
    }
    rep.KdA_residual = rep.int_K / kPi - kda_rhs;
    rep.NdA_residual = rep.int_KN / kPi - nda_rhs;
    return rep;
}

std::string gb_report_text(const Atlas& atlas, const GBReport& r) {
    std::ostringstream os;
    os.precision(12);
    os << "# gauss-bonnet report\n";
    os << "surface = " << atlas.name << "\n";
    os << "closed = " << (atlas.closed ? "true" : "false") << "\n";
    os << "embedded = " << (atlas.embedded ? "true" : "false") << "\n";
    os << "glue_error = " << r.glue_error << "\n";
    os << "genericity_ok = " << (r.genericity_ok ? "true" : "false") << "\n";
    if (!r.genericity_ok) {
        for (int i = 0; i < 2; ++i) {
            os << "comp" << i + 1 << ".g1_pass = " << (r.comp[i].g1_pass ? "true" : "false") << "\n";
            os << "comp" << i + 1 << ".gradient_vanishes = "
               << (r.comp[i].gradient_vanishes ? "true" : "false") << "\n";
        }
        os << "note = " << r.notes << "\n";
        return os.str();
    }
    os << "chi_mesh = " << r.chi_mesh << "\n";
    if (atlas.topology_hint)
        os << "chi_hint = " << *atlas.topology_hint << "\n";
    os << "chi_matches_hint = " << (r.chi_matches_hint ? "true" : "false") << "\n";
    os << "int_K_dA = " << r.int_K << "\n";
    os << "int_K_dA_err = " << r.int_K_err << "\n";
    os << "int_KN_dA = " << r.int_KN << "\n";
    os << "int_KN_dA_err = " << r.int_KN_err << "\n";
    os << "KdA_residual = " << r.KdA_residual << "\n";
    os << "NdA_residual = " << r.NdA_residual << "\n";
    for (int i = 0; i < 2; ++i) {
        const GBComponentReport& c = r.comp[i];
        const std::string p = "comp" + std::to_string(i + 1) + ".";
        os << p << "curves = " << c.curve_count << "\n";
        os << p << "g3_pass = " << (c.g3_pass ? "true" : "false") << "\n";
        os << p << "chi_plus = " << c.chi_plus << "\n";
        os << p << "chi_minus = " << c.chi_minus << "\n";
        os << p << "cusps_plus = " << c.s_plus << "\n";
        os << p << "cusps_minus = " << c.s_minus << "\n";
        os << p << "cusps_unclassified = " << c.s_unclassified << "\n";
        os << p << "deg_raw = " << c.deg_raw << "\n";
        os << p << "deg = " << c.deg << "\n";
        os << p << "deg_integer_ok = " << (c.deg_integer_ok ? "true" : "false") << "\n";
        os << p << "int_abs = " << c.int_abs << "\n";
        os << p << "kg_integral = " << c.kg << "\n";
        os << p << "gb1_residual = " << c.gb1_residual << "\n";
        os << p << "degree_identity_residual = " << c.degree_identity_residual << "\n";
        os << p << "chi_additivity_residual = " << c.chi_additivity_residual << "\n";
        if (atlas.embedded) {
            os << p << "chMplus_residual = " << c.chMp_residual << "\n";
            os << p << "chMminus_residual = " << c.chMm_residual << "\n";
        }
    }
    if (!r.notes.empty()) os << "note = " << r.notes << "\n";
    return os.str();
}

}  // namespace gm4

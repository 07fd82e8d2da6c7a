#include "gm4/triangulate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <set>

namespace gm4 {

namespace {

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool in_circle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    const double det = adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
                       ad * (bdx * cdy - bdy * cdx);
    return det > 1e-14;
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
    const double o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

struct Tri {
    std::array<int, 3> v{-1, -1, -1};
    std::array<int, 3> n{-1, -1, -1};  // n[k] across edge (v[k+1], v[k+2])
    bool alive = false;
};

struct Builder {
    std::vector<Vec2> pts;
    std::vector<Tri> tris;
    std::vector<int> incident;  // vertex -> an alive triangle containing it
    std::set<std::pair<int, int>> constrained;
    int last_alive = 0;

    static std::pair<int, int> ekey(int a, int b) { return {std::min(a, b), std::max(a, b)}; }
    bool is_constrained(int a, int b) const { return constrained.count(ekey(a, b)) > 0; }

    void note_incident(int slot) {
        for (int k = 0; k < 3; ++k) incident[static_cast<size_t>(tris[static_cast<size_t>(slot)].v[k])] = slot;
    }

    int edge_index(const Tri& t, int a, int b) const {
        for (int k = 0; k < 3; ++k) {
            const int u = t.v[(k + 1) % 3], w = t.v[(k + 2) % 3];
            if ((u == a && w == b) || (u == b && w == a)) return k;
        }
        return -1;
    }
    int vertex_index(const Tri& t, int a) const {
        for (int k = 0; k < 3; ++k)
            if (t.v[k] == a) return k;
        return -1;
    }

    int locate(const Vec2& p) const {
        int cur = last_alive;
        if (cur >= static_cast<int>(tris.size()) || !tris[static_cast<size_t>(cur)].alive) cur = -1;
        if (cur < 0)
            for (int t = static_cast<int>(tris.size()) - 1; t >= 0; --t)
                if (tris[static_cast<size_t>(t)].alive) { cur = t; break; }
        for (int steps = 0; cur >= 0 && steps < static_cast<int>(tris.size()) * 4; ++steps) {
            const Tri& t = tris[static_cast<size_t>(cur)];
            int next = -1;
            for (int k = 0; k < 3; ++k) {
                const Vec2& a = pts[static_cast<size_t>(t.v[(k + 1) % 3])];
                const Vec2& b = pts[static_cast<size_t>(t.v[(k + 2) % 3])];
                if (orient2d(a, b, p) < -1e-14) {
                    next = t.n[k];
                    break;
                }
            }
            if (next < 0) return cur;
            cur = next;
        }
        for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
            const Tri& tt = tris[static_cast<size_t>(t)];
            if (!tt.alive) continue;
            bool inside = true;
            for (int k = 0; k < 3 && inside; ++k)
                if (orient2d(pts[static_cast<size_t>(tt.v[(k + 1) % 3])],
                             pts[static_cast<size_t>(tt.v[(k + 2) % 3])], p) < -1e-12)
                    inside = false;
            if (inside) return t;
        }
        throw MeshInconsistent("point location failed");
    }

    void insert_point(int pi) {
        const Vec2& p = pts[static_cast<size_t>(pi)];
        const int seed = locate(p);

        std::vector<int> cavity;
        std::vector<char> mark(tris.size(), 0);
        std::deque<int> queue{seed};
        mark[static_cast<size_t>(seed)] = 1;
        while (!queue.empty()) {
            const int ti = queue.front();
            queue.pop_front();
            cavity.push_back(ti);
            const Tri t = tris[static_cast<size_t>(ti)];
            for (int k = 0; k < 3; ++k) {
                const int nb = t.n[k];
                if (nb < 0 || mark[static_cast<size_t>(nb)]) continue;
                if (is_constrained(t.v[(k + 1) % 3], t.v[(k + 2) % 3])) continue;
                const Tri& o = tris[static_cast<size_t>(nb)];
                if (in_circle(pts[static_cast<size_t>(o.v[0])], pts[static_cast<size_t>(o.v[1])],
                              pts[static_cast<size_t>(o.v[2])], p)) {
                    mark[static_cast<size_t>(nb)] = 1;
                    queue.push_back(nb);
                }
            }
        }

        struct BEdge {
            int a, b, outside;
        };
        std::vector<BEdge> boundary;
        for (int ti : cavity) {
            const Tri& t = tris[static_cast<size_t>(ti)];
            for (int k = 0; k < 3; ++k) {
                const int nb = t.n[k];
                if (nb >= 0 && mark[static_cast<size_t>(nb)]) continue;
                boundary.push_back({t.v[(k + 1) % 3], t.v[(k + 2) % 3], nb});
            }
        }
        std::vector<int> free_slots = cavity;
        for (int ti : cavity) tris[static_cast<size_t>(ti)].alive = false;

        std::vector<int> created;
        for (const BEdge& e : boundary) {
            Tri nt;
            nt.v = {pi, e.a, e.b};
            nt.n = {e.outside, -1, -1};
            nt.alive = true;
            int slot;
            if (!free_slots.empty()) {
                slot = free_slots.back();
                free_slots.pop_back();
                tris[static_cast<size_t>(slot)] = nt;
            } else {
                slot = static_cast<int>(tris.size());
                tris.push_back(nt);
            }
            created.push_back(slot);
            if (e.outside >= 0) {
                Tri& out = tris[static_cast<size_t>(e.outside)];
                const int k = edge_index(out, e.a, e.b);
                if (k >= 0) out.n[k] = slot;
            }
        }
        // Stitch fan triangles: (pi, a, b) borders (pi, b, c) across (b, pi)
        // and (pi, c, a) across (pi, a).
        for (int slot : created) {
            Tri& t = tris[static_cast<size_t>(slot)];
            for (int other : created) {
                if (other == slot) continue;
                const Tri& o = tris[static_cast<size_t>(other)];
                if (o.v[1] == t.v[2]) t.n[1] = other;
                if (o.v[2] == t.v[1]) t.n[2] = other;
            }
            note_incident(slot);
        }
        if (!created.empty()) last_alive = created.front();
    }

    // Rotates around vertex a and returns the triangle whose interior the ray
    // a->b enters (its opposite edge is crossed by the segment), or -1 when
    // (a, b) is already an edge.
    int corridor_start(int a, int b) {
        const Vec2& pa = pts[static_cast<size_t>(a)];
        const Vec2& pb = pts[static_cast<size_t>(b)];
        int t0 = incident[static_cast<size_t>(a)];
        if (t0 < 0 || !tris[static_cast<size_t>(t0)].alive || vertex_index(tris[static_cast<size_t>(t0)], a) < 0) {
            t0 = -1;
            for (int t = 0; t < static_cast<int>(tris.size()); ++t)
                if (tris[static_cast<size_t>(t)].alive && vertex_index(tris[static_cast<size_t>(t)], a) >= 0) {
                    t0 = t;
                    break;
                }
            if (t0 < 0) throw MeshInconsistent("lost vertex during constraint recovery");
        }
        int cur = t0;
        for (int guard = 0; guard < 1 << 16; ++guard) {
            const Tri& t = tris[static_cast<size_t>(cur)];
            const int k = vertex_index(t, a);
            const int u = t.v[(k + 1) % 3], w = t.v[(k + 2) % 3];
            if (u == b || w == b) return -1;
            const double ou = orient2d(pa, pb, pts[static_cast<size_t>(u)]);
            const double ow = orient2d(pa, pb, pts[static_cast<size_t>(w)]);
            if (ou > 0 && ow < 0 && segments_cross(pa, pb, pts[static_cast<size_t>(u)], pts[static_cast<size_t>(w)]))
                return cur;
            // Rotate CCW around a: cross edge (a, w).
            const int nb = t.n[(k + 1) % 3];
            if (nb < 0) throw MeshInconsistent("open fan during constraint recovery");
            cur = nb;
            if (cur == t0) break;
        }
        throw MeshInconsistent("constraint corridor not found");
    }

    void insert_constraint(int a, int b) {
        if (a == b) return;
        for (int guard = 0; guard < 1 << 14; ++guard) {
            const int start = corridor_start(a, b);
            if (start < 0) {
                constrained.insert(ekey(a, b));
                return;
            }
            // Collect corridor edges crossed by (a, b).
            const Vec2& pa = pts[static_cast<size_t>(a)];
            const Vec2& pb = pts[static_cast<size_t>(b)];
            std::deque<std::pair<int, int>> crossings;  // (vertex u, vertex w) edges
            int cur = start;
            int entry_k = vertex_index(tris[static_cast<size_t>(cur)], a);
            for (int steps = 0; steps < 1 << 14; ++steps) {
                const Tri& t = tris[static_cast<size_t>(cur)];
                const int u = t.v[(entry_k + 1) % 3], w = t.v[(entry_k + 2) % 3];
                if (is_constrained(u, w))
                    throw MeshInconsistent("constraint segments intersect");
                crossings.push_back({u, w});
                const int nb = t.n[entry_k];
                if (nb < 0) throw MeshInconsistent("constraint leaves the triangulation");
                const Tri& o = tris[static_cast<size_t>(nb)];
                const int j = [&] {
                    for (int m = 0; m < 3; ++m)
                        if (o.v[m] != u && o.v[m] != w) return m;
                    throw MeshInconsistent("degenerate neighbor");
                }();
                const int far = o.v[j];
                if (far == b) break;
                // The segment exits o through (far, u) or (far, w).
                const double of = orient2d(pa, pb, pts[static_cast<size_t>(far)]);
                if (of > 0) {
                    // continue through edge (far, w): opposite vertex is u-side
                    entry_k = edge_index(o, far, w) >= 0 ? [&] {
                        for (int m = 0; m < 3; ++m)
                            if (o.v[m] != far && o.v[m] != w) return m;
                        return -1;
                    }() : -1;
                } else {
                    entry_k = [&] {
                        for (int m = 0; m < 3; ++m)
                            if (o.v[m] != far && o.v[m] != u) return m;
                        return -1;
                    }();
                }
                if (entry_k < 0) throw MeshInconsistent("corridor walk failed");
                cur = nb;
            }
            // Flip the first flippable crossing; then restart the walk.
            bool flipped = false;
            for (const auto& [u, w] : crossings) {
                // Find the edge (u, w) and its two triangles.
                int ti = -1, k = -1;
                const int t0 = incident[static_cast<size_t>(u)];
                (void)t0;
                for (int t = 0; t < static_cast<int>(tris.size()) && ti < 0; ++t) {
                    const Tri& tt = tris[static_cast<size_t>(t)];
                    if (!tt.alive) continue;
                    const int e = edge_index(tt, u, w);
                    if (e >= 0) {
                        ti = t;
                        k = e;
                    }
                }
                if (ti < 0) continue;
                const int oi = tris[static_cast<size_t>(ti)].n[static_cast<size_t>(k)];
                if (oi < 0) continue;
                const Tri& t = tris[static_cast<size_t>(ti)];
                const Tri& o = tris[static_cast<size_t>(oi)];
                const int j = [&] {
                    for (int m = 0; m < 3; ++m)
                        if (o.v[m] != u && o.v[m] != w) return m;
                    return -1;
                }();
                const int tip = t.v[static_cast<size_t>(k)], op = o.v[static_cast<size_t>(j)];
                if (!segments_cross(pts[static_cast<size_t>(tip)], pts[static_cast<size_t>(op)],
                                    pts[static_cast<size_t>(u)], pts[static_cast<size_t>(w)]))
                    continue;  // non-convex quad; try another crossing
                flip(ti, k);
                flipped = true;
                break;
            }
            if (!flipped) throw MeshInconsistent("no flippable edge on constraint corridor");
        }
        throw MeshInconsistent("constraint recovery did not terminate");
    }

    void flip(int ti, int k) {
        const int oi = tris[static_cast<size_t>(ti)].n[static_cast<size_t>(k)];
        Tri t = tris[static_cast<size_t>(ti)];
        Tri o = tris[static_cast<size_t>(oi)];
        int j = -1;
        for (int m = 0; m < 3; ++m)
            if (o.n[m] == ti) j = m;
        if (j < 0) throw MeshInconsistent("broken adjacency in flip");
        const int tip = t.v[static_cast<size_t>(k)];
        const int a = t.v[(k + 1) % 3], b2 = t.v[(k + 2) % 3];
        const int op = o.v[static_cast<size_t>(j)];

        const int tB = t.n[(k + 1) % 3];  // across (b2, tip)
        const int tC = t.n[(k + 2) % 3];  // across (tip, a)
        const int o_a_op = o.n[(j + 1) % 3];   // across (a, op)
        const int o_op_b = o.n[(j + 2) % 3];   // across (op, b2)

        Tri nt;
        nt.v = {tip, a, op};
        nt.n = {o_a_op, oi, tC};
        nt.alive = true;
        Tri no;
        no.v = {tip, op, b2};
        no.n = {o_op_b, tB, ti};
        no.alive = true;
        tris[static_cast<size_t>(ti)] = nt;
        tris[static_cast<size_t>(oi)] = no;

        auto fix = [&](int slot, int old_nb, int new_nb) {
            if (slot < 0) return;
            Tri& x = tris[static_cast<size_t>(slot)];
            for (int m = 0; m < 3; ++m)
                if (x.n[m] == old_nb) x.n[m] = new_nb;
        };
        fix(o_a_op, oi, ti);
        fix(tB, ti, oi);
        note_incident(ti);
        note_incident(oi);
    }
};

}  // namespace

TriMesh constrained_delaunay(const std::vector<Vec2>& points,
                             const std::vector<std::pair<int, int>>& constraints) {
    Builder b;
    b.pts = points;
    b.incident.assign(points.size() + 3, -1);
    double lo_x = 1e30, lo_y = 1e30, hi_x = -1e30, hi_y = -1e30;
    for (const Vec2& p : points) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    const double cx = (lo_x + hi_x) / 2, cy = (lo_y + hi_y) / 2;
    const double R = 4.0 * std::max(hi_x - lo_x, std::max(hi_y - lo_y, 1e-6));
    const int s0 = static_cast<int>(b.pts.size());
    b.pts.push_back({cx - 2.6 * R, cy - 1.5 * R});
    b.pts.push_back({cx + 2.6 * R, cy - 1.5 * R});
    b.pts.push_back({cx, cy + 2.9 * R});
    Tri super;
    super.v = {s0, s0 + 1, s0 + 2};
    super.alive = true;
    b.tris.push_back(super);
    b.note_incident(0);

    for (int i = 0; i < static_cast<int>(points.size()); ++i) b.insert_point(i);
    for (const auto& [a, c] : constraints) b.insert_constraint(a, c);

    std::vector<char> outside(b.tris.size(), 0);
    std::deque<int> queue;
    for (int t = 0; t < static_cast<int>(b.tris.size()); ++t) {
        const Tri& tt = b.tris[static_cast<size_t>(t)];
        if (!tt.alive) continue;
        if (tt.v[0] >= s0 || tt.v[1] >= s0 || tt.v[2] >= s0) {
            outside[static_cast<size_t>(t)] = 1;
            queue.push_back(t);
        }
    }
    while (!queue.empty()) {
        const int t = queue.front();
        queue.pop_front();
        const Tri& tt = b.tris[static_cast<size_t>(t)];
        for (int k = 0; k < 3; ++k) {
            const int nb = tt.n[k];
            if (nb < 0 || outside[static_cast<size_t>(nb)] || !b.tris[static_cast<size_t>(nb)].alive) continue;
            if (b.is_constrained(tt.v[(k + 1) % 3], tt.v[(k + 2) % 3])) continue;
            outside[static_cast<size_t>(nb)] = 1;
            queue.push_back(nb);
        }
    }

    TriMesh mesh;
    mesh.points = points;
    for (int t = 0; t < static_cast<int>(b.tris.size()); ++t) {
        const Tri& tt = b.tris[static_cast<size_t>(t)];
        if (!tt.alive || outside[static_cast<size_t>(t)]) continue;
        if (tt.v[0] >= s0 || tt.v[1] >= s0 || tt.v[2] >= s0) continue;
        mesh.triangles.push_back(tt.v);
    }
    return mesh;
}

}  // namespace gm4

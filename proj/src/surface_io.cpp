#include "gm4/surface_io.hpp"

#include <fstream>
#include <sstream>

namespace gm4 {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int find_chart(const Atlas& atlas, const std::string& name, int line) {
    for (size_t i = 0; i < atlas.charts.size(); ++i)
        if (atlas.charts[i].name == name) return static_cast<int>(i);
    throw ParseError("unknown chart '" + name + "'", line, 1);
}

}  // namespace

Atlas parse_surface(const std::string& text) {
    Atlas atlas;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    Chart* chart = nullptr;
    GlueEdge* pending_glue = nullptr;
    int coord_count = 0;

    while (std::getline(is, raw)) {
        ++line;
        const size_t hash = raw.find('#');
        std::string s = strip(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        std::istringstream ls(s);
        std::string key;
        ls >> key;
        std::string rest = strip(s.substr(key.size()));

        if (key == "name") {
            atlas.name = rest;
        } else if (key == "closed" || key == "embedded") {
            if (rest != "true" && rest != "false")
                throw ParseError("expected true or false", line, 1);
            (key == "closed" ? atlas.closed : atlas.embedded) = rest == "true";
        } else if (key == "topology_hint") {
            atlas.topology_hint = std::stoi(rest);
        } else if (key == "param") {
            const auto toks = split_ws(rest);
            if (toks.size() != 2) throw ParseError("param needs a name and a value", line, 1);
            atlas.params[toks[0]] = std::stod(toks[1]);
        } else if (key == "option") {
            const auto toks = split_ws(rest);
            if (toks.size() != 2) throw ParseError("option needs a name and a value", line, 1);
            if (toks[0] == "grid") atlas.options.grid = std::stoi(toks[1]);
            else if (toks[0] == "mesh_grid") atlas.options.mesh_grid = std::stoi(toks[1]);
            else if (toks[0] == "quad_grid") atlas.options.quad_grid = std::stoi(toks[1]);
            else if (toks[0] == "tol") atlas.options.tol = std::stod(toks[1]);
            else throw ParseError("unknown option '" + toks[0] + "'", line, 1);
        } else if (key == "chart") {
            atlas.charts.emplace_back();
            chart = &atlas.charts.back();
            chart->name = rest;
            pending_glue = nullptr;
            coord_count = 0;
        } else if (key == "coord") {
            if (!chart) throw ParseError("coord outside a chart block", line, 1);
            if (coord_count >= 4) throw ParseError("more than four coord lines", line, 1);
            chart->coords[static_cast<size_t>(coord_count++)] = parse_expr(rest, line);
        } else if (key == "domain") {
            if (!chart) throw ParseError("domain outside a chart block", line, 1);
            std::istringstream ds(rest);
            std::string kind;
            ds >> kind;
            if (kind == "rect") {
                chart->domain.kind = Domain::Kind::Rect;
                if (!(ds >> chart->domain.u0 >> chart->domain.u1 >> chart->domain.v0 >>
                      chart->domain.v1))
                    throw ParseError("rect domain needs four numbers", line, 1);
            } else if (kind == "implicit") {
                chart->domain.kind = Domain::Kind::Implicit;
                const std::string exprs = strip(rest.substr(kind.size() + 1));
                const size_t semi = exprs.find(';');
                chart->domain.h = parse_expr(
                    strip(semi == std::string::npos ? exprs : exprs.substr(0, semi)), line);
                if (semi != std::string::npos)
                    chart->domain.k = parse_expr(strip(exprs.substr(semi + 1)), line);
            } else {
                throw ParseError("unknown domain kind '" + kind + "'", line, 1);
            }
        } else if (key == "bbox") {
            if (!chart) throw ParseError("bbox outside a chart block", line, 1);
            std::istringstream ds(rest);
            if (!(ds >> chart->domain.u0 >> chart->domain.u1 >> chart->domain.v0 >>
                  chart->domain.v1))
                throw ParseError("bbox needs four numbers", line, 1);
        } else if (key == "orientation") {
            if (!chart) throw ParseError("orientation outside a chart block", line, 1);
            chart->orientation = std::stoi(rest) >= 0 ? +1 : -1;
        } else if (key == "glue") {
            chart = nullptr;
            const auto toks = split_ws(rest);
            if (toks.empty()) throw ParseError("glue needs a kind", line, 1);
            atlas.glue.emplace_back();
            GlueEdge& g = atlas.glue.back();
            if (toks[0] == "identity") {
                if (toks.size() != 4) throw ParseError("glue identity A B h|k", line, 1);
                g.kind = GlueEdge::Kind::Identity;
                g.chart_a = find_chart(atlas, toks[1], line);
                g.chart_b = find_chart(atlas, toks[2], line);
                if (toks[3] != "h" && toks[3] != "k")
                    throw ParseError("identity boundary must be h or k", line, 1);
                g.boundary = toks[3][0];
                pending_glue = nullptr;
            } else if (toks[0] == "param") {
                if (toks.size() != 3 && toks.size() != 4)
                    throw ParseError("glue param A B [reversed]", line, 1);
                g.kind = GlueEdge::Kind::Param;
                g.chart_a = find_chart(atlas, toks[1], line);
                g.chart_b = find_chart(atlas, toks[2], line);
                g.reversed = toks.size() == 4 && toks[3] == "reversed";
                pending_glue = &g;
            } else {
                throw ParseError("unknown glue kind '" + toks[0] + "'", line, 1);
            }
        } else if (key == "acurve" || key == "bcurve") {
            if (!pending_glue) throw ParseError(key + " outside a glue param block", line, 1);
            const size_t semi = rest.find(';');
            if (semi == std::string::npos)
                throw ParseError(key + " needs '<u-expr> ; <v-expr>'", line, 1);
            ExprPtr ue = parse_expr(strip(rest.substr(0, semi)), line);
            ExprPtr ve = parse_expr(strip(rest.substr(semi + 1)), line);
            if (key == "acurve") {
                pending_glue->au = ue;
                pending_glue->av = ve;
            } else {
                pending_glue->bu = ue;
                pending_glue->bv = ve;
            }
        } else {
            throw ParseError("unknown key '" + key + "'", line, 1);
        }
    }

    if (atlas.charts.empty()) throw ParseError("surface file declares no charts", line, 1);
    for (const Chart& c : atlas.charts) {
        for (int i = 0; i < 4; ++i)
            if (!c.coords[static_cast<size_t>(i)])
                throw ParseError("chart '" + c.name + "' is missing coord lines", line, 1);
        if (c.domain.kind == Domain::Kind::Implicit && !c.domain.h)
            throw ParseError("chart '" + c.name + "' has no implicit domain exprs", line, 1);
    }
    for (const GlueEdge& g : atlas.glue)
        if (g.kind == GlueEdge::Kind::Param && (!g.au || !g.av || !g.bu || !g.bv))
            throw ParseError("glue param block is missing acurve/bcurve", line, 1);
    return atlas;
}

Atlas load_surface(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open surface file '" + path + "'", 0, 0);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_surface(ss.str());
}

std::string print_surface(const Atlas& atlas) {
    std::ostringstream os;
    os.precision(17);
    os << "name " << atlas.name << "\n";
    os << "closed " << (atlas.closed ? "true" : "false") << "\n";
    os << "embedded " << (atlas.embedded ? "true" : "false") << "\n";
    if (atlas.topology_hint) os << "topology_hint " << *atlas.topology_hint << "\n";
    for (const auto& [k, v] : atlas.params) os << "param " << k << " " << v << "\n";
    os << "option grid " << atlas.options.grid << "\n";
    os << "option mesh_grid " << atlas.options.mesh_grid << "\n";
    os << "option quad_grid " << atlas.options.quad_grid << "\n";
    os << "option tol " << atlas.options.tol << "\n";
    for (const Chart& c : atlas.charts) {
        os << "\nchart " << c.name << "\n";
        for (int i = 0; i < 4; ++i) os << "coord " << c.coords[static_cast<size_t>(i)]->print() << "\n";
        if (c.domain.kind == Domain::Kind::Rect) {
            os << "domain rect " << c.domain.u0 << " " << c.domain.u1 << " " << c.domain.v0 << " "
               << c.domain.v1 << "\n";
        } else {
            os << "domain implicit " << c.domain.h->print();
            if (c.domain.k) os << " ; " << c.domain.k->print();
            os << "\n";
            os << "bbox " << c.domain.u0 << " " << c.domain.u1 << " " << c.domain.v0 << " "
               << c.domain.v1 << "\n";
        }
        os << "orientation " << (c.orientation > 0 ? "+1" : "-1") << "\n";
    }
    for (const GlueEdge& g : atlas.glue) {
        if (g.kind == GlueEdge::Kind::Identity) {
            os << "glue identity " << atlas.chart(g.chart_a).name << " "
               << atlas.chart(g.chart_b).name << " " << g.boundary << "\n";
        } else {
            os << "glue param " << atlas.chart(g.chart_a).name << " " << atlas.chart(g.chart_b).name
               << (g.reversed ? " reversed" : "") << "\n";
            os << "acurve " << g.au->print() << " ; " << g.av->print() << "\n";
            os << "bcurve " << g.bu->print() << " ; " << g.bv->print() << "\n";
        }
    }
    return os.str();
}

}  // namespace gm4

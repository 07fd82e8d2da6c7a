#include "gm4/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gm4/svg.hpp"

namespace gm4 {

namespace {

void apply_options(Atlas& atlas, const CommandOptions& opts) {
    for (const auto& [k, v] : opts.param_overrides) atlas.params[k] = v;
    if (opts.grid) {
        atlas.options.grid = *opts.grid;
        atlas.options.quad_grid = *opts.grid;
    }
    if (opts.tol) atlas.options.tol = *opts.tol;
}

std::string header(const Atlas& atlas, const std::string& command) {
    std::ostringstream os;
    os << "# gm4 " << command << "\n";
    os << "surface = " << atlas.name << "\n";
    os << "grid = " << atlas.options.grid << "\n";
    os << "mesh_grid = " << atlas.options.mesh_grid << "\n";
    os << "quad_grid = " << atlas.options.quad_grid << "\n";
    os << "tol = " << atlas.options.tol << "\n";
    for (const auto& [k, v] : atlas.params) os << "param." << k << " = " << v << "\n";
    return os.str();
}

void write_outputs(const CommandOptions& opts, CommandOutput& out) {
    if (!opts.report_path.empty()) {
        std::ofstream f(opts.report_path);
        f << out.report;
    }
    if (!opts.svg_path.empty() && !out.svg.empty()) {
        std::ofstream f(opts.svg_path);
        f << out.svg;
    }
}

Vec2 orthographic(const Vec3& p, int comp) {
    // Project the component sphere to the plane orthogonal to its first axis;
    // points are distinguished by the sign of the first coordinate elsewhere.
    (void)comp;
    return {p.y, p.z};
}

}  // namespace

CommandOutput cmd_invariants(Atlas atlas, const CommandOptions& opts) {
    apply_options(atlas, opts);
    CommandOutput out;
    std::ostringstream os;
    os.precision(12);
    os << header(atlas, "invariants");
    if (opts.point) {
        const auto [u, v] = *opts.point;
        bool found = false;
        for (const Chart& chart : atlas.charts) {
            if (!chart.domain.contains(u, v, atlas.params)) continue;
            found = true;
            const InvariantSample s = invariants_at(chart, u, v, atlas.params, 1);
            const double j1 = jacobian_by_pullback(chart, u, v, 1, atlas.params);
            const double j2 = jacobian_by_pullback(chart, u, v, 2, atlas.params);
            os << "chart = " << chart.name << "\n";
            os << "u = " << u << "\nv = " << v << "\n";
            os << "K = " << s.K << "\nKN = " << s.KN << "\n";
            os << "Delta = " << s.Delta << "\nH2 = " << s.H2 << "\n";
            os << "Jg1 = " << s.Jg1 << "\nJg2 = " << s.Jg2 << "\n";
            os << "Jg1_pullback = " << j1 << "\nJg2_pullback = " << j2 << "\n";
        }
        if (!found)
            throw OutOfDomain("point (" + std::to_string(u) + ", " + std::to_string(v) +
                              ") lies in no chart domain");
    } else {
        const int n = std::max(16, atlas.options.grid / 8);
        for (const Chart& chart : atlas.charts) {
            double maxK = 0, maxKN = 0, minDelta = 1e300, maxDelta = -1e300, maxH2 = 0;
            long count = 0;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const double u =
                        chart.domain.u0 + (chart.domain.u1 - chart.domain.u0) * (i + 0.5) / n;
                    const double v =
                        chart.domain.v0 + (chart.domain.v1 - chart.domain.v0) * (j + 0.5) / n;
                    if (!chart.domain.contains(u, v, atlas.params)) continue;
                    try {
                        const InvariantSample s = invariants_at(chart, u, v, atlas.params, 1);
                        maxK = std::max(maxK, std::fabs(s.K));
                        maxKN = std::max(maxKN, std::fabs(s.KN));
                        minDelta = std::min(minDelta, s.Delta);
                        maxDelta = std::max(maxDelta, s.Delta);
                        maxH2 = std::max(maxH2, s.H2);
                        ++count;
                    } catch (const std::runtime_error&) {
                    }
                }
            os << "chart = " << chart.name << "\n";
            os << "samples = " << count << "\n";
            os << "max_abs_K = " << maxK << "\n";
            os << "max_abs_KN = " << maxKN << "\n";
            os << "min_Delta = " << minDelta << "\n";
            os << "max_Delta = " << maxDelta << "\n";
            os << "max_H2 = " << maxH2 << "\n";
        }
    }
    out.report = os.str();
    write_outputs(opts, out);
    return out;
}

CommandOutput cmd_singular(Atlas atlas, const CommandOptions& opts) {
    apply_options(atlas, opts);
    CommandOutput out;
    const int comp = opts.component;
    TraceResult trace = trace_singular_set(atlas, comp, atlas.options.grid);
    const G1Report g1 = check_G1(atlas, trace, comp);
    classify_points(atlas, trace, comp);

    std::ostringstream os;
    os.precision(12);
    os << header(atlas, "singular");
    os << "component = " << comp << "\n";
    os << "g1_pass = " << (g1.pass ? "true" : "false") << "\n";
    os << "gradient_vanishes = " << (g1.gradient_vanishes ? "true" : "false") << "\n";
    os << "curves = " << trace.curves.size() << "\n";
    CurveFigure fig;
    fig.title = atlas.name + " g" + std::to_string(comp);
    for (size_t i = 0; i < trace.curves.size(); ++i) {
        const SingularCurve& c = trace.curves[i];
        os << "curve" << i << ".points = " << c.pts.size() << "\n";
        os << "curve" << i << ".closed = " << (c.closed ? "true" : "false") << "\n";
        os << "curve" << i << ".cusps = " << c.cusps.size() << "\n";
        int folds = 0;
        for (const auto& p : c.pts)
            if (p.fold) ++folds;
        os << "curve" << i << ".folds = " << folds << "\n";
        for (size_t k = 0; k < c.cusps.size(); ++k) {
            const CuspRecord& r = c.cusps[k];
            os << "curve" << i << ".cusp" << k << " = " << r.u << " " << r.v << " sign "
               << r.sign << " chart " << atlas.chart(r.chart).name << "\n";
        }
        std::vector<Vec2> dom, img;
        for (const auto& p : c.pts) {
            dom.push_back({p.u, p.v});
            try {
                const FrameJets f =
                    darboux_frame(atlas.chart(p.chart), p.u, p.v, 1, atlas.params);
                const auto bj = component_jets(f, comp);
                img.push_back(orthographic({bj[0].value(), bj[1].value(), bj[2].value()}, comp));
            } catch (const std::runtime_error&) {
            }
        }
        fig.domain_curves.push_back(dom);
        fig.image_curves.push_back(img);
        for (const auto& r : c.cusps) {
            fig.domain_cusps.push_back({r.u, r.v});
            fig.image_cusps.push_back(orthographic(r.image, comp));
        }
    }
    out.report = os.str();
    out.svg = render_curve_figure(fig);
    write_outputs(opts, out);
    return out;
}

CommandOutput cmd_verify_gb(Atlas atlas, const CommandOptions& opts) {
    apply_options(atlas, opts);
    CommandOutput out;
    GBOptions gb;
    gb.trace_grid = atlas.options.grid;
    gb.mesh_grid = atlas.options.mesh_grid;
    gb.quad_grid = atlas.options.quad_grid;
    const GBReport rep = gauss_bonnet_report(atlas, gb);
    out.report = header(atlas, "verify-gb") + gb_report_text(atlas, rep);
    if (!rep.genericity_ok) {
        write_outputs(opts, out);
        throw GenericityViolation("genericity conditions fail; identities not asserted");
    }
    bool ok = rep.chi_matches_hint;
    for (int i = 0; i < 2; ++i) {
        const GBComponentReport& c = rep.comp[i];
        if (!c.deg_integer_ok || c.degree_identity_residual != 0 || c.chi_additivity_residual != 0) ok = false;
        if (std::fabs(c.gb1_residual) > 0.02 * 2 * 3.14159265358979 * std::max(1, std::abs(rep.chi_mesh)))
            ok = false;
    }
    if (std::fabs(rep.KdA_residual) > 0.05 || std::fabs(rep.NdA_residual) > 0.05) ok = false;
    out.exit_code = ok ? 0 : 1;
    std::ostringstream os;
    os << out.report << "identities_pass = " << (ok ? "true" : "false") << "\n";
    out.report = os.str();
    write_outputs(opts, out);
    return out;
}

CommandOutput cmd_genericity(Atlas atlas, const CommandOptions& opts) {
    apply_options(atlas, opts);
    CommandOutput out;
    std::ostringstream os;
    os.precision(12);
    os << header(atlas, "genericity");
    for (int comp = 1; comp <= 2; ++comp) {
        TraceResult trace = trace_singular_set(atlas, comp, atlas.options.grid);
        const G1Report g1 = check_G1(atlas, trace, comp);
        classify_points(atlas, trace, comp);
        const G2Report g2 = check_G2(atlas, trace, g1);
        const G3Report g3 = check_G3(atlas, trace, comp);
        const std::string p = "comp" + std::to_string(comp) + ".";
        os << p << "g1_pass = " << (g1.pass ? "true" : "false") << "\n";
        os << p << "g1_vacuous = " << (g1.vacuous ? "true" : "false") << "\n";
        os << p << "gradient_vanishes = " << (g1.gradient_vanishes ? "true" : "false") << "\n";
        os << p << "min_grad = " << g1.min_grad << "\n";
        os << p << "g2_pass = " << (g2.pass ? "true" : "false") << "\n";
        os << p << "folds = " << g2.fold_points << "\n";
        os << p << "cusps = " << g2.cusp_count << "\n";
        os << p << "g3_pass = " << (g3.pass ? "true" : "false") << "\n";
        os << p << "g3_pairs = " << g3.coincident_pairs << "\n";
    }
    const RankScanReport rs = rank_scan(atlas, std::max(32, atlas.options.grid / 4));
    os << "rank_scan.points = " << rs.points_scanned << "\n";
    os << "rank_scan.rank_drops = " << rs.rank_drops.size() << "\n";
    os << "rank_scan.characterization_ok = " << (rs.characterization_ok ? "true" : "false")
       << "\n";
    for (size_t i = 0; i < rs.rank_drops.size() && i < 16; ++i) {
        const RankScanEntry& e = rs.rank_drops[i];
        os << "rank_drop" << i << " = chart " << atlas.chart(e.chart).name << " u " << e.u
           << " v " << e.v << " K " << e.K << " Delta " << e.Delta << "\n";
    }
    out.report = os.str();
    write_outputs(opts, out);
    return out;
}

int run_command(const std::string& command, const std::string& surface_path,
                const CommandOptions& opts, std::string* out_text) {
    try {
        Atlas atlas = load_surface(surface_path);
        CommandOutput out;
        if (command == "invariants") out = cmd_invariants(std::move(atlas), opts);
        else if (command == "singular") out = cmd_singular(std::move(atlas), opts);
        else if (command == "verify-gb") out = cmd_verify_gb(std::move(atlas), opts);
        else if (command == "genericity") out = cmd_genericity(std::move(atlas), opts);
        else {
            if (out_text) *out_text = "unknown command " + command + "\n";
            return 2;
        }
        if (out_text) *out_text = out.report;
        else std::cout << out.report;
        return out.exit_code;
    } catch (const ParseError& e) {
        if (out_text) *out_text = std::string("parse error: ") + e.what() + "\n";
        else std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownIdentifier& e) {
        if (out_text) *out_text = std::string("parse error: ") + e.what() + "\n";
        else std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const NotClosedSurface& e) {
        if (out_text) *out_text = std::string("error: ") + e.what() + "\n";
        else std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const GenericityViolation& e) {
        if (out_text) *out_text = std::string("genericity: ") + e.what() + "\n";
        else std::cerr << "genericity: " << e.what() << "\n";
        return 5;
    } catch (const DomainError& e) {
        if (out_text) *out_text = std::string("domain error: ") + e.what() + "\n";
        else std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const OutOfDomain& e) {
        if (out_text) *out_text = std::string("domain error: ") + e.what() + "\n";
        else std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        if (out_text) *out_text = std::string("error: ") + e.what() + "\n";
        else std::cerr << "error: " << e.what() << "\n";
        return 10;
    }
}

}  // namespace gm4

////////////////////////////////////////////////////////////////////////////////
// topology.hpp
//
// Region decomposition by the sign of K +/- KN, Euler characteristics of the
// glued complex, and the Gauss-Bonnet-type identity report.  Charts are
// triangulated with the traced singular curves as constrained edge chains, so
// no triangle straddles a curve; boundary vertices are identified across
// glued charts by their ambient positions, making V - E + F of the glued
// complex the Euler characteristic of the closed surface.
//
// Open regions: chi(M+) and chi(M-) count only cells interior to the region
// (faces, plus edges and vertices whose entire star carries one label), so
// chi(M) = chi(M+) + chi(M-) + chi(Sigma) holds exactly, with
// chi(Sigma) = 0 for disjoint circles.
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include "gm4/quadrature.hpp"
#include "gm4/triangulate.hpp"

namespace gm4 {

struct GenericityViolation : std::runtime_error {
    explicit GenericityViolation(const std::string& what) : std::runtime_error(what) {}
};

struct RegionDecomposition {
    int comp = 1;
    int V = 0, E = 0, F = 0;
    int chi_total = 0;
    int chi_plus = 0, chi_minus = 0;
    int chi_sigma = 0;
    int sigma_edges = 0;
    int straddling = 0;       // triangles or vertices with inconsistent labels
    int boundary_unglued = 0; // edges with a single incident triangle
};

RegionDecomposition decompose(const Atlas& atlas, const TraceResult& trace, int comp,
                              int mesh_grid);

struct GBComponentReport {
    int comp = 1;
    bool g1_pass = false, g2_pass = false, g3_pass = false;
    bool g1_vacuous = false;
    bool gradient_vanishes = false;
    int curve_count = 0;
    int chi_plus = 0, chi_minus = 0;
    int s_plus = 0, s_minus = 0, s_unclassified = 0;
    double deg_raw = 0;
    int deg = 0;
    bool deg_integer_ok = false;
    double int_abs = 0;        // integral of |K +/- KN| dA
    double kg = 0;             // integral of kappa_g along the image curves
    double gb1_residual = 0;   // 2 pi chi - int_abs - 2 kg
    int degree_identity_residual = 0;    // 2 deg - (chi+ - chi- + S+ - S-)
    int chi_additivity_residual = 0;  // chi - (chi+ + chi- + chi_sigma)
    double chMp_residual = 0;  // chi - chi+ - (S+ - S-)/2        (embeddings)
    double chMm_residual = 0;  // chi- - (S+ - S-)/2              (embeddings)
};

struct GBReport {
    bool genericity_ok = false;
    double glue_error = 0;
    int chi_mesh = 0;
    bool chi_matches_hint = true;
    double int_K = 0, int_KN = 0;
    double int_K_err = 0, int_KN_err = 0;
    double KdA_residual = 0;  // (1/pi) int K dA - sum_i (chi+ - chi- + S+ - S-)
    double NdA_residual = 0;
    GBComponentReport comp[2];
    std::string notes;
};

struct GBOptions {
    int trace_grid = 512;
    int mesh_grid = 96;
    int quad_grid = 512;
};

GBReport gauss_bonnet_report(const Atlas& atlas, const GBOptions& opts);

// Line-oriented key = value serialization used by the command layer.
std::string gb_report_text(const Atlas& atlas, const GBReport& report);

}  // namespace gm4

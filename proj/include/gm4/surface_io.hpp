////////////////////////////////////////////////////////////////////////////////
// surface_io.hpp
//
// Line-oriented surface definition files.  '#' begins a comment; keys are:
//
//   name <word>                      closed <true|false>
//   embedded <true|false>            topology_hint <int>
//   param <name> <value>             option <grid|mesh_grid|quad_grid> <int>
//   option tol <real>
//
//   chart <name>                     starts a chart block, followed by
//     coord <expr>                   exactly four coord lines
//     domain rect <u0> <u1> <v0> <v1>
//     domain implicit <h-expr> ; <k-expr>   (k optional)
//     bbox <u0> <u1> <v0> <v1>       required for implicit domains
//     orientation <+1|-1>
//
//   glue identity <chartA> <chartB> <h|k>
//   glue param <chartA> <chartB> [reversed]  followed by
//     acurve <u-expr> ; <v-expr>     curves in the parameter s in [0,1]
//     bcurve <u-expr> ; <v-expr>
//
// Unknown keys are rejected with their line number.  print_surface() emits a
// document that parses back to an equivalent atlas.
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include "gm4/atlas.hpp"

namespace gm4 {

Atlas parse_surface(const std::string& text);
Atlas load_surface(const std::string& path);
std::string print_surface(const Atlas& atlas);

}  // namespace gm4

////////////////////////////////////////////////////////////////////////////////
// triangulate.hpp
//
// Constrained Delaunay triangulation of a planar straight-line graph:
// Bowyer-Watson insertion for the points, Sloan-style edge flipping to
// recover constraint segments, and a flood fill from the super-triangle to
// discard everything outside the outermost constrained loop.
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gm4/geom.hpp"

namespace gm4 {

struct MeshInconsistent : std::runtime_error {
    explicit MeshInconsistent(const std::string& what) : std::runtime_error(what) {}
};

struct TriMesh {
    std::vector<Vec2> points;                    // input points (no super vertices)
    std::vector<std::array<int, 3>> triangles;   // CCW, indices into points
};

// `constraints` are index pairs into `points`; they become mesh edges.  The
// boundary of the region must be present among the constraints as one or
// more closed loops; triangles outside are removed.
TriMesh constrained_delaunay(const std::vector<Vec2>& points,
                             const std::vector<std::pair<int, int>>& constraints);

}  // namespace gm4

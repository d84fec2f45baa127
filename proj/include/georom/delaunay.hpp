#pragma once

#include "georom/geometry.hpp"

#include <Eigen/Core>
#include <vector>

namespace georom {

/// Constrained Delaunay triangulation of a simple CCW polygon with optional
/// interior points. Polygon vertices keep their indices (0..n_poly-1) in the
/// output; every polygon segment appears as a mesh edge; triangles outside
/// the polygon are discarded. Intended for the desk-scale domains here, not
/// as a general-purpose mesher.
struct Triangulation {
    Points vertices;
    Eigen::Matrix<int, Eigen::Dynamic, 3> triangles;
};

Triangulation triangulate_polygon(const Points& polygon, const Points& interior_points);

/// Interior points on a hex lattice with spacing h, kept at distance
/// > clearance from every polygon segment.
Points hex_lattice_interior(const Points& polygon, double h, double clearance);

} // namespace georom

#pragma once

#include "georom/geometry.hpp"

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

namespace georom {

/// Triangular mesh with the edge data needed for Taylor-Hood P2-P1 elements.
/// The P2 node of edge e has global index n_vertices() + e and sits at the
/// edge midpoint. Triangles are positively oriented.
struct Mesh {
    Points vertices;                              // nv x 2
    Eigen::Matrix<int, Eigen::Dynamic, 3> triangles; // nt x 3, CCW
    Eigen::Matrix<int, Eigen::Dynamic, 2> edges;     // ne x 2, v0 < v1
    Eigen::Matrix<int, Eigen::Dynamic, 3> tri_edges; // nt x 3, local edge k joins vertices k, (k+1)%3
    std::vector<BoundaryTag> edge_tags;              // ne, interior for inner edges

    int n_vertices() const { return static_cast<int>(vertices.rows()); }
    int n_edges() const { return static_cast<int>(edges.rows()); }
    int n_triangles() const { return static_cast<int>(triangles.rows()); }
    int n_p2_nodes() const { return n_vertices() + n_edges(); }

    /// Coordinates of a P2 node (vertex or edge midpoint).
    Point2 p2_node(int i) const {
        if (i < n_vertices()) return vertices.row(i).transpose();
        const int e = i - n_vertices();
        return 0.5 * (vertices.row(edges(e, 0)) + vertices.row(edges(e, 1))).transpose();
    }

    std::vector<int> boundary_edge_indices() const;

    void validate() const;
};

/// Assembles edge data from raw vertices/triangles, fixes orientation, and
/// tags boundary edges via the classifier (called with the edge midpoint).
Mesh build_mesh(Points vertices, Eigen::Matrix<int, Eigen::Dynamic, 3> triangles,
                const std::function<BoundaryTag(const Point2&)>& boundary_classifier);

/// Ordered boundary vertices, counterclockwise starting at the inlet corner
/// with the smallest (y, x). Segment tags follow the mesh boundary edges.
Shape extract_boundary_cps(const Mesh& mesh);

void write_gmesh(const Mesh& mesh, const std::string& path);
Mesh read_gmesh(const std::string& path);

} // namespace georom

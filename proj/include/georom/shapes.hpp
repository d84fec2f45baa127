#pragma once

#include "georom/geometry.hpp"
#include "georom/mesh.hpp"

#include <array>

namespace georom {

/// Gaussian bump parameters of the stenosis boundaries (sigma in [0.8, 2] mm,
/// mu in [6, 14] mm inside the 20 x 2 mm channel).
struct StenosisParams {
    double sigma1 = 1.0;
    double mu1 = 10.0;
    double sigma2 = 1.0;
    double mu2 = 10.0;
};

/// Displacements of the four bifurcation control points, each component in
/// [-0.5, 0.5] mm. Layout: point-major, (dx, dy) pairs.
struct BifurcationParams {
    std::array<Point2, 4> displacements{Point2::Zero(), Point2::Zero(), Point2::Zero(),
                                        Point2::Zero()};
};

/// Dimensions of the Y-shaped bifurcation domain. Defaults follow the
/// reference configuration; all lengths in mm, angle in degrees.
struct BifurcationGeometry {
    double channel_length = 8.0;
    double channel_width = 2.0;
    double branch_angle_deg = 35.0;
    double branch_width = 1.4;
    double branch_length = 8.0;
    double fillet_radius = 0.5;
    double deform_kernel_width = 2.0; // Gaussian width of the boundary interpolant

    /// Locations whose nearest boundary vertices act as deformation controls:
    /// both outer junction fillets and both branch outer-wall midpoints.
    std::array<Point2, 4> control_locations() const;
};

inline constexpr double kStenosisLength = 20.0; // L1
inline constexpr double kStenosisWidth = 2.0;   // L0

double stenosis_lower_boundary(double x, const StenosisParams& p);
double stenosis_upper_boundary(double x, const StenosisParams& p);

/// Channel boundary sampled with n points (even, >= 8) split between the long
/// and short sides in the aspect ratio of the rectangle, counterclockwise from
/// the inlet lower corner. Throws when the boundaries intersect.
Shape generate_stenosis_shape(const StenosisParams& p, int n_boundary_points);

/// Reference bifurcation boundary displaced by a Gaussian-kernel interpolant
/// of the four control displacements; inlet/outlet points stay fixed.
Shape generate_bifurcation_shape(const BifurcationParams& p, const Shape& base,
                                 const BifurcationGeometry& geom = {});

/// Boundary vertices of `base` nearest to geom.control_locations().
std::array<int, 4> bifurcation_control_vertices(const Shape& base, const BifurcationGeometry& geom = {});

enum class Case { stenosis, bifurcation };

/// Reference meshes: structured rectangle for the stenosis (row-mirrored
/// diagonal split, so the mesh is symmetric about the midline), constrained
/// Delaunay for the bifurcation.
Mesh generate_reference_mesh(Case c, double resolution, const BifurcationGeometry& geom = {});

/// Structured rectangle mesh of [0,length] x [0,width]; ny should be even for
/// a y-symmetric triangulation.
Mesh rectangle_mesh(int nx, int ny, double length, double width);

/// Transfinite mesh of the deformed stenosis domain (direct-solve reference):
/// the rectangle mesh with every vertex blended between the Gaussian
/// boundaries.
Mesh stenosis_domain_mesh(const StenosisParams& p, int nx, int ny);

/// Counterclockwise polygon of the base bifurcation boundary at target edge
/// length h, with per-segment tags.
Shape bifurcation_base_polygon(double h, const BifurcationGeometry& geom = {});

/// Unstructured mesh of an arbitrary simple polygon (used for direct solves
/// on deformed bifurcation domains).
Mesh polygon_mesh(const Shape& boundary, double resolution);

} // namespace georom

#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace georom {

using Point2 = Eigen::Vector2d;
using Points = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Boundary tags shared by shapes, meshes and the FEM boundary conditions.
enum class BoundaryTag : int { interior = 0, inlet = 1, wall = 2, outlet = 3 };

class invalid_argument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Closed oriented polyline of boundary points. Segment i connects point i to
/// point (i+1) mod n and carries one boundary tag. Traversal is
/// counterclockwise (positive signed area) so tangent vectors are well defined.
struct Shape {
    Points points;                     // n x 2, ordered
    std::vector<BoundaryTag> seg_tags; // one per segment

    int n_points() const { return static_cast<int>(points.rows()); }
    int n_segments() const { return n_points(); }

    Point2 point(int i) const { return points.row(i).transpose(); }
    Point2 segment_start(int s) const { return point(s); }
    Point2 segment_end(int s) const { return point((s + 1) % n_points()); }

    /// Throws invalid_argument when a Shape invariant is broken.
    void validate() const;

    /// Twice the enclosed area, positive for counterclockwise traversal.
    double signed_area2() const;

    /// True when no two non-adjacent segments intersect.
    bool is_simple() const;
};

/// Proper intersection test between segments [a,b] and [c,d], shared
/// endpoints excluded by the caller.
bool segments_intersect(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

void write_shape_csv(const Shape& shape, const std::string& path);
Shape read_shape_csv(const std::string& path);

} // namespace georom

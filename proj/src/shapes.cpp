#include "georom/shapes.hpp"

#include "georom/delaunay.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

namespace georom {

namespace {

double gaussian_bump(double x, double sigma, double mu) {
    return std::exp(-(x - mu) * (x - mu) / (2.0 * sigma * sigma)) /
           std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
}

void check_stenosis_params(const StenosisParams& p) {
    auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
    if (!in(p.sigma1, 0.8, 2.0) || !in(p.sigma2, 0.8, 2.0))
        throw invalid_argument("StenosisParams: sigma outside [0.8, 2]");
    const double lo = 0.3 * kStenosisLength, hi = 0.7 * kStenosisLength;
    if (!in(p.mu1, lo, hi) || !in(p.mu2, lo, hi))
        throw invalid_argument("StenosisParams: mu outside [6, 14]");
}

// n boundary points -> intervals per side, long:short in the aspect ratio
std::pair<int, int> rectangle_split(int n, double length, double width) {
    if (n < 8 || n % 2 != 0)
        throw invalid_argument("boundary point count must be even and >= 8, got " + std::to_string(n));
    const int half = n / 2;
    int ny = std::max(1, static_cast<int>(std::lround(half * width / (length + width))));
    if (ny >= half) ny = half - 1;
    return {half - ny, ny};
}

// CCW rectangle boundary from the lower-left corner; nx intervals on the long
// sides, ny on the short ones
Points rectangle_boundary(int nx, int ny, double length, double width) {
    Points pts(2 * (nx + ny), 2);
    int k = 0;
    for (int i = 0; i < nx; ++i) pts.row(k++) << length * i / nx, 0.0;
    for (int j = 0; j < ny; ++j) pts.row(k++) << length, width * j / ny;
    for (int i = nx; i > 0; --i) pts.row(k++) << length * i / nx, width;
    for (int j = ny; j > 0; --j) pts.row(k++) << 0.0, width * j / ny;
    return pts;
}

std::vector<BoundaryTag> rectangle_tags(int nx, int ny) {
    std::vector<BoundaryTag> tags;
    tags.insert(tags.end(), static_cast<size_t>(nx), BoundaryTag::wall);
    tags.insert(tags.end(), static_cast<size_t>(ny), BoundaryTag::outlet);
    tags.insert(tags.end(), static_cast<size_t>(nx), BoundaryTag::wall);
    tags.insert(tags.end(), static_cast<size_t>(ny), BoundaryTag::inlet);
    return tags;
}

Point2 stenosis_blend(const Point2& p, const StenosisParams& sp) {
    const double lo = stenosis_lower_boundary(p.x(), sp);
    const double up = stenosis_upper_boundary(p.x(), sp);
    return {p.x(), lo + p.y() / kStenosisWidth * (up - lo)};
}

} // namespace

double stenosis_lower_boundary(double x, const StenosisParams& p) {
    return gaussian_bump(x, p.sigma1, p.mu1);
}

double stenosis_upper_boundary(double x, const StenosisParams& p) {
    return kStenosisWidth - gaussian_bump(x, p.sigma2, p.mu2);
}

Shape generate_stenosis_shape(const StenosisParams& p, int n_boundary_points) {
    check_stenosis_params(p);
    const auto [nx, ny] = rectangle_split(n_boundary_points, kStenosisLength, kStenosisWidth);

    // degenerate if the bumps meet anywhere (sampled finely between points)
    const int n_check = 20 * n_boundary_points;
    for (int i = 0; i <= n_check; ++i) {
        const double x = kStenosisLength * i / n_check;
        if (stenosis_upper_boundary(x, p) <= stenosis_lower_boundary(x, p))
            throw numerical_error("generate_stenosis_shape: boundaries intersect at x = " + std::to_string(x));
    }

    Shape s;
    s.points = rectangle_boundary(nx, ny, kStenosisLength, kStenosisWidth);
    for (int i = 0; i < s.points.rows(); ++i)
        s.points.row(i) = stenosis_blend(s.points.row(i).transpose(), p).transpose();
    s.seg_tags = rectangle_tags(nx, ny);
    s.validate();
    return s;
}

Mesh rectangle_mesh(int nx, int ny, double length, double width) {
    if (nx < 1 || ny < 1) throw invalid_argument("rectangle_mesh: need nx, ny >= 1");
    Points vertices((nx + 1) * (ny + 1), 2);
    for (int j = 0; j <= ny; ++j) {
        // mirror-exact y coordinates so the mesh is symmetric about the midline
        const double y = (2 * j <= ny) ? width * j / ny : width - width * (ny - j) / ny;
        for (int i = 0; i <= nx; ++i) vertices.row(j * (nx + 1) + i) << length * i / nx, y;
    }
    Eigen::Matrix<int, Eigen::Dynamic, 3> triangles(2 * nx * ny, 3);
    int t = 0;
    for (int j = 0; j < ny; ++j) {
        const bool lower_half = j <= ny - 1 - j;
        for (int i = 0; i < nx; ++i) {
            const int a = j * (nx + 1) + i, b = a + 1;
            const int d = a + (nx + 1), c = d + 1;
            if (lower_half) { // diagonal a-c, mirrored in the top half
                triangles.row(t++) << a, b, c;
                triangles.row(t++) << a, c, d;
            } else {
                triangles.row(t++) << a, b, d;
                triangles.row(t++) << b, c, d;
            }
        }
    }
    const double tol = 1e-9 * length;
    return build_mesh(std::move(vertices), std::move(triangles), [=](const Point2& mid) {
        if (mid.x() < tol) return BoundaryTag::inlet;
        if (mid.x() > length - tol) return BoundaryTag::outlet;
        return BoundaryTag::wall;
    });
}

Mesh stenosis_domain_mesh(const StenosisParams& p, int nx, int ny) {
    check_stenosis_params(p);
    Mesh ref = rectangle_mesh(nx, ny, kStenosisLength, kStenosisWidth);
    Points vertices = ref.vertices;
    for (int i = 0; i < vertices.rows(); ++i)
        vertices.row(i) = stenosis_blend(vertices.row(i).transpose(), p).transpose();
    const double tol = 1e-9 * kStenosisLength;
    return build_mesh(std::move(vertices), std::move(ref.triangles), [=](const Point2& mid) {
        if (mid.x() < tol) return BoundaryTag::inlet;
        if (mid.x() > kStenosisLength - tol) return BoundaryTag::outlet;
        return BoundaryTag::wall;
    });
}

// ---------------------------------------------------------------------------
// bifurcation geometry

namespace {

// corner/tangent bookkeeping of the Y-domain, upper half (lower is a mirror)
struct BifurcationFrame {
    double hw, bw, c, s;
    Point2 axis_dir, wall_normal; // branch axis d and its left normal
    Point2 junction;
    Point2 outer_center, outer_t_channel, outer_t_branch; // outer fillet
    Point2 crotch_center, crotch_t_upper;                 // crotch fillet
    Point2 end_outer, end_inner;                          // branch cap corners

    explicit BifurcationFrame(const BifurcationGeometry& g) {
        hw = 0.5 * g.channel_width;
        bw = 0.5 * g.branch_width;
        const double th = g.branch_angle_deg * std::numbers::pi / 180.0;
        c = std::cos(th);
        s = std::sin(th);
        axis_dir = {c, s};
        wall_normal = {-s, c};
        junction = {g.channel_length, 0.0};
        const double r = g.fillet_radius;

        // both junction corners are reflex seen from the fluid, so the fillet
        // centres sit on the solid side of both wall lines

        // outer corner: channel wall y = hw meets the branch outer wall
        const Point2 outer_base = junction + bw * wall_normal;
        const double t_center = (hw + r - (outer_base.y() + r * wall_normal.y())) / s;
        outer_center = outer_base + r * wall_normal + t_center * axis_dir;
        outer_t_channel = {outer_center.x(), hw};
        outer_t_branch = outer_base + (outer_center - outer_base).dot(axis_dir) * axis_dir;

        // crotch: the inner walls meet on the axis; centre inside the wedge
        const Point2 inner_base = junction - bw * wall_normal;
        crotch_center = {junction.x() + (bw + r) / s, 0.0};
        crotch_t_upper = inner_base + (crotch_center - inner_base).dot(axis_dir) * axis_dir;

        const Point2 end = junction + g.branch_length * axis_dir;
        end_outer = end + bw * wall_normal;
        end_inner = end - bw * wall_normal;

        // tangent points must land on the physical wall segments
        const Point2 outer_corner(junction.x() + (hw - bw * c) / s * c - bw * s, hw);
        const Point2 crotch_point(junction.x() + bw / s, 0.0);
        const bool ok = outer_t_channel.x() > 0 && outer_t_channel.x() < outer_corner.x() &&
                        (outer_t_branch - outer_corner).dot(axis_dir) > 0 &&
                        (end_outer - outer_t_branch).dot(axis_dir) > 0 &&
                        (crotch_t_upper - crotch_point).dot(axis_dir) > 0 &&
                        (end_inner - crotch_t_upper).dot(axis_dir) > 0 && crotch_t_upper.y() > 0;
        if (!ok) throw invalid_argument("BifurcationGeometry: fillets do not fit the walls");
    }
};

struct PathPiece {
    enum Kind { line, arc } kind;
    Point2 a, b;       // line endpoints
    Point2 center;     // arc
    double radius = 0, ang0 = 0, ang1 = 0;
    BoundaryTag tag = BoundaryTag::wall;

    double length() const {
        return kind == line ? (b - a).norm() : std::abs(ang1 - ang0) * radius;
    }
    Point2 at(double u) const { // u in [0,1]
        if (kind == line) return a + u * (b - a);
        const double ang = ang0 + u * (ang1 - ang0);
        return center + radius * Point2(std::cos(ang), std::sin(ang));
    }
};

PathPiece make_arc(const Point2& center, double radius, const Point2& from, const Point2& to,
                   BoundaryTag tag) {
    PathPiece p;
    p.kind = PathPiece::arc;
    p.center = center;
    p.radius = radius;
    p.ang0 = std::atan2(from.y() - center.y(), from.x() - center.x());
    p.ang1 = std::atan2(to.y() - center.y(), to.x() - center.x());
    // fillet sweeps are < pi; unwrap accordingly
    if (p.ang1 - p.ang0 > std::numbers::pi) p.ang1 -= 2.0 * std::numbers::pi;
    if (p.ang0 - p.ang1 > std::numbers::pi) p.ang1 += 2.0 * std::numbers::pi;
    p.tag = tag;
    return p;
}

PathPiece make_line(const Point2& a, const Point2& b, BoundaryTag tag) {
    return PathPiece{PathPiece::line, a, b, Point2::Zero(), 0, 0, 0, tag};
}

Point2 mirror(const Point2& p) { return {p.x(), -p.y()}; }

} // namespace

std::array<Point2, 4> BifurcationGeometry::control_locations() const {
    const BifurcationFrame f(*this);
    const double mid_ang = 0.5 * (std::atan2(f.outer_t_channel.y() - f.outer_center.y(),
                                             f.outer_t_channel.x() - f.outer_center.x()) +
                                  std::atan2(f.outer_t_branch.y() - f.outer_center.y(),
                                             f.outer_t_branch.x() - f.outer_center.x()));
    const Point2 fillet_mid =
        f.outer_center + fillet_radius * Point2(std::cos(mid_ang), std::sin(mid_ang));
    const Point2 wall_mid = 0.5 * (f.outer_t_branch + f.end_outer);
    return {fillet_mid, mirror(fillet_mid), wall_mid, mirror(wall_mid)};
}

Shape bifurcation_base_polygon(double h, const BifurcationGeometry& geom) {
    if (h <= 0) throw invalid_argument("bifurcation_base_polygon: resolution must be positive");
    const BifurcationFrame f(geom);
    const Point2 inlet_lo(0.0, -f.hw), inlet_hi(0.0, f.hw);

    std::vector<PathPiece> pieces;
    // counterclockwise from the inlet lower corner
    pieces.push_back(make_line(inlet_lo, mirror(f.outer_t_channel), BoundaryTag::wall));
    pieces.push_back(make_arc(mirror(f.outer_center), geom.fillet_radius, mirror(f.outer_t_channel),
                              mirror(f.outer_t_branch), BoundaryTag::wall));
    pieces.push_back(make_line(mirror(f.outer_t_branch), mirror(f.end_outer), BoundaryTag::wall));
    pieces.push_back(make_line(mirror(f.end_outer), mirror(f.end_inner), BoundaryTag::outlet));
    pieces.push_back(make_line(mirror(f.end_inner), mirror(f.crotch_t_upper), BoundaryTag::wall));
    pieces.push_back(make_arc(f.crotch_center, geom.fillet_radius, mirror(f.crotch_t_upper),
                              f.crotch_t_upper, BoundaryTag::wall));
    pieces.push_back(make_line(f.crotch_t_upper, f.end_inner, BoundaryTag::wall));
    pieces.push_back(make_line(f.end_inner, f.end_outer, BoundaryTag::outlet));
    pieces.push_back(make_line(f.end_outer, f.outer_t_branch, BoundaryTag::wall));
    pieces.push_back(make_arc(f.outer_center, geom.fillet_radius, f.outer_t_branch,
                              f.outer_t_channel, BoundaryTag::wall));
    pieces.push_back(make_line(f.outer_t_channel, inlet_hi, BoundaryTag::wall));
    pieces.push_back(make_line(inlet_hi, inlet_lo, BoundaryTag::inlet));

    std::vector<Point2> pts;
    std::vector<BoundaryTag> tags;
    for (const auto& piece : pieces) {
        const int n = std::max(1, static_cast<int>(std::lround(piece.length() / h)));
        for (int i = 0; i < n; ++i) {
            pts.push_back(piece.at(static_cast<double>(i) / n));
            tags.push_back(piece.tag);
        }
    }

    Shape s;
    s.points.resize(static_cast<int>(pts.size()), 2);
    for (int i = 0; i < s.points.rows(); ++i) s.points.row(i) = pts[static_cast<size_t>(i)].transpose();
    s.seg_tags = std::move(tags);
    s.validate();
    if (s.signed_area2() <= 0) throw numerical_error("bifurcation polygon is not counterclockwise");
    return s;
}

std::array<int, 4> bifurcation_control_vertices(const Shape& base, const BifurcationGeometry& geom) {
    const auto locations = geom.control_locations();
    std::array<int, 4> out{};
    for (size_t k = 0; k < locations.size(); ++k) {
        int best = 0;
        double best_d = std::numeric_limits<double>::max();
        for (int i = 0; i < base.n_points(); ++i) {
            const double d = (base.point(i) - locations[k]).norm();
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        out[k] = best;
    }
    for (size_t a = 0; a < out.size(); ++a)
        for (size_t b = a + 1; b < out.size(); ++b)
            if (out[a] == out[b])
                throw invalid_argument("bifurcation control vertices coincide; boundary too coarse");
    return out;
}

Shape generate_bifurcation_shape(const BifurcationParams& p, const Shape& base,
                                 const BifurcationGeometry& geom) {
    for (const auto& d : p.displacements)
        if (std::abs(d.x()) > 0.5 || std::abs(d.y()) > 0.5)
            throw invalid_argument("BifurcationParams: displacement outside [-0.5, 0.5] mm");

    const auto controls = bifurcation_control_vertices(base, geom);
    const double lambda = geom.deform_kernel_width * geom.deform_kernel_width;

    Eigen::Matrix4d G;
    Eigen::Matrix<double, 4, 2> rhs;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double r2 = (base.point(controls[static_cast<size_t>(i)]) -
                               base.point(controls[static_cast<size_t>(j)]))
                                  .squaredNorm();
            G(i, j) = std::exp(-r2 / lambda);
        }
        rhs.row(i) = p.displacements[static_cast<size_t>(i)].transpose();
    }
    const Eigen::Matrix<double, 4, 2> weights = G.ldlt().solve(rhs);

    // points touching an inlet/outlet segment are pinned
    const int n = base.n_points();
    std::vector<bool> pinned(static_cast<size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        const BoundaryTag t = base.seg_tags[static_cast<size_t>(i)];
        if (t == BoundaryTag::inlet || t == BoundaryTag::outlet) {
            pinned[static_cast<size_t>(i)] = true;
            pinned[static_cast<size_t>((i + 1) % n)] = true;
        }
    }

    Shape out = base;
    for (int i = 0; i < n; ++i) {
        if (pinned[static_cast<size_t>(i)]) continue;
        Point2 disp = Point2::Zero();
        for (int k = 0; k < 4; ++k) {
            const double r2 =
                (base.point(i) - base.point(controls[static_cast<size_t>(k)])).squaredNorm();
            disp += std::exp(-r2 / lambda) * weights.row(k).transpose();
        }
        out.points.row(i) += disp.transpose();
    }
    out.validate();
    if (!out.is_simple())
        throw numerical_error("generate_bifurcation_shape: deformed boundary self-intersects");
    return out;
}

Mesh polygon_mesh(const Shape& boundary, double resolution) {
    if (resolution <= 0) throw invalid_argument("polygon_mesh: resolution must be positive");
    boundary.validate();
    if (!boundary.is_simple()) throw invalid_argument("polygon_mesh: boundary self-intersects");

    const Points interior = hex_lattice_interior(boundary.points, resolution, 0.6 * resolution);
    const Triangulation tri = triangulate_polygon(boundary.points, interior);

    // boundary edges coincide with polygon segments; classify by nearest one
    const Shape& shape = boundary;
    auto classifier = [&shape](const Point2& mid) {
        int best = 0;
        double best_d = std::numeric_limits<double>::max();
        for (int i = 0; i < shape.n_segments(); ++i) {
            const Point2 m = 0.5 * (shape.segment_start(i) + shape.segment_end(i));
            const double d = (m - mid).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        return shape.seg_tags[static_cast<size_t>(best)];
    };
    return build_mesh(tri.vertices, tri.triangles, classifier);
}

namespace {

// P2 nodes on the inlet: one vertex more than edges, plus one midside per edge
void require_resolved_inlet(const Mesh& m) {
    int inlet_edges = 0;
    for (int e : m.boundary_edge_indices())
        if (m.edge_tags[static_cast<size_t>(e)] == BoundaryTag::inlet) ++inlet_edges;
    if (2 * inlet_edges + 1 < 8)
        throw invalid_argument("generate_reference_mesh: resolution too coarse, only " +
                               std::to_string(2 * inlet_edges + 1) + " inlet nodes (need 8)");
}

} // namespace

Mesh generate_reference_mesh(Case c, double resolution, const BifurcationGeometry& geom) {
    if (resolution <= 0) throw invalid_argument("generate_reference_mesh: resolution must be positive");
    if (c == Case::stenosis) {
        const int nx = std::max(4, static_cast<int>(std::lround(kStenosisLength / resolution)));
        int ny = std::max(2, static_cast<int>(std::lround(kStenosisWidth / resolution)));
        ny += ny % 2; // keep the mesh symmetric about the midline
        Mesh m = rectangle_mesh(nx, ny, kStenosisLength, kStenosisWidth);
        require_resolved_inlet(m);
        return m;
    }
    const Shape polygon = bifurcation_base_polygon(resolution, geom);
    Mesh m = polygon_mesh(polygon, resolution);
    require_resolved_inlet(m);
    return m;
}

} // namespace georom

#include "georom/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace georom {

namespace {

struct Tri {
    int v[3];
    bool alive = true;
};

double orient(const Point2& a, const Point2& b, const Point2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
}

// positive when p lies inside the circumcircle of CCW triangle (a,b,c)
double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& p) {
    const double ax = a.x() - p.x(), ay = a.y() - p.y();
    const double bx = b.x() - p.x(), by = b.y() - p.y();
    const double cx = c.x() - p.x(), cy = c.y() - p.y();
    const double a2 = ax * ax + ay * ay;
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

bool point_in_polygon(const Points& poly, const Point2& p) {
    bool inside = false;
    const int n = static_cast<int>(poly.rows());
    for (int i = 0, j = n - 1; i < n; j = i++) {
        const double xi = poly(i, 0), yi = poly(i, 1);
        const double xj = poly(j, 0), yj = poly(j, 1);
        if ((yi > p.y()) != (yj > p.y()) &&
            p.x() < (xj - xi) * (p.y() - yi) / (yj - yi) + xi)
            inside = !inside;
    }
    return inside;
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
    const Point2 ab = b - a;
    const double t = std::clamp(ab.dot(p - a) / ab.squaredNorm(), 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

class Builder {
public:
    std::vector<Point2> pts;
    std::vector<Tri> tris;

    void add_triangle(int a, int b, int c) {
        if (orient(pts[a], pts[b], pts[c]) < 0) std::swap(b, c);
        tris.push_back(Tri{{a, b, c}, true});
    }

    void insert(int pi) {
        const Point2& p = pts[static_cast<size_t>(pi)];
        std::map<std::pair<int, int>, std::pair<int, int>> hull; // undirected -> directed
        for (auto& t : tris) {
            if (!t.alive) continue;
            if (incircle(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], p) <= 0) continue;
            t.alive = false;
            for (int k = 0; k < 3; ++k) {
                const int u = t.v[k], v = t.v[(k + 1) % 3];
                const auto key = std::minmax(u, v);
                auto it = hull.find(key);
                if (it == hull.end())
                    hull.emplace(key, std::make_pair(u, v));
                else
                    hull.erase(it); // shared between two dead triangles: interior
            }
        }
        if (hull.empty()) throw numerical_error("delaunay: point insertion found no cavity");
        for (const auto& [key, dir] : hull) add_triangle(dir.first, dir.second, pi);
    }

    bool edge_exists(int a, int b) const {
        for (const auto& t : tris) {
            if (!t.alive) continue;
            for (int k = 0; k < 3; ++k)
                if ((t.v[k] == a && t.v[(k + 1) % 3] == b) || (t.v[k] == b && t.v[(k + 1) % 3] == a))
                    return true;
        }
        return false;
    }

    // Anglada-style cavity retriangulation after removing the triangles
    // crossed by a missing constraint segment.
    void triangulate_pseudopolygon(int a, int b, const std::vector<int>& chain) {
        if (chain.empty()) return;
        size_t ci = 0;
        for (size_t i = 1; i < chain.size(); ++i)
            if (incircle(pts[a], pts[b], pts[chain[ci]], pts[chain[i]]) > 0) ci = i;
        const int c = chain[ci];
        triangulate_pseudopolygon(a, c, {chain.begin(), chain.begin() + static_cast<long>(ci)});
        triangulate_pseudopolygon(c, b, {chain.begin() + static_cast<long>(ci) + 1, chain.end()});
        add_triangle(a, b, c);
    }

    void recover_edge(int a, int b) {
        if (edge_exists(a, b)) return;
        const Point2 pa = pts[static_cast<size_t>(a)], pb = pts[static_cast<size_t>(b)];

        // gather triangles whose interior the segment crosses
        std::vector<size_t> crossed;
        std::vector<int> upper, lower; // cavity vertices on each side of a->b
        int cur = -1;
        int cross_u = -1, cross_v = -1;
        for (size_t ti = 0; ti < tris.size(); ++ti) {
            const auto& t = tris[ti];
            if (!t.alive) continue;
            for (int k = 0; k < 3; ++k) {
                if (t.v[k] != a) continue;
                const int u = t.v[(k + 1) % 3], v = t.v[(k + 2) % 3];
                if (segments_intersect(pa, pb, pts[u], pts[v]) &&
                    orient(pa, pb, pts[u]) * orient(pa, pb, pts[v]) < 0) {
                    cur = static_cast<int>(ti);
                    cross_u = u;
                    cross_v = v;
                }
            }
            if (cur >= 0) break;
        }
        if (cur < 0) throw numerical_error("delaunay: cannot start constraint recovery");

        auto classify = [&](int w) {
            const double o = orient(pa, pb, pts[w]);
            if (o == 0) throw numerical_error("delaunay: constraint passes through a vertex");
            (o > 0 ? upper : lower).push_back(w);
        };
        crossed.push_back(static_cast<size_t>(cur));
        classify(cross_u);
        classify(cross_v);

        while (true) {
            // the neighbour across (cross_u, cross_v)
            int next = -1;
            for (size_t ti = 0; ti < tris.size(); ++ti) {
                const auto& t = tris[ti];
                if (!t.alive || static_cast<int>(ti) == cur) continue;
                int have = 0;
                for (int k = 0; k < 3; ++k) have += (t.v[k] == cross_u || t.v[k] == cross_v);
                if (have == 2) {
                    next = static_cast<int>(ti);
                    break;
                }
            }
            if (next < 0) throw numerical_error("delaunay: constraint recovery walked off the mesh");
            crossed.push_back(static_cast<size_t>(next));
            int w = -1;
            for (int k = 0; k < 3; ++k)
                if (tris[static_cast<size_t>(next)].v[k] != cross_u &&
                    tris[static_cast<size_t>(next)].v[k] != cross_v)
                    w = tris[static_cast<size_t>(next)].v[k];
            if (w == b) break;
            classify(w);
            if (orient(pa, pb, pts[w]) * orient(pa, pb, pts[cross_u]) > 0)
                cross_u = w;
            else
                cross_v = w;
            cur = next;
        }

        for (size_t ti : crossed) tris[ti].alive = false;
        // upper chain sees the edge as a->b, lower chain as b->a
        triangulate_pseudopolygon(a, b, upper);
        std::reverse(lower.begin(), lower.end());
        triangulate_pseudopolygon(b, a, lower);
    }
};

} // namespace

Points hex_lattice_interior(const Points& polygon, double h, double clearance) {
    const double xmin = polygon.col(0).minCoeff(), xmax = polygon.col(0).maxCoeff();
    const double ymin = polygon.col(1).minCoeff(), ymax = polygon.col(1).maxCoeff();
    const double row_h = h * std::sqrt(3.0) / 2.0;
    std::vector<Point2> keep;
    const int n = static_cast<int>(polygon.rows());
    int row = 0;
    for (double y = ymin + 0.5 * row_h; y < ymax; y += row_h, ++row) {
        const double x0 = xmin + ((row % 2 == 0) ? 0.5 : 1.0) * h * 0.5;
        for (double x = x0; x < xmax; x += h) {
            // deterministic jitter breaks cocircular lattice configurations
            const double jx = 1e-6 * h * std::sin(12.9898 * x + 78.233 * y);
            const double jy = 1e-6 * h * std::sin(39.3468 * x + 11.135 * y);
            const Point2 p(x + jx, y + jy);
            if (!point_in_polygon(polygon, p)) continue;
            bool clear = true;
            for (int i = 0; i < n && clear; ++i) {
                const Point2 a = polygon.row(i).transpose();
                const Point2 b = polygon.row((i + 1) % n).transpose();
                if (point_segment_distance(p, a, b) <= clearance) clear = false;
            }
            if (clear) keep.push_back(p);
        }
    }
    Points out(static_cast<int>(keep.size()), 2);
    for (int i = 0; i < out.rows(); ++i) out.row(i) = keep[static_cast<size_t>(i)].transpose();
    return out;
}

Triangulation triangulate_polygon(const Points& polygon, const Points& interior_points) {
    const int nb = static_cast<int>(polygon.rows());
    const int ni = static_cast<int>(interior_points.rows());
    if (nb < 3) throw invalid_argument("triangulate_polygon: polygon too small");

    Builder bld;
    bld.pts.reserve(static_cast<size_t>(nb + ni + 3));
    for (int i = 0; i < nb; ++i) bld.pts.emplace_back(polygon(i, 0), polygon(i, 1));
    for (int i = 0; i < ni; ++i) bld.pts.emplace_back(interior_points(i, 0), interior_points(i, 1));

    const double xmin = polygon.col(0).minCoeff(), xmax = polygon.col(0).maxCoeff();
    const double ymin = polygon.col(1).minCoeff(), ymax = polygon.col(1).maxCoeff();
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    const double r = 10.0 * std::max(xmax - xmin, ymax - ymin) + 1.0;
    const int s0 = nb + ni, s1 = s0 + 1, s2 = s0 + 2;
    bld.pts.emplace_back(cx - 2.0 * r, cy - r);
    bld.pts.emplace_back(cx + 2.0 * r, cy - r);
    bld.pts.emplace_back(cx, cy + 2.0 * r);
    bld.add_triangle(s0, s1, s2);

    for (int i = 0; i < nb + ni; ++i) bld.insert(i);
    for (int i = 0; i < nb; ++i) bld.recover_edge(i, (i + 1) % nb);

    // drop super-triangle remnants and exterior triangles
    std::vector<std::array<int, 3>> kept;
    for (const auto& t : bld.tris) {
        if (!t.alive) continue;
        if (t.v[0] >= s0 || t.v[1] >= s0 || t.v[2] >= s0) continue;
        const Point2 centroid =
            (bld.pts[t.v[0]] + bld.pts[t.v[1]] + bld.pts[t.v[2]]) / 3.0;
        if (!point_in_polygon(polygon, centroid)) continue;
        kept.push_back({t.v[0], t.v[1], t.v[2]});
    }
    if (kept.empty()) throw numerical_error("triangulate_polygon: no interior triangles");

    // all polygon points are used; interior points might not be (filtered lattice)
    std::vector<int> remap(static_cast<size_t>(nb + ni), -1);
    for (int i = 0; i < nb; ++i) remap[static_cast<size_t>(i)] = i;
    int next = nb;
    for (const auto& t : kept)
        for (int k = 0; k < 3; ++k)
            if (remap[static_cast<size_t>(t[k])] < 0) remap[static_cast<size_t>(t[k])] = next++;

    Triangulation out;
    out.vertices.resize(next, 2);
    for (int i = 0; i < nb + ni; ++i)
        if (remap[static_cast<size_t>(i)] >= 0)
            out.vertices.row(remap[static_cast<size_t>(i)]) = bld.pts[static_cast<size_t>(i)].transpose();
    out.triangles.resize(static_cast<int>(kept.size()), 3);
    for (int t = 0; t < out.triangles.rows(); ++t)
        for (int k = 0; k < 3; ++k)
            out.triangles(t, k) = remap[static_cast<size_t>(kept[static_cast<size_t>(t)][k])];
    return out;
}

} // namespace georom

#include "georom/mesh.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace georom {

namespace {

double tri_area2(const Points& v, int a, int b, int c) {
    return (v(b, 0) - v(a, 0)) * (v(c, 1) - v(a, 1)) - (v(c, 0) - v(a, 0)) * (v(b, 1) - v(a, 1));
}

} // namespace

std::vector<int> Mesh::boundary_edge_indices() const {
    std::vector<int> out;
    for (int e = 0; e < n_edges(); ++e)
        if (edge_tags[static_cast<size_t>(e)] != BoundaryTag::interior) out.push_back(e);
    return out;
}

void Mesh::validate() const {
    if (n_vertices() < 3 || n_triangles() < 1) throw invalid_argument("Mesh: empty");
    std::vector<int> edge_count(static_cast<size_t>(n_edges()), 0);
    for (int t = 0; t < n_triangles(); ++t) {
        if (tri_area2(vertices, triangles(t, 0), triangles(t, 1), triangles(t, 2)) <= 0)
            throw invalid_argument("Mesh: triangle " + std::to_string(t) + " not positively oriented");
        for (int k = 0; k < 3; ++k) ++edge_count[static_cast<size_t>(tri_edges(t, k))];
    }
    for (int e = 0; e < n_edges(); ++e) {
        const bool boundary = edge_tags[static_cast<size_t>(e)] != BoundaryTag::interior;
        const int cnt = edge_count[static_cast<size_t>(e)];
        if (boundary && cnt != 1)
            throw invalid_argument("Mesh: boundary edge " + std::to_string(e) + " has " +
                                   std::to_string(cnt) + " adjacent triangles");
        if (!boundary && cnt != 2)
            throw invalid_argument("Mesh: interior edge " + std::to_string(e) + " has " +
                                   std::to_string(cnt) + " adjacent triangles");
    }
}

Mesh build_mesh(Points vertices, Eigen::Matrix<int, Eigen::Dynamic, 3> triangles,
                const std::function<BoundaryTag(const Point2&)>& boundary_classifier) {
    const int nt = static_cast<int>(triangles.rows());
    for (int t = 0; t < nt; ++t)
        if (tri_area2(vertices, triangles(t, 0), triangles(t, 1), triangles(t, 2)) < 0)
            std::swap(triangles(t, 1), triangles(t, 2));

    // ordered map keeps edge numbering independent of triangle ordering noise
    std::map<std::pair<int, int>, int> edge_index;
    std::vector<int> adjacency;
    Mesh m;
    m.vertices = std::move(vertices);
    m.triangles = triangles;
    m.tri_edges.resize(nt, 3);

    auto edge_of = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = edge_index.find(key);
        if (it == edge_index.end()) {
            it = edge_index.emplace(key, static_cast<int>(edge_index.size())).first;
            adjacency.push_back(0);
        }
        ++adjacency[static_cast<size_t>(it->second)];
        return it->second;
    };

    for (int t = 0; t < nt; ++t)
        for (int k = 0; k < 3; ++k)
            m.tri_edges(t, k) = edge_of(m.triangles(t, k), m.triangles(t, (k + 1) % 3));

    m.edges.resize(static_cast<int>(edge_index.size()), 2);
    for (const auto& [key, e] : edge_index) {
        m.edges(e, 0) = key.first;
        m.edges(e, 1) = key.second;
    }

    m.edge_tags.assign(static_cast<size_t>(m.n_edges()), BoundaryTag::interior);
    for (int e = 0; e < m.n_edges(); ++e) {
        if (adjacency[static_cast<size_t>(e)] == 1) {
            const Point2 mid = 0.5 * (m.vertices.row(m.edges(e, 0)) + m.vertices.row(m.edges(e, 1))).transpose();
            const BoundaryTag tag = boundary_classifier(mid);
            if (tag == BoundaryTag::interior)
                throw invalid_argument("build_mesh: classifier tagged boundary edge at (" +
                                       std::to_string(mid.x()) + ", " + std::to_string(mid.y()) +
                                       ") as interior");
            m.edge_tags[static_cast<size_t>(e)] = tag;
        } else if (adjacency[static_cast<size_t>(e)] != 2) {
            throw invalid_argument("build_mesh: edge with " +
                                   std::to_string(adjacency[static_cast<size_t>(e)]) +
                                   " adjacent triangles");
        }
    }
    m.validate();
    return m;
}

Shape extract_boundary_cps(const Mesh& mesh) {
    const auto boundary = mesh.boundary_edge_indices();
    if (boundary.empty()) throw invalid_argument("extract_boundary_cps: no boundary edges");

    // vertex -> incident boundary edges
    std::map<int, std::vector<int>> incident;
    for (int e : boundary) {
        incident[mesh.edges(e, 0)].push_back(e);
        incident[mesh.edges(e, 1)].push_back(e);
    }
    for (const auto& [v, es] : incident)
        if (es.size() != 2)
            throw invalid_argument("extract_boundary_cps: boundary vertex " + std::to_string(v) +
                                   " has " + std::to_string(es.size()) + " boundary edges");

    // walk the single loop
    std::vector<int> loop_vertices;
    std::vector<int> loop_edges;
    const int start_vertex = mesh.edges(boundary[0], 0);
    int v = start_vertex;
    int prev_edge = -1;
    do {
        loop_vertices.push_back(v);
        const auto& es = incident.at(v);
        const int e = (es[0] == prev_edge) ? es[1] : es[0];
        loop_edges.push_back(e);
        v = (mesh.edges(e, 0) == v) ? mesh.edges(e, 1) : mesh.edges(e, 0);
        prev_edge = e;
    } while (v != start_vertex && loop_vertices.size() <= boundary.size());
    if (loop_vertices.size() != boundary.size())
        throw invalid_argument("extract_boundary_cps: boundary is disconnected");

    auto loop_point = [&](size_t i) {
        return Point2(mesh.vertices(loop_vertices[i], 0), mesh.vertices(loop_vertices[i], 1));
    };

    // force counterclockwise traversal
    double area2 = 0.0;
    for (size_t i = 0; i < loop_vertices.size(); ++i) {
        const Point2 p = loop_point(i);
        const Point2 q = loop_point((i + 1) % loop_vertices.size());
        area2 += p.x() * q.y() - q.x() * p.y();
    }
    if (area2 < 0) {
        std::reverse(loop_vertices.begin(), loop_vertices.end());
        std::reverse(loop_edges.begin(), loop_edges.end());
        // after reversal, edge i connects vertex i to i+1 again
        std::rotate(loop_edges.begin(), loop_edges.end() - 1, loop_edges.end());
    }

    // start at the inlet corner with smallest (y, x)
    size_t start = 0;
    bool found = false;
    for (size_t i = 0; i < loop_vertices.size(); ++i) {
        const size_t prev = (i + loop_vertices.size() - 1) % loop_vertices.size();
        const bool on_inlet =
            mesh.edge_tags[static_cast<size_t>(loop_edges[i])] == BoundaryTag::inlet ||
            mesh.edge_tags[static_cast<size_t>(loop_edges[prev])] == BoundaryTag::inlet;
        if (!on_inlet) continue;
        const Point2 p = loop_point(i);
        if (!found) {
            start = i;
            found = true;
            continue;
        }
        const Point2 best = loop_point(start);
        if (p.y() < best.y() - 1e-12 || (std::abs(p.y() - best.y()) <= 1e-12 && p.x() < best.x()))
            start = i;
    }
    if (!found) throw invalid_argument("extract_boundary_cps: no inlet edge on boundary");

    const int n = static_cast<int>(loop_vertices.size());
    Shape s;
    s.points.resize(n, 2);
    s.seg_tags.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const size_t j = (start + static_cast<size_t>(i)) % loop_vertices.size();
        s.points.row(i) = mesh.vertices.row(loop_vertices[j]);
        s.seg_tags[static_cast<size_t>(i)] = mesh.edge_tags[static_cast<size_t>(loop_edges[j])];
    }
    s.validate();
    return s;
}

void write_gmesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << "GMESH 1\n";
    out << mesh.n_vertices() << ' ' << mesh.n_edges() << ' ' << mesh.n_triangles() << '\n';
    char buf[96];
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", mesh.vertices(i, 0), mesh.vertices(i, 1));
        out << buf;
    }
    for (int e = 0; e < mesh.n_edges(); ++e)
        out << mesh.edges(e, 0) << ' ' << mesh.edges(e, 1) << ' ' << mesh.n_vertices() + e << ' '
            << static_cast<int>(mesh.edge_tags[static_cast<size_t>(e)]) << '\n';
    for (int t = 0; t < mesh.n_triangles(); ++t)
        out << mesh.triangles(t, 0) << ' ' << mesh.triangles(t, 1) << ' ' << mesh.triangles(t, 2) << '\n';
    if (!out) throw io_error("write failed: " + path);
}

Mesh read_gmesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "GMESH") throw io_error(path + ": not a GMESH file");
    if (version != 1) throw io_error(path + ": unsupported GMESH version " + std::to_string(version));
    int nv = 0, ne = 0, nt = 0;
    in >> nv >> ne >> nt;
    if (!in || nv < 3 || ne < 3 || nt < 1) throw io_error(path + ": bad counts");

    Points vertices(nv, 2);
    for (int i = 0; i < nv; ++i) in >> vertices(i, 0) >> vertices(i, 1);

    std::vector<std::array<int, 4>> edge_rows(static_cast<size_t>(ne));
    for (auto& row : edge_rows) in >> row[0] >> row[1] >> row[2] >> row[3];

    Eigen::Matrix<int, Eigen::Dynamic, 3> triangles(nt, 3);
    for (int t = 0; t < nt; ++t) in >> triangles(t, 0) >> triangles(t, 1) >> triangles(t, 2);
    if (!in) throw io_error(path + ": truncated file");

    // tags come from the file; rebuild connectivity, then overlay them
    std::map<std::pair<int, int>, BoundaryTag> tag_of;
    for (int e = 0; e < ne; ++e) {
        const auto& row = edge_rows[static_cast<size_t>(e)];
        if (row[2] != nv + e) throw io_error(path + ": midnode index mismatch on edge " + std::to_string(e));
        tag_of[std::minmax(row[0], row[1])] = static_cast<BoundaryTag>(row[3]);
    }
    Mesh m = build_mesh(std::move(vertices), std::move(triangles), [&](const Point2&) {
        return BoundaryTag::wall; // placeholder, replaced below
    });
    if (m.n_edges() != ne) throw io_error(path + ": edge count inconsistent with triangles");
    for (int e = 0; e < m.n_edges(); ++e) {
        const auto it = tag_of.find(std::minmax(m.edges(e, 0), m.edges(e, 1)));
        if (it == tag_of.end()) throw io_error(path + ": edge table mismatch");
        if (m.edge_tags[static_cast<size_t>(e)] != BoundaryTag::interior)
            m.edge_tags[static_cast<size_t>(e)] = it->second;
        else if (it->second != BoundaryTag::interior)
            throw io_error(path + ": interior edge carries boundary tag");
    }
    m.validate();
    return m;
}

} // namespace georom

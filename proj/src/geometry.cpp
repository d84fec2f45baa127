#include "georom/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace georom {

void Shape::validate() const {
    const int n = n_points();
    if (n < 3) throw invalid_argument("Shape: needs at least 3 points, got " + std::to_string(n));
    if (static_cast<int>(seg_tags.size()) != n)
        throw invalid_argument("Shape: segment tag count " + std::to_string(seg_tags.size()) +
                               " does not match point count " + std::to_string(n));
    for (int i = 0; i < n; ++i) {
        const double sep = (segment_end(i) - segment_start(i)).norm();
        if (!(sep > 1e-12))
            throw invalid_argument("Shape: consecutive points " + std::to_string(i) + ", " +
                                   std::to_string((i + 1) % n) + " closer than 1e-12 mm");
        if (seg_tags[i] == BoundaryTag::interior)
            throw invalid_argument("Shape: segment " + std::to_string(i) + " tagged interior");
    }
    if (!points.allFinite()) throw invalid_argument("Shape: non-finite coordinates");
}

double Shape::signed_area2() const {
    double a2 = 0.0;
    const int n = n_points();
    for (int i = 0; i < n; ++i) {
        const Point2 p = segment_start(i);
        const Point2 q = segment_end(i);
        a2 += p.x() * q.y() - q.x() * p.y();
    }
    return a2;
}

namespace {

double cross2(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

} // namespace

bool segments_intersect(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    const double d1 = cross2(c, d, a);
    const double d2 = cross2(c, d, b);
    const double d3 = cross2(a, b, c);
    const double d4 = cross2(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto on_segment = [](const Point2& p, const Point2& q, const Point2& r) {
        return std::min(p.x(), r.x()) <= q.x() && q.x() <= std::max(p.x(), r.x()) &&
               std::min(p.y(), r.y()) <= q.y() && q.y() <= std::max(p.y(), r.y());
    };
    if (d1 == 0 && on_segment(c, a, d)) return true;
    if (d2 == 0 && on_segment(c, b, d)) return true;
    if (d3 == 0 && on_segment(a, c, b)) return true;
    if (d4 == 0 && on_segment(a, d, b)) return true;
    return false;
}

bool Shape::is_simple() const {
    const int n = n_points();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            // skip adjacent segments (they share an endpoint by construction)
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(segment_start(i), segment_end(i), segment_start(j), segment_end(j)))
                return false;
        }
    }
    return true;
}

void write_shape_csv(const Shape& shape, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << "x,y,tag\n";
    char buf[96];
    for (int i = 0; i < shape.n_points(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d\n", shape.points(i, 0), shape.points(i, 1),
                      static_cast<int>(shape.seg_tags[i]));
        out << buf;
    }
    if (!out) throw io_error("write failed: " + path);
}

Shape read_shape_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,y,tag", 0) != 0)
        throw io_error(path + ": missing shape CSV header");
    std::vector<double> xs, ys;
    std::vector<BoundaryTag> tags;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        double x, y;
        int tag;
        if (!std::getline(ss, cell, ',')) throw io_error(path + ": bad row '" + line + "'");
        x = std::stod(cell);
        if (!std::getline(ss, cell, ',')) throw io_error(path + ": bad row '" + line + "'");
        y = std::stod(cell);
        if (!std::getline(ss, cell, ',')) throw io_error(path + ": bad row '" + line + "'");
        tag = std::stoi(cell);
        xs.push_back(x);
        ys.push_back(y);
        tags.push_back(static_cast<BoundaryTag>(tag));
    }
    Shape s;
    s.points.resize(static_cast<int>(xs.size()), 2);
    for (int i = 0; i < s.points.rows(); ++i) {
        s.points(i, 0) = xs[static_cast<size_t>(i)];
        s.points(i, 1) = ys[static_cast<size_t>(i)];
    }
    s.seg_tags = std::move(tags);
    s.validate();
    return s;
}

} // namespace georom

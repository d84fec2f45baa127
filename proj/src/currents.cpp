#include "georom/currents.hpp"

#include <cmath>

namespace georom {

CurrentsShape::CurrentsShape(const Shape& shape) {
    shape.validate();
    const int n = shape.n_segments();
    centers.resize(n, 2);
    tau.resize(n, 2);
    for (int i = 0; i < n; ++i) {
        const Point2 a = shape.segment_start(i);
        const Point2 b = shape.segment_end(i);
        centers.row(i) = (0.5 * (a + b)).transpose();
        tau.row(i) = (b - a).transpose();
    }
}

double kernel_eval(const Point2& x, const Point2& y, double lambda) {
    return std::exp(-(x - y).squaredNorm() / lambda);
}

double currents_inner_product(const CurrentsShape& a, const CurrentsShape& b, double lambda_w) {
    if (a.n_segments() == 0 || b.n_segments() == 0)
        throw invalid_argument("currents_inner_product: empty shape");
    if (!(lambda_w > 0)) throw invalid_argument("currents_inner_product: lambda_w must be positive");
    double acc = 0.0;
    for (int i = 0; i < a.n_segments(); ++i) {
        // fixed inner order keeps the reduction bit-reproducible
        const Point2 ci = a.centers.row(i).transpose();
        const Point2 ti = a.tau.row(i).transpose();
        double row = 0.0;
        for (int j = 0; j < b.n_segments(); ++j) {
            const double r2 = (ci - b.centers.row(j).transpose()).squaredNorm();
            row += std::exp(-r2 / lambda_w) * ti.dot(b.tau.row(j).transpose());
        }
        acc += row;
    }
    return acc;
}

double currents_dissimilarity(const CurrentsShape& a, const CurrentsShape& b, double lambda_w) {
    const double d = currents_inner_product(a, a, lambda_w) -
                     2.0 * currents_inner_product(a, b, lambda_w) +
                     currents_inner_product(b, b, lambda_w);
    return d < 0.0 ? 0.0 : d; // roundoff can push the RKHS norm slightly negative
}

double currents_dissimilarity_gradient(const Points& points, const CurrentsShape& target,
                                       double lambda_w, Points& grad) {
    const int n = static_cast<int>(points.rows());
    if (n < 3) throw invalid_argument("currents_dissimilarity_gradient: need a closed polyline");

    Points centers(n, 2), tau(n, 2);
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        centers.row(i) = 0.5 * (points.row(i) + points.row(j));
        tau.row(i) = points.row(j) - points.row(i);
    }

    double self = 0.0, cross = 0.0, target_self = 0.0;
    Points dc = Points::Zero(n, 2); // dD/dcenter
    Points dt = Points::Zero(n, 2); // dD/dtau

    for (int i = 0; i < n; ++i) {
        const Point2 ci = centers.row(i).transpose();
        const Point2 ti = tau.row(i).transpose();
        for (int j = 0; j < n; ++j) {
            const Point2 diff = ci - centers.row(j).transpose();
            const double k = std::exp(-diff.squaredNorm() / lambda_w);
            const double dot = ti.dot(tau.row(j).transpose());
            self += k * dot;
            // both (i,j) and (j,i) touch center/tau i; kernel symmetry folds
            // them into a factor 2 on the i-indexed derivative
            dc.row(i) += (-2.0 / lambda_w * k * dot * 2.0) * diff.transpose();
            dt.row(i) += 2.0 * k * tau.row(j);
        }
        for (int j = 0; j < target.n_segments(); ++j) {
            const Point2 diff = ci - target.centers.row(j).transpose();
            const double k = std::exp(-diff.squaredNorm() / lambda_w);
            const double dot = ti.dot(target.tau.row(j).transpose());
            cross += k * dot;
            dc.row(i) -= 2.0 * (-2.0 / lambda_w * k * dot) * diff.transpose();
            dt.row(i) -= 2.0 * k * target.tau.row(j);
        }
    }
    for (int i = 0; i < target.n_segments(); ++i) {
        const Point2 ci = target.centers.row(i).transpose();
        const Point2 ti = target.tau.row(i).transpose();
        double row = 0.0;
        for (int j = 0; j < target.n_segments(); ++j)
            row += std::exp(-(ci - target.centers.row(j).transpose()).squaredNorm() / lambda_w) *
                   ti.dot(target.tau.row(j).transpose());
        target_self += row;
    }

    // chain rule through c_k = (x_k + x_{k+1})/2, tau_k = x_{k+1} - x_k
    grad = Points::Zero(n, 2);
    for (int k = 0; k < n; ++k) {
        const int next = (k + 1) % n;
        grad.row(k) += 0.5 * dc.row(k) - dt.row(k);
        grad.row(next) += 0.5 * dc.row(k) + dt.row(k);
    }

    const double d = self - 2.0 * cross + target_self;
    return d < 0.0 ? 0.0 : d;
}

} // namespace georom

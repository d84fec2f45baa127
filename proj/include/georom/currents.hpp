#pragma once

#include "georom/geometry.hpp"

#include <Eigen/Core>

namespace georom {

/// Gaussian kernel widths: lambda_w drives the currents metric, lambda_v the
/// deformation velocity field. Both enter as exp(-r^2 / lambda).
struct KernelConfig {
    double lambda_w = 1.0;
    double lambda_v = 1.0;

    void validate() const {
        if (!(lambda_w > 0) || !(lambda_v > 0))
            throw invalid_argument("KernelConfig: kernel widths must be positive");
    }
};

/// Discrete current of a closed polyline: one-point (midpoint) quadrature per
/// segment, tangent scaled by segment length standing in for n dS.
struct CurrentsShape {
    Points centers; // segment midpoints
    Points tau;     // end - start per segment

    CurrentsShape() = default;
    explicit CurrentsShape(const Shape& shape);

    int n_segments() const { return static_cast<int>(centers.rows()); }
};

/// exp(-|x - y|^2 / lambda)
double kernel_eval(const Point2& x, const Point2& y, double lambda);

/// Sum_ij K(c_i, c'_j) <tau_i, tau'_j>, the W' inner product of two currents.
double currents_inner_product(const CurrentsShape& a, const CurrentsShape& b, double lambda_w);

/// ||[a] - [b]||^2 in W': <a,a> - 2<a,b> + <b,b>, clamped at zero.
double currents_dissimilarity(const CurrentsShape& a, const CurrentsShape& b, double lambda_w);

/// Dissimilarity of the polyline through `points` (closed, same topology as
/// the target) against a fixed target current, with its gradient w.r.t. the
/// points. Registration's data term.
double currents_dissimilarity_gradient(const Points& points, const CurrentsShape& target,
                                       double lambda_w, Points& grad);

} // namespace georom

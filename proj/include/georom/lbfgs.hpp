#pragma once

#include <Eigen/Core>
#include <functional>

namespace georom {

struct LbfgsOptions {
    int max_iters = 200;
    int memory = 10;
    double grad_tol = 1e-6; // max-norm on the gradient
    double armijo_c1 = 1e-4;
    int max_line_search = 40;
};

struct LbfgsResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int iterations = 0;
    bool converged = false; // gradient tolerance reached
};

/// Limited-memory BFGS with Armijo backtracking. The callback returns the
/// objective and fills the gradient. Accepted objective values are
/// non-increasing by construction.
LbfgsResult lbfgs_minimize(const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& fg,
                           Eigen::VectorXd x0, const LbfgsOptions& opts = {});

} // namespace georom

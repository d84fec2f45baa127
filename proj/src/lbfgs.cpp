#include "georom/lbfgs.hpp"

#include "georom/geometry.hpp"

#include <cmath>
#include <deque>

namespace georom {

LbfgsResult lbfgs_minimize(const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& fg,
                           Eigen::VectorXd x0, const LbfgsOptions& opts) {
    const auto n = x0.size();
    Eigen::VectorXd g(n), g_new(n);
    double f = fg(x0, g);
    if (!std::isfinite(f)) throw numerical_error("lbfgs: objective not finite at the start");

    LbfgsResult best;
    best.x = x0;
    best.f = f;

    struct Pair {
        Eigen::VectorXd s, y;
        double rho;
    };
    std::deque<Pair> history;

    Eigen::VectorXd x = std::move(x0);
    double h0_scale = 1.0;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        if (g.cwiseAbs().maxCoeff() < opts.grad_tol) {
            best.converged = true;
            break;
        }

        // two-loop recursion
        Eigen::VectorXd q = -g;
        std::vector<double> alpha(history.size());
        for (size_t i = history.size(); i-- > 0;) {
            alpha[i] = history[i].rho * history[i].s.dot(q);
            q -= alpha[i] * history[i].y;
        }
        q *= h0_scale;
        for (size_t i = 0; i < history.size(); ++i) {
            const double beta = history[i].rho * history[i].y.dot(q);
            q += (alpha[i] - beta) * history[i].s;
        }
        Eigen::VectorXd dir = std::move(q);
        double slope = g.dot(dir);
        if (!(slope < 0)) { // fall back to steepest descent
            dir = -g;
            slope = g.dot(dir);
            history.clear();
        }

        double step = (iter == 0 && history.empty())
                          ? std::min(1.0, 1.0 / std::max(1e-12, g.cwiseAbs().maxCoeff()))
                          : 1.0;
        double f_new = f;
        bool accepted = false;
        Eigen::VectorXd x_new;
        for (int ls = 0; ls < opts.max_line_search; ++ls) {
            x_new = x + step * dir;
            f_new = fg(x_new, g_new);
            if (std::isfinite(f_new) && f_new <= f + opts.armijo_c1 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // objective at numerical floor

        Pair p;
        p.s = x_new - x;
        p.y = g_new - g;
        const double sy = p.s.dot(p.y);
        if (sy > 1e-12 * p.y.squaredNorm()) {
            p.rho = 1.0 / sy;
            h0_scale = sy / p.y.squaredNorm();
            history.push_back(std::move(p));
            if (static_cast<int>(history.size()) > opts.memory) history.pop_front();
        }

        x = std::move(x_new);
        f = f_new;
        g.swap(g_new);
        best.iterations = iter + 1;
        if (f < best.f) {
            best.f = f;
            best.x = x;
        }
    }
    if (!best.converged && g.cwiseAbs().maxCoeff() < opts.grad_tol) best.converged = true;
    return best;
}

} // namespace georom

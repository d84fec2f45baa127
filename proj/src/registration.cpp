#include "georom/registration.hpp"

#include "georom/lbfgs.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace georom {

Momenta Momenta::zero(int n_steps, int n_cp) {
    Momenta m;
    m.alpha.assign(static_cast<size_t>(n_steps), Points::Zero(n_cp, 2));
    return m;
}

Eigen::VectorXd Momenta::flatten() const {
    Eigen::VectorXd v(static_cast<long>(n_steps()) * n_cp() * 2);
    long k = 0;
    for (const auto& a : alpha)
        for (int i = 0; i < a.rows(); ++i) {
            v[k++] = a(i, 0);
            v[k++] = a(i, 1);
        }
    return v;
}

Momenta Momenta::unflatten(const Eigen::VectorXd& v, int n_steps, int n_cp) {
    if (v.size() != static_cast<long>(n_steps) * n_cp * 2)
        throw invalid_argument("Momenta::unflatten: size mismatch");
    Momenta m = zero(n_steps, n_cp);
    long k = 0;
    for (auto& a : m.alpha)
        for (int i = 0; i < n_cp; ++i) {
            a(i, 0) = v[k++];
            a(i, 1) = v[k++];
        }
    return m;
}

void RegistrationConfig::validate() const {
    kernel.validate();
    if (n_steps < 1) throw invalid_argument("RegistrationConfig: n_steps must be >= 1");
    if (max_iters < 1 || grad_tol <= 0 || armijo_c1 <= 0 || max_line_search < 1)
        throw invalid_argument("RegistrationConfig: bad optimizer settings");
}

namespace {

Eigen::MatrixXd kernel_matrix(const Points& x, double lambda) {
    const int n = static_cast<int>(x.rows());
    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            const double v = std::exp(-(x.row(i) - x.row(j)).squaredNorm() / lambda);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

// cross-kernel K(q_i, s_j) for passive points against flow sources
Eigen::MatrixXd cross_kernel(const Points& queries, const Points& sources, double lambda) {
    Eigen::MatrixXd k(queries.rows(), sources.rows());
    for (int i = 0; i < queries.rows(); ++i)
        for (int j = 0; j < sources.rows(); ++j)
            k(i, j) = std::exp(-(queries.row(i) - sources.row(j)).squaredNorm() / lambda);
    return k;
}

// d/dX of sum_ij K_ij(X) <w_i, a_j> for symmetric Gaussian K over one point set
Points kernel_sum_x_gradient(const Eigen::MatrixXd& k, const Points& x, const Points& w,
                             const Points& a, double lambda) {
    const Eigen::MatrixXd c = w * a.transpose();
    const Eigen::MatrixXd s = k.cwiseProduct(c + c.transpose());
    const Eigen::VectorXd r = s.rowwise().sum();
    return (-2.0 / lambda) * (r.asDiagonal() * x - s * x);
}

struct ForwardPass {
    FlowTrajectory flow;
    std::vector<Eigen::MatrixXd> k_state; // kernel over states[s]
    std::vector<Eigen::MatrixXd> k_mid;   // kernel over midstates[s]
    double energy = 0.0;
};

ForwardPass run_forward(const Points& cp_initial, const Momenta& momenta, double lambda_v) {
    const int n_steps = momenta.n_steps();
    if (n_steps < 1) throw invalid_argument("flow_forward: empty momenta");
    if (momenta.n_cp() != cp_initial.rows())
        throw invalid_argument("flow_forward: momenta CP count does not match initial positions");
    const double dt = 1.0 / n_steps;

    ForwardPass fp;
    fp.flow.states.reserve(static_cast<size_t>(n_steps) + 1);
    fp.flow.states.push_back(cp_initial);
    for (int s = 0; s < n_steps; ++s) {
        const Points& x = fp.flow.states.back();
        const Points& a = momenta.alpha[static_cast<size_t>(s)];
        fp.k_state.push_back(kernel_matrix(x, lambda_v));
        const Points vel = fp.k_state.back() * a;
        const Points mid = x + 0.5 * dt * vel;
        fp.k_mid.push_back(kernel_matrix(mid, lambda_v));
        const Points mid_vel = fp.k_mid.back() * a;
        Points next = x + dt * mid_vel;
        if (!next.allFinite())
            throw numerical_error("flow_forward: non-finite CP positions at step " + std::to_string(s) +
                                  " (diverging momenta)");
        fp.energy += dt * a.cwiseProduct(fp.k_state.back() * a).sum();
        fp.flow.midstates.push_back(std::move(mid));
        fp.flow.states.push_back(std::move(next));
    }
    return fp;
}

} // namespace

FlowTrajectory flow_forward(const Points& cp_initial, const Momenta& momenta, double lambda_v) {
    if (!(lambda_v > 0)) throw invalid_argument("flow_forward: lambda_v must be positive");
    return run_forward(cp_initial, momenta, lambda_v).flow;
}

Points transport_points(const Points& points, const FlowTrajectory& flow, const Momenta& momenta,
                        double lambda_v) {
    const int n_steps = momenta.n_steps();
    if (static_cast<int>(flow.states.size()) != n_steps + 1 ||
        static_cast<int>(flow.midstates.size()) != n_steps)
        throw invalid_argument("transport_points: trajectory incomplete");
    const double dt = 1.0 / n_steps;
    Points p = points;
    for (int s = 0; s < n_steps; ++s) {
        const Points& a = momenta.alpha[static_cast<size_t>(s)];
        const Points k1 = cross_kernel(p, flow.states[static_cast<size_t>(s)], lambda_v) * a;
        const Points mid = p + 0.5 * dt * k1;
        const Points k2 = cross_kernel(mid, flow.midstates[static_cast<size_t>(s)], lambda_v) * a;
        p += dt * k2;
    }
    if (!p.allFinite()) throw numerical_error("transport_points: non-finite result");
    return p;
}

Points transport_points(const Points& points, const DiffeoRecord& diffeo) {
    return transport_points(points, diffeo.flow, diffeo.momenta, diffeo.lambda_v);
}

namespace {

double resolve_data_weight(const RegistrationConfig& cfg, const Shape& ref) {
    if (cfg.data_weight > 0) return cfg.data_weight;
    const double dx = ref.points.col(0).maxCoeff() - ref.points.col(0).minCoeff();
    const double dy = ref.points.col(1).maxCoeff() - ref.points.col(1).minCoeff();
    const double eps = 0.01 * std::hypot(dx, dy);
    return 1.0 / (eps * eps);
}

double objective_impl(const Momenta& momenta, const Points& ref_points,
                      const CurrentsShape& target, const RegistrationConfig& cfg,
                      double data_weight, Momenta* grad_out, double* residual_out) {
    const int n_steps = momenta.n_steps();
    const double dt = 1.0 / n_steps;
    const double lam_v = cfg.kernel.lambda_v;

    ForwardPass fp = run_forward(ref_points, momenta, lam_v);

    Points data_grad;
    const double dissim =
        currents_dissimilarity_gradient(fp.flow.final_state(), target, cfg.kernel.lambda_w, data_grad);
    if (residual_out) *residual_out = dissim;
    const double j = data_weight * dissim + fp.energy;
    if (!std::isfinite(j)) throw numerical_error("registration objective is not finite");
    if (!grad_out) return j;

    // reverse sweep: cotangent on X_{s+1} pulled through
    //   A = K(X_s) a;  M = X_s + dt/2 A;  B = K(M) a;  X_{s+1} = X_s + dt B
    Momenta grad = Momenta::zero(n_steps, momenta.n_cp());
    Points xbar = data_weight * data_grad;
    for (int s = n_steps - 1; s >= 0; --s) {
        const Points& x = fp.flow.states[static_cast<size_t>(s)];
        const Points& mid = fp.flow.midstates[static_cast<size_t>(s)];
        const Eigen::MatrixXd& k0 = fp.k_state[static_cast<size_t>(s)];
        const Eigen::MatrixXd& k1 = fp.k_mid[static_cast<size_t>(s)];
        const Points& a = momenta.alpha[static_cast<size_t>(s)];

        const Points w1 = dt * xbar;
        const Points gmid = kernel_sum_x_gradient(k1, mid, w1, a, lam_v);
        Points galpha = k1 * w1;

        const Points ga = 0.5 * dt * gmid;
        const Points gx_a = kernel_sum_x_gradient(k0, x, ga, a, lam_v);
        galpha += k0 * ga;

        // energy term dt * sum_ij K_ij <a_i, a_j> at this step
        galpha += (2.0 * dt) * (k0 * a);
        Points xbar_next = xbar + gmid + gx_a + dt * kernel_sum_x_gradient(k0, x, a, a, lam_v);

        grad.alpha[static_cast<size_t>(s)] = std::move(galpha);
        xbar = std::move(xbar_next);
    }
    *grad_out = std::move(grad);
    return j;
}

} // namespace

double objective_and_gradient(const Momenta& momenta, const Shape& ref, const Shape& target,
                              const RegistrationConfig& cfg, Momenta& grad) {
    cfg.validate();
    ref.validate();
    const CurrentsShape target_current(target);
    return objective_impl(momenta, ref.points, target_current, cfg, resolve_data_weight(cfg, ref),
                          &grad, nullptr);
}

DiffeoRecord register_shapes(const Shape& ref, const Shape& target, const RegistrationConfig& cfg) {
    cfg.validate();
    ref.validate();
    target.validate();
    const CurrentsShape ref_current(ref);
    const CurrentsShape target_current(target);
    const double data_weight = resolve_data_weight(cfg, ref);
    const int n_cp = ref.n_points();

    DiffeoRecord rec;
    rec.cp_initial = ref.points;
    rec.lambda_v = cfg.kernel.lambda_v;
    rec.initial_dissimilarity = currents_dissimilarity(ref_current, target_current, cfg.kernel.lambda_w);

    auto fg = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
        const Momenta m = Momenta::unflatten(theta, cfg.n_steps, n_cp);
        Momenta g;
        const double j = objective_impl(m, ref.points, target_current, cfg, data_weight, &g, nullptr);
        grad = g.flatten();
        return j;
    };

    LbfgsOptions opts;
    opts.max_iters = cfg.max_iters;
    opts.grad_tol = cfg.grad_tol;
    opts.armijo_c1 = cfg.armijo_c1;
    opts.max_line_search = cfg.max_line_search;
    const LbfgsResult result =
        lbfgs_minimize(fg, Momenta::zero(cfg.n_steps, n_cp).flatten(), opts);

    rec.momenta = Momenta::unflatten(result.x, cfg.n_steps, n_cp);
    ForwardPass fp = run_forward(ref.points, rec.momenta, cfg.kernel.lambda_v);
    rec.flow = std::move(fp.flow);
    rec.energy = fp.energy;
    Shape deformed = ref;
    deformed.points = rec.cp_final();
    rec.residual = currents_dissimilarity(CurrentsShape(deformed), target_current, cfg.kernel.lambda_w);
    rec.iterations = result.iterations;
    rec.converged = result.converged || result.stalled;
    return rec;
}

} // namespace georom

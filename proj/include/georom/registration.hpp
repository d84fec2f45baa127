#pragma once

#include "georom/currents.hpp"
#include "georom/geometry.hpp"

#include <Eigen/Core>
#include <vector>

namespace georom {

/// Piecewise-constant velocity basis vectors alpha_i(t), one N_cp x 2 block
/// per time step.
struct Momenta {
    std::vector<Points> alpha;

    int n_steps() const { return static_cast<int>(alpha.size()); }
    int n_cp() const { return alpha.empty() ? 0 : static_cast<int>(alpha[0].rows()); }

    static Momenta zero(int n_steps, int n_cp);
    Eigen::VectorXd flatten() const;
    static Momenta unflatten(const Eigen::VectorXd& v, int n_steps, int n_cp);
};

/// States of the explicit-midpoint integration of the CP flow; midstates are
/// the half-step positions the kernel is evaluated at.
struct FlowTrajectory {
    std::vector<Points> states;    // n_steps + 1 entries
    std::vector<Points> midstates; // n_steps entries

    const Points& final_state() const { return states.back(); }
};

struct RegistrationConfig {
    KernelConfig kernel;
    int n_steps = 10;
    double data_weight = 0.0; // <= 0: 1 / (0.01 * reference bbox diagonal)^2
    int max_iters = 200;
    double grad_tol = 1e-6; // max-norm of the objective gradient
    double armijo_c1 = 1e-4;
    int max_line_search = 40;

    void validate() const;
};

/// Registration outcome: CP trajectory, the minimising momenta, and the
/// currents residual. `converged` means the optimiser reached its gradient
/// tolerance or the numerical floor of the objective, not the iteration cap.
struct DiffeoRecord {
    Points cp_initial;
    FlowTrajectory flow;
    Momenta momenta;
    double lambda_v = 1.0;
    double residual = 0.0;               // final currents dissimilarity
    double energy = 0.0;                 // integral of the squared velocity norm
    double initial_dissimilarity = 0.0;  // at zero momenta
    bool converged = false;
    int iterations = 0;

    const Points& cp_final() const { return flow.final_state(); }
};

/// Integrates the CP motion dx_j/dt = sum_i K(x_j, x_i) alpha_i(t) from t=0
/// to 1 with explicit midpoint steps. Throws on non-finite states.
FlowTrajectory flow_forward(const Points& cp_initial, const Momenta& momenta, double lambda_v);

/// Carries passive points through a computed flow (same integrator, same
/// half-step kernel sources); the CPs themselves reproduce their trajectory.
Points transport_points(const Points& points, const FlowTrajectory& flow, const Momenta& momenta,
                        double lambda_v);
Points transport_points(const Points& points, const DiffeoRecord& diffeo);

/// Objective of the registration problem
///   J = w * ||[phi(ref)] - [target]||^2_W' + sum_t dt * ||v_t||^2_W
/// with its exact gradient (reverse sweep through the midpoint steps).
double objective_and_gradient(const Momenta& momenta, const Shape& ref, const Shape& target,
                              const RegistrationConfig& cfg, Momenta& grad);

/// Gradient-based minimisation from zero momenta.
DiffeoRecord register_shapes(const Shape& ref, const Shape& target, const RegistrationConfig& cfg);

} // namespace georom

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

namespace msprog {

struct SolverConfig {
    int max_iter = 10000;
    // Relative iterate change ||W_k - W_{k-1}|| / max(1, ||W_{k-1}||).
    double tol = 1e-6;
    // false = plain ISTA (no momentum); used by the solver-equivalence check.
    bool use_momentum = true;
};

struct SolverReport {
    int iterations_run = 0;
    std::vector<double> objective_trace;  // composite objective, includes F(W0)
    bool converged = false;
    double final_objective = 0.0;
};

using GradFn = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;
// prox(V, gamma) = argmin_W 1/2 ||W - V||_F^2 + gamma R(W)
using ProxFn = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&, double)>;
// Full composite objective, used for the trace and the divergence guard.
using ObjectiveFn = std::function<double(const Eigen::MatrixXd&)>;

// FISTA with the standard momentum schedule t_1 = 1,
// t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2, extrapolation (t_k - 1)/t_{k+1},
// fixed step gamma = 1/L. Throws SolverError if the objective grows beyond
// 10x its initial value (step size too large / L not a valid bound).
std::pair<Eigen::MatrixXd, SolverReport> fista_minimize(
    const GradFn& grad, const ProxFn& prox, const ObjectiveFn& objective,
    double L, Eigen::MatrixXd W0, const SolverConfig& config = {});

}  // namespace msprog

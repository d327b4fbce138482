#pragma once

#include <Eigen/Dense>

#include "msprog/solver.hpp"

namespace msprog {

// Quadratic loss (1/N) ||X W - Y||_F^2 in Gram form: the smooth part equals
// 0.5 tr(W^T G W) - tr(C^T W) + c0 with G = (2/N) X^T X and C = (2/N) X^T Y.
// Precomputing G makes every FISTA iteration O(d^2 k) regardless of N, which
// is what makes the resampling grid search affordable.
struct QuadLoss {
    Eigen::MatrixXd G;  // d x d
    Eigen::MatrixXd C;  // d x k
    double c0 = 0.0;
    double L = 0.0;  // Lipschitz bound on the gradient, inflated by 1%

    static QuadLoss from_data(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

    Eigen::MatrixXd gradient(const Eigen::MatrixXd& W) const {
        return G * W - C;
    }
    double smooth_value(const Eigen::MatrixXd& W) const {
        return 0.5 * (W.transpose() * (G * W)).trace() -
               (C.transpose() * W).trace() + c0;
    }
};

// FISTA on QuadLoss + tau ||w||_1 + mu ||w||_2^2.
Eigen::VectorXd solve_elastic_net(const QuadLoss& loss, double tau, double mu,
                                  const SolverConfig& config,
                                  const Eigen::VectorXd& w0,
                                  SolverReport* report = nullptr);

// FISTA on QuadLoss + tau_g * sum of row l2 norms.
Eigen::MatrixXd solve_row_group(const QuadLoss& loss, double tau_g,
                                const SolverConfig& config,
                                const Eigen::MatrixXd& W0,
                                SolverReport* report = nullptr);

}  // namespace msprog

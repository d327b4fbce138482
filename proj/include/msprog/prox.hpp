#pragma once

#include <Eigen/Dense>

namespace msprog {

// Componentwise soft thresholding: sign(v_j) * max(|v_j| - theta, 0).
// Entries with |v_j| <= theta come out exactly zero.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double theta);

// argmin_w 1/2 ||w - v||^2 + gamma * (tau ||w||_1 + mu ||w||_2^2)
//   = soft_threshold(v, gamma*tau) / (1 + 2*gamma*mu)
Eigen::VectorXd prox_elastic_net(const Eigen::VectorXd& v, double gamma,
                                 double tau, double mu);

// Row-wise group shrinkage for the L2,1 penalty: each row r is scaled by
// max(0, 1 - gamma*tau / ||r||_2); rows at or below the threshold become
// exactly zero.
Eigen::MatrixXd prox_row_group(const Eigen::MatrixXd& V, double gamma,
                               double tau);

// loss_scale * sigma_max(X^T X), estimated by power iteration to relative
// tolerance 1e-6. Returns 0 for an all-zero X.
double lipschitz_constant(const Eigen::MatrixXd& X, double loss_scale);

// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double power_iteration_sym(const Eigen::MatrixXd& G, double rel_tol = 1e-6);

}  // namespace msprog

#include "msprog/prox.hpp"

#include <cmath>

#include "msprog/errors.hpp"
#include "msprog/rng.hpp"

namespace msprog {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double theta) {
    if (theta < 0.0) throw ArgumentError("soft_threshold: theta must be >= 0");
    Eigen::VectorXd out(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        const double a = std::abs(v[j]) - theta;
        out[j] = a > 0.0 ? (v[j] > 0.0 ? a : -a) : 0.0;
    }
    return out;
}

Eigen::VectorXd prox_elastic_net(const Eigen::VectorXd& v, double gamma,
                                 double tau, double mu) {
    if (gamma <= 0.0) throw ArgumentError("prox_elastic_net: gamma must be > 0");
    if (tau < 0.0 || mu < 0.0)
        throw ArgumentError("prox_elastic_net: tau and mu must be >= 0");
    return soft_threshold(v, gamma * tau) / (1.0 + 2.0 * gamma * mu);
}

Eigen::MatrixXd prox_row_group(const Eigen::MatrixXd& V, double gamma,
                               double tau) {
    if (gamma <= 0.0) throw ArgumentError("prox_row_group: gamma must be > 0");
    if (tau < 0.0) throw ArgumentError("prox_row_group: tau must be >= 0");
    Eigen::MatrixXd out(V.rows(), V.cols());
    const double threshold = gamma * tau;
    for (Eigen::Index r = 0; r < V.rows(); ++r) {
        const double nrm = V.row(r).norm();
        if (nrm <= threshold) {
            out.row(r).setZero();
        } else {
            out.row(r) = V.row(r) * (1.0 - threshold / nrm);
        }
    }
    return out;
}

double power_iteration_sym(const Eigen::MatrixXd& G, double rel_tol) {
    const Eigen::Index d = G.rows();
    if (d == 0 || G.norm() == 0.0) return 0.0;
    // Deterministic random start; a fixed vector could be orthogonal to the
    // dominant eigenvector.
    std::mt19937_64 rng(0x9d2c5680u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(d);
    for (Eigen::Index j = 0; j < d; ++j) v[j] = gauss(rng);
    v.normalize();

    double lambda = 0.0;
    for (int it = 0; it < 100000; ++it) {
        Eigen::VectorXd w = G * v;
        const double nrm = w.norm();
        if (nrm == 0.0) return 0.0;
        v = w / nrm;
        const double next = v.dot(G * v);
        if (it > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next)) {
            return next;
        }
        lambda = next;
    }
    return lambda;
}

double lipschitz_constant(const Eigen::MatrixXd& X, double loss_scale) {
    if (X.size() == 0) throw ArgumentError("lipschitz_constant: X is empty");
    if (X.norm() == 0.0) return 0.0;  // degenerate all-zero design

    const Eigen::Index d = X.cols();
    std::mt19937_64 rng(0x9d2c5680u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(d);
    for (Eigen::Index j = 0; j < d; ++j) v[j] = gauss(rng);
    v.normalize();

    // Power iteration on X^T X without forming the Gram matrix.
    double lambda = 0.0;
    for (int it = 0; it < 100000; ++it) {
        Eigen::VectorXd w = X.transpose() * (X * v);
        const double nrm = w.norm();
        if (nrm == 0.0) return 0.0;
        v = w / nrm;
        const double next = (X * v).squaredNorm();
        if (it > 0 && std::abs(next - lambda) <= 1e-6 * std::abs(next)) {
            return loss_scale * next;
        }
        lambda = next;
    }
    return loss_scale * lambda;
}

}  // namespace msprog

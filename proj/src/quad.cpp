#include "msprog/quad.hpp"

#include "msprog/prox.hpp"

namespace msprog {

QuadLoss QuadLoss::from_data(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    const double scale = 2.0 / static_cast<double>(X.rows());
    QuadLoss loss;
    loss.G = scale * (X.transpose() * X);
    loss.C = scale * (X.transpose() * Y);
    loss.c0 = 0.5 * scale * Y.squaredNorm();
    const double lmax = power_iteration_sym(loss.G);
    // 1% inflation guards against a power-iteration underestimate; an
    // all-zero design (constant features only) gets a unit step.
    loss.L = lmax > 0.0 ? 1.01 * lmax : 1.0;
    return loss;
}

Eigen::VectorXd solve_elastic_net(const QuadLoss& loss, double tau, double mu,
                                  const SolverConfig& config,
                                  const Eigen::VectorXd& w0,
                                  SolverReport* report) {
    auto [W, rep] = fista_minimize(
        [&](const Eigen::MatrixXd& W) -> Eigen::MatrixXd {
            return loss.gradient(W);
        },
        [&](const Eigen::MatrixXd& V, double gamma) -> Eigen::MatrixXd {
            return prox_elastic_net(V.col(0), gamma, tau, mu);
        },
        [&](const Eigen::MatrixXd& W) {
            return loss.smooth_value(W) + tau * W.col(0).lpNorm<1>() +
                   mu * W.squaredNorm();
        },
        loss.L, w0, config);
    if (report) *report = std::move(rep);
    return W.col(0);
}

Eigen::MatrixXd solve_row_group(const QuadLoss& loss, double tau_g,
                                const SolverConfig& config,
                                const Eigen::MatrixXd& W0,
                                SolverReport* report) {
    auto [W, rep] = fista_minimize(
        [&](const Eigen::MatrixXd& W) -> Eigen::MatrixXd {
            return loss.gradient(W);
        },
        [&](const Eigen::MatrixXd& V, double gamma) -> Eigen::MatrixXd {
            return prox_row_group(V, gamma, tau_g);
        },
        [&](const Eigen::MatrixXd& W) {
            double pen = 0.0;
            for (Eigen::Index r = 0; r < W.rows(); ++r)
                pen += W.row(r).norm();
            return loss.smooth_value(W) + tau_g * pen;
        },
        loss.L, W0, config);
    if (report) *report = std::move(rep);
    return W;
}

}  // namespace msprog

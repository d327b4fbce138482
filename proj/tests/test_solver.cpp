#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "msprog/errors.hpp"
#include "msprog/prox.hpp"
#include "msprog/quad.hpp"
#include "msprog/solver.hpp"

using namespace msprog;

namespace {

ProxFn identity_prox() {
    return [](const Eigen::MatrixXd& V, double) { return V; };
}

}  // namespace

TEST_CASE("fista solves unpenalized least squares exactly") {
    // V = (1/N)||Xw - y||^2 with X = I2, y = [1, 2].
    const Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd y(2);
    y << 1.0, 2.0;
    const QuadLoss loss = QuadLoss::from_data(X, y);

    SolverConfig config;
    config.tol = 1e-12;
    auto [w, report] = fista_minimize(
        [&](const Eigen::MatrixXd& W) -> Eigen::MatrixXd { return loss.gradient(W); },
        identity_prox(),
        [&](const Eigen::MatrixXd& W) { return loss.smooth_value(W); },
        loss.L, Eigen::VectorXd::Zero(2), config);

    CHECK(report.converged);
    CHECK(std::abs(w(0, 0) - 1.0) < 1e-8);
    CHECK(std::abs(w(1, 0) - 2.0) < 1e-8);
}

TEST_CASE("orthonormal-design lasso reduces to soft thresholding") {
    // With (2/N) X^T X = I the prox-gradient fixed point is
    // soft_threshold(least-squares solution, tau).
    const Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);  // N = 2
    Eigen::VectorXd y(2);
    y << 1.5, -0.3;
    const QuadLoss loss = QuadLoss::from_data(X, y);
    const double tau = 0.5;

    SolverConfig config;
    config.tol = 1e-12;
    const Eigen::VectorXd w = solve_elastic_net(loss, tau, 0.0, config,
                                                Eigen::VectorXd::Zero(2));
    const Eigen::VectorXd expect = soft_threshold(y, tau);
    CHECK((w - expect).norm() < 1e-8);
}

TEST_CASE("an already-optimal start converges immediately") {
    const Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd y(2);
    y << 3.0, -1.0;
    const QuadLoss loss = QuadLoss::from_data(X, y);

    auto [w, report] = fista_minimize(
        [&](const Eigen::MatrixXd& W) -> Eigen::MatrixXd { return loss.gradient(W); },
        identity_prox(),
        [&](const Eigen::MatrixXd& W) { return loss.smooth_value(W); },
        loss.L, y, SolverConfig{});

    CHECK(report.converged);
    CHECK(report.iterations_run <= 2);
    CHECK((w.col(0) - y).norm() < 1e-12);
}

TEST_CASE("an invalid Lipschitz bound raises a solver error") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd X(20, 5);
    Eigen::VectorXd y(20);
    for (int r = 0; r < 20; ++r) {
        for (int c = 0; c < 5; ++c) X(r, c) = gauss(rng);
        y[r] = gauss(rng);
    }
    const QuadLoss loss = QuadLoss::from_data(X, y);
    CHECK_THROWS_AS(
        fista_minimize(
            [&](const Eigen::MatrixXd& W) -> Eigen::MatrixXd { return loss.gradient(W); },
            identity_prox(),
            [&](const Eigen::MatrixXd& W) { return loss.smooth_value(W); },
            loss.L / 100.0, Eigen::VectorXd::Zero(5), SolverConfig{}),
        SolverError);
}

TEST_CASE("fista objective gap respects the O(1/k^2) bound") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 60, d = 12;
        Eigen::MatrixXd X(n, d);
        Eigen::VectorXd y(n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < d; ++c) X(r, c) = gauss(rng);
            y[r] = gauss(rng);
        }
        const QuadLoss loss = QuadLoss::from_data(X, y);
        const Eigen::VectorXd w_star =
            (X.transpose() * X).ldlt().solve(X.transpose() * y);
        const double f_star = loss.smooth_value(w_star);
        const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(d);

        SolverConfig config;
        config.max_iter = 150;
        config.tol = 1e-15;
        auto [w, report] = fista_minimize(
            [&](const Eigen::MatrixXd& W) -> Eigen::MatrixXd { return loss.gradient(W); },
            identity_prox(),
            [&](const Eigen::MatrixXd& W) { return loss.smooth_value(W); },
            loss.L, w0, config);

        const double r0 = (w0 - w_star).squaredNorm();
        for (int k : {10, 50, 100}) {
            const double gap =
                report.objective_trace[static_cast<std::size_t>(k)] - f_star;
            const double bound = 2.0 * loss.L * r0 / ((k + 1.0) * (k + 1.0));
            CHECK(gap <= bound + 1e-12);
        }
    }
}

TEST_CASE("ista mode reaches the same objective value") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd X(40, 8);
    Eigen::VectorXd y(40);
    for (int r = 0; r < 40; ++r) {
        for (int c = 0; c < 8; ++c) X(r, c) = gauss(rng);
        y[r] = gauss(rng);
    }
    const QuadLoss loss = QuadLoss::from_data(X, y);

    SolverConfig fista_cfg;
    fista_cfg.tol = 1e-10;
    SolverConfig ista_cfg = fista_cfg;
    ista_cfg.use_momentum = false;

    SolverReport rep_f, rep_i;
    const Eigen::VectorXd wf = solve_elastic_net(loss, 0.4, 0.1, fista_cfg,
                                                 Eigen::VectorXd::Zero(8), &rep_f);
    const Eigen::VectorXd wi = solve_elastic_net(loss, 0.4, 0.1, ista_cfg,
                                                 Eigen::VectorXd::Zero(8), &rep_i);
    CHECK(std::abs(rep_f.final_objective - rep_i.final_objective) < 1e-7);

    // The momentum-free variant is monotone.
    for (std::size_t k = 1; k < rep_i.objective_trace.size(); ++k)
        CHECK(rep_i.objective_trace[k] <= rep_i.objective_trace[k - 1] + 1e-12);
}

TEST_CASE("coordinates zeroed by the prox are bitwise zero after a solve") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd X(30, 10);
    Eigen::VectorXd y(30);
    for (int r = 0; r < 30; ++r) {
        for (int c = 0; c < 10; ++c) X(r, c) = gauss(rng);
        y[r] = X(r, 0) + 0.1 * gauss(rng);
    }
    const QuadLoss loss = QuadLoss::from_data(X, y);
    const Eigen::VectorXd w = solve_elastic_net(
        loss, 0.8 * (loss.C.col(0).lpNorm<Eigen::Infinity>()), 0.0,
        SolverConfig{}, Eigen::VectorXd::Zero(10));
    int zeros = 0;
    for (int j = 0; j < 10; ++j)
        if (w[j] == 0.0) ++zeros;
    CHECK(zeros > 0);  // exact zeros, not merely small values
}

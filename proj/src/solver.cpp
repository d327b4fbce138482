#include "msprog/solver.hpp"

#include <cmath>
#include <string>

#include "msprog/errors.hpp"

namespace msprog {

std::pair<Eigen::MatrixXd, SolverReport> fista_minimize(
    const GradFn& grad, const ProxFn& prox, const ObjectiveFn& objective,
    double L, Eigen::MatrixXd W0, const SolverConfig& config) {
    if (L <= 0.0) throw ArgumentError("fista_minimize: L must be > 0");
    if (config.max_iter < 1)
        throw ArgumentError("fista_minimize: max_iter must be >= 1");
    if (config.tol <= 0.0) throw ArgumentError("fista_minimize: tol must be > 0");

    const double gamma = 1.0 / L;
    SolverReport report;

    Eigen::MatrixXd W = W0;
    Eigen::MatrixXd Z = W0;
    double t = 1.0;

    const double f0 = objective(W0);
    report.objective_trace.push_back(f0);

    for (int k = 1; k <= config.max_iter; ++k) {
        Eigen::MatrixXd W_next = prox(Z - gamma * grad(Z), gamma);

        const double rel_change =
            (W_next - W).norm() / std::max(1.0, W.norm());

        if (config.use_momentum) {
            const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
            Z = W_next + ((t - 1.0) / t_next) * (W_next - W);
            t = t_next;
        } else {
            Z = W_next;
        }
        W = std::move(W_next);

        const double f = objective(W);
        report.objective_trace.push_back(f);
        report.iterations_run = k;
        if (f > 10.0 * f0 + 1e-9) {
            throw SolverError(
                "fista_minimize: objective diverged (step size gamma = " +
                std::to_string(gamma) + " too large for the supplied L)");
        }
        if (rel_change < config.tol) {
            report.converged = true;
            break;
        }
    }

    report.final_objective = report.objective_trace.back();
    return {std::move(W), std::move(report)};
}

}  // namespace msprog

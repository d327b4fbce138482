#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "msprog/cohort.hpp"
#include "msprog/diagnosis.hpp"
#include "msprog/solver.hpp"

namespace msprog {

// The regressor g: row-sparse linear map from the full standardized input
// vector to the next-time-point values of the selected variables. Outputs are
// mean-centered during fitting and un-centered at prediction time; they are
// never scaled.
struct EvolutionModel {
    Eigen::MatrixXd W;  // d x d~
    Eigen::VectorXd intercepts;
    Standardizer standardization;
    std::vector<int> selected_indices;  // identities of the d~ output columns
    double tau_g = 0.0;
};

// Smallest tau_g at which the all-zero matrix is optimal:
// (2/N') max_row ||(X_std^T Y_c)_row||_2.
double evolution_tau_max(const EvolutionDataset& data);

// Minimizes (1/N')||X_std W - Y_c||_F^2 + tau_g * sum_rows ||W_row||_2.
EvolutionModel fit_evolution(const EvolutionDataset& data, double tau_g,
                             const SolverConfig& config = {},
                             SolverReport* report = nullptr);

Eigen::VectorXd predict_next(const EvolutionModel& model,
                             const Eigen::VectorXd& x);

std::string evolution_to_json(const EvolutionModel& model);
EvolutionModel evolution_from_json(const std::string& text);
void save_evolution(const EvolutionModel& model, const std::string& path);
EvolutionModel load_evolution(const std::string& path);

}  // namespace msprog

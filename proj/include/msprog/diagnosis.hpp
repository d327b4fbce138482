#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "msprog/cohort.hpp"
#include "msprog/solver.hpp"

namespace msprog {

// Per-feature zero-mean / unit-variance transform fitted on learning data.
// Constant features keep stddev 1 (their standardized column is all zero,
// so they are never selected).
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;

    static Standardizer fit(const Eigen::MatrixXd& X);
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
};

// The classifier f: sparse linear model on standardized features,
// sign-thresholded regression on +-1 labels.
struct DiagnosisModel {
    Eigen::VectorXd w;
    double intercept = 0.0;
    Standardizer standardization;
    double tau = 0.0;
    double mu = 0.0;
    std::vector<int> selected_indices;  // 1-based support of w, ascending
    std::vector<std::string> feature_names;
};

// Smallest tau at which the all-zero model is optimal:
// (2/N) ||X_std^T y_c||_inf.
double diagnosis_tau_max(const DiagnosisDataset& data);

// Minimizes (1/N)||X_std w - y_c||^2 + tau ||w||_1 + mu ||w||_2^2 by FISTA
// with the elastic-net prox; intercept is the label mean, unpenalized.
DiagnosisModel fit_diagnosis(const DiagnosisDataset& data, double tau,
                             double mu, const SolverConfig& config = {},
                             SolverReport* report = nullptr,
                             const std::vector<std::string>& feature_names = {});

// Returns (label, margin); label = +1 iff margin > 0 (ties go to RR = -1).
std::pair<int, double> predict_course(const DiagnosisModel& model,
                                      const Eigen::VectorXd& x);

std::vector<int> selected_variables(const DiagnosisModel& model);

std::string diagnosis_to_json(const DiagnosisModel& model);
DiagnosisModel diagnosis_from_json(const std::string& text);
void save_diagnosis(const DiagnosisModel& model, const std::string& path);
DiagnosisModel load_diagnosis(const std::string& path);

}  // namespace msprog

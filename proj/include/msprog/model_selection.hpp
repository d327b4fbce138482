#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msprog/cohort.hpp"
#include "msprog/diagnosis.hpp"
#include "msprog/solver.hpp"

namespace msprog {

struct Grid {
    std::vector<double> taus;  // strictly decreasing, relative to tau_max
    std::vector<double> mus;
};

// (sensitivity + specificity) / 2 with +1 the positive class. y_true must
// contain both classes.
double balanced_accuracy(const std::vector<int>& y_true,
                         const std::vector<int>& y_pred);

// 20 geometric tau values from tau_max down to 1e-3 * tau_max;
// mu in {1e-3, 1e-2, 1e-1, 1}.
Grid default_grid(const DiagnosisDataset& data);

struct CvCell {
    double tau = 0.0;
    double mu = 0.0;
    double mean_balanced_accuracy = 0.0;
};

struct GridSearchResult {
    double tau = 0.0;
    double mu = 0.0;
    std::vector<CvCell> table;
};

// Stratified k-fold search maximizing mean balanced accuracy; exact ties go
// to larger tau, then larger mu (sparser, more regularized).
GridSearchResult grid_search(const DiagnosisDataset& data, const Grid& grid,
                             int k_folds, std::uint64_t seed,
                             const SolverConfig& config = {});

struct SplitRecord {
    double balanced_acc = 0.0;
    double tau = 0.0;
    double mu = 0.0;
    std::vector<int> selected;  // 1-based
};

struct ResamplingReport {
    int n_splits = 0;
    double test_fraction = 0.0;
    std::vector<SplitRecord> splits;
    double mean_balanced_acc = 0.0;
    std::optional<double> stddev_balanced_acc;  // sample stddev, absent for n=1
    std::vector<double> frequencies;            // per variable, in [0,1]
    Eigen::VectorXd mean_weights;               // refit weights averaged over splits
    double threshold = 0.5;
    std::vector<int> stable_set;  // {j : freq_j >= threshold}, 1-based
};

// Monte Carlo resampling: n_splits stratified outer splits (seeded
// independently from master_seed by a splittable counter), nested grid_search
// on each learning portion, refit at the chosen pair, outer balanced
// accuracy. Splits may run on n_threads (0 = hardware concurrency); results
// are identical to sequential execution.
ResamplingReport monte_carlo_evaluate(const DiagnosisDataset& data,
                                      int n_splits, double test_fraction,
                                      const Grid& grid, int k_folds,
                                      std::uint64_t master_seed,
                                      const SolverConfig& config = {},
                                      double stable_threshold = 0.5,
                                      int n_threads = 1);

std::string resampling_report_json(const ResamplingReport& report,
                                   const std::vector<std::string>& feature_names);
// `feature_name,frequency,mean_weight`, one row per feature.
std::string frequencies_csv(const ResamplingReport& report,
                            const std::vector<std::string>& feature_names);

}  // namespace msprog

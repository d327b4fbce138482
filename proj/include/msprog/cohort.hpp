#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace msprog {

// Missing feature entries are stored as NaN.
struct PatientSeries {
    std::string patient_id;
    std::map<int, Eigen::VectorXd> observations;  // time point -> d values
    std::map<int, int> labels;                    // time point -> -1 (RR) / +1 (SP)
};

struct LongitudinalCohort {
    std::vector<PatientSeries> patients;
    int n_features = 0;   // d
    int time_points = 0;  // T, the largest observed time index
    std::vector<std::string> feature_names;

    std::size_t labeled_observations() const;
};

struct RowProvenance {
    std::string patient_id;
    int time_point = 0;
};

struct DiagnosisDataset {
    Eigen::MatrixXd X;  // N x d
    Eigen::VectorXd y;  // entries in {-1, +1}
    std::vector<RowProvenance> provenance;
};

struct EvolutionDataset {
    Eigen::MatrixXd X;                  // N' x d, observation at time t
    Eigen::MatrixXd Y;                  // N' x d~, selected columns at t+1
    std::vector<int> selected_indices;  // 1-based feature indices
    std::vector<RowProvenance> provenance;  // time point of the X row
};

// Per-feature fill values for missing cells, computed on learning rows only
// and then applied to both learning and test data.
struct ImputePolicy {
    Eigen::VectorXd fill;
};

// Per-feature median over all observation rows with time point in
// [t_lo, t_hi]. A feature with no observed value anywhere in range is an
// imputation error.
ImputePolicy median_impute_policy(const LongitudinalCohort& cohort, int t_lo,
                                  int t_hi);

// Parses the cohort CSV: header `patient_id,time_point,course,q001,...`;
// course is RR/SP/-1/+1/empty, feature cells are numbers or empty (missing).
LongitudinalCohort load_cohort(std::istream& in);
LongitudinalCohort load_cohort_file(const std::string& path);

void write_cohort_csv(const LongitudinalCohort& cohort, std::ostream& out);

// One row per labeled observation with time point in [t_lo, t_hi].
DiagnosisDataset build_diagnosis_dataset(const LongitudinalCohort& cohort,
                                         int t_lo, int t_hi,
                                         const ImputePolicy& impute);

// One row per patient-consecutive pair (t, t+1), both inside [t_lo, t_hi+1]
// with t in [t_lo, t_hi]; Y restricted to selected_indices (1-based).
EvolutionDataset build_evolution_dataset(const LongitudinalCohort& cohort,
                                         int t_lo, int t_hi,
                                         const std::vector<int>& selected_indices,
                                         const ImputePolicy& impute);

// Learning cohort keeps t <= t_prime, test cohort keeps t > t_prime.
std::pair<LongitudinalCohort, LongitudinalCohort> split_by_time(
    const LongitudinalCohort& cohort, int t_prime);

}  // namespace msprog

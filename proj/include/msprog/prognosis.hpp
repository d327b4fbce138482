#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "msprog/cohort.hpp"
#include "msprog/diagnosis.hpp"
#include "msprog/evolution.hpp"

namespace msprog {

// How unselected feature positions evolve during multi-step rollout.
enum class FillPolicy {
    HoldLast,      // keep the last observed/assembled value
    LearningMean,  // reset to the diagnosis model's learning-set mean
};

struct OneStepPrognosis {
    int label = 0;
    double margin = 0.0;
    Eigen::VectorXd predicted_selected;  // d~ values, original units
};

struct RolloutStep {
    int step = 0;  // 1-based offset from the anchor observation
    int label = 0;
    double margin = 0.0;
};

struct PrognosisRecord {
    std::string patient_id;
    int time_point = 0;  // target time point (t+1 for one-step)
    int predicted = 0;
    double margin = 0.0;
    std::optional<int> clinician;
};

struct PrognosisResult {
    std::vector<PrognosisRecord> records;  // sorted by patient_id, then time
    double concordance = 0.0;
    int n_scored = 0;
};

// f(g(x)): g predicts the selected variables one step ahead; the prediction
// is placed at the selected positions of x and f scores the assembled vector.
// Throws CompositionError if f has weight on a variable g does not predict.
OneStepPrognosis prognose_one_step(const DiagnosisModel& f,
                                   const EvolutionModel& g,
                                   const Eigen::VectorXd& x);

double concordance_rate(const std::vector<int>& predicted,
                        const std::vector<int>& clinician);

std::vector<RolloutStep> rollout(const DiagnosisModel& f,
                                 const EvolutionModel& g,
                                 const Eigen::VectorXd& x_last, int horizon,
                                 FillPolicy fill = FillPolicy::HoldLast);

// Teacher-forced evaluation: predict y^{t+1} from every observed x^t with
// t >= t_prime whose clinician label y^{t+1} exists, so every scored target
// lies in the test portion. Missing cells of x^t are imputed with the
// learning-range medians.
PrognosisResult evaluate_prognosis(const DiagnosisModel& f,
                                   const EvolutionModel& g,
                                   const LongitudinalCohort& cohort,
                                   int t_prime);

std::string prognosis_csv(const PrognosisResult& result);
std::string prognosis_summary_json(const PrognosisResult& result);

}  // namespace msprog

#pragma once

#include <cstdint>

#include "msprog/cohort.hpp"
#include "msprog/diagnosis.hpp"
#include "msprog/evolution.hpp"
#include "msprog/model_selection.hpp"

namespace msprog {

struct FitParams {
    int t_prime = 4;
    int n_splits = 100;
    double test_fraction = 0.25;
    int k_folds = 3;
    double stable_threshold = 0.5;
    SolverConfig solver;
    std::uint64_t seed = 0;
    int threads = 1;  // 0 = hardware concurrency
};

struct FitResult {
    DiagnosisModel diagnosis;
    EvolutionModel evolution;
    ResamplingReport report;
};

// The full learning protocol: time split at T', Monte Carlo resampling on the
// learning diagnosis dataset, final (tau, mu) by majority vote over splits
// (ties toward sparser), refit of f on the whole learning set, then g fitted
// on the union of the stable variable set and f's support so the composition
// f(g(x)) is always well defined. tau_g comes from a small deterministic
// k-fold search minimizing validation squared error.
FitResult fit_pipeline(const LongitudinalCohort& cohort, const FitParams& params);

}  // namespace msprog

#include "msprog/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "msprog/errors.hpp"
#include "msprog/rng.hpp"

namespace msprog {

namespace {

std::pair<double, double> majority_vote(const ResamplingReport& report) {
    std::map<std::pair<double, double>, int> counts;
    for (const auto& s : report.splits) counts[{s.tau, s.mu}]++;
    std::pair<double, double> best{0.0, 0.0};
    int best_count = -1;
    for (const auto& [pair, count] : counts) {
        // maps iterate ascending, so >= keeps the largest (tau, mu) on ties
        if (count >= best_count) {
            best_count = count;
            best = pair;
        }
    }
    return best;
}

EvolutionDataset evo_subset(const EvolutionDataset& data,
                            const std::vector<int>& rows) {
    EvolutionDataset out;
    out.selected_indices = data.selected_indices;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), data.X.cols());
    out.Y.resize(static_cast<Eigen::Index>(rows.size()), data.Y.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.X.row(static_cast<Eigen::Index>(i)) = data.X.row(rows[i]);
        out.Y.row(static_cast<Eigen::Index>(i)) = data.Y.row(rows[i]);
        out.provenance.push_back(data.provenance[static_cast<std::size_t>(rows[i])]);
    }
    return out;
}

// Geometric grid search for tau_g minimizing k-fold validation squared error;
// ties go to the larger (sparser) value.
double select_tau_g(const EvolutionDataset& data, int k_folds,
                    std::uint64_t seed, const SolverConfig& config) {
    const double tau_max = evolution_tau_max(data);
    if (tau_max <= 0.0) return 0.0;

    const int n = static_cast<int>(data.X.rows());
    if (n < 2 * k_folds) return 1e-2 * tau_max;  // too little data to validate

    constexpr int kPoints = 10;
    const double ratio = std::pow(1e-3, 1.0 / (kPoints - 1));
    std::vector<double> taus(kPoints);
    taus[0] = tau_max;
    for (int i = 1; i < kPoints; ++i) taus[i] = taus[i - 1] * ratio;

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    auto rng = make_rng(seed, 0xe7);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> sse(taus.size(), 0.0);
    for (int f = 0; f < k_folds; ++f) {
        std::vector<int> train_rows, val_rows;
        for (int i = 0; i < n; ++i)
            (i % k_folds == f ? val_rows : train_rows)
                .push_back(order[static_cast<std::size_t>(i)]);
        const EvolutionDataset train = evo_subset(data, train_rows);
        const EvolutionDataset val = evo_subset(data, val_rows);
        for (std::size_t ti = 0; ti < taus.size(); ++ti) {
            const EvolutionModel m = fit_evolution(train, taus[ti], config);
            for (Eigen::Index i = 0; i < val.X.rows(); ++i)
                sse[ti] += (predict_next(m, val.X.row(i)) -
                            val.Y.row(i).transpose())
                               .squaredNorm();
        }
    }
    std::size_t best = 0;
    for (std::size_t ti = 1; ti < taus.size(); ++ti)
        if (sse[ti] < sse[best]) best = ti;  // strict: earlier = larger tau wins ties
    return taus[best];
}

}  // namespace

FitResult fit_pipeline(const LongitudinalCohort& cohort,
                       const FitParams& params) {
    if (params.t_prime < 1 || params.t_prime >= cohort.time_points)
        throw ArgumentError("fit_pipeline: require 1 <= T' < T");

    auto [learning, test] = split_by_time(cohort, params.t_prime);
    (void)test;

    const ImputePolicy impute =
        median_impute_policy(learning, 1, params.t_prime);
    const DiagnosisDataset diag =
        build_diagnosis_dataset(learning, 1, params.t_prime, impute);
    const Grid grid = default_grid(diag);

    FitResult result;
    result.report = monte_carlo_evaluate(
        diag, params.n_splits, params.test_fraction, grid, params.k_folds,
        params.seed, params.solver, params.stable_threshold, params.threads);

    const auto [tau, mu] = majority_vote(result.report);
    result.diagnosis = fit_diagnosis(diag, tau, mu, params.solver, nullptr,
                                     cohort.feature_names);

    // g must predict every variable f uses; the stable set alone may miss
    // support picked up by the final refit.
    std::set<int> outputs(result.report.stable_set.begin(),
                          result.report.stable_set.end());
    outputs.insert(result.diagnosis.selected_indices.begin(),
                   result.diagnosis.selected_indices.end());
    if (outputs.empty())
        throw DataError("fit_pipeline: no variable was ever selected; the "
                        "diagnosis model is all-null");
    const std::vector<int> selected(outputs.begin(), outputs.end());

    if (params.t_prime < 2)
        throw DataError("fit_pipeline: T' must be >= 2 to form evolution pairs");
    const EvolutionDataset evo = build_evolution_dataset(
        learning, 1, params.t_prime - 1, selected, impute);
    const double tau_g =
        select_tau_g(evo, params.k_folds, params.seed, params.solver);
    result.evolution = fit_evolution(evo, tau_g, params.solver);
    return result;
}

}  // namespace msprog

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "msprog/errors.hpp"
#include "msprog/model_selection.hpp"

using namespace msprog;

namespace {

// Linearly separable two-class dataset with a margin, no noise.
DiagnosisDataset make_separable(int n_per_class, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const int n = 2 * n_per_class;
    DiagnosisDataset data;
    data.X = Eigen::MatrixXd(n, d);
    data.y = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) {
        const double cls = i < n_per_class ? -1.0 : 1.0;
        data.y[i] = cls;
        for (int j = 0; j < d; ++j) data.X(i, j) = gauss(rng);
        data.X(i, 0) += 3.0 * cls;  // only the first feature is informative
        data.provenance.push_back({"p" + std::to_string(i), 1});
    }
    return data;
}

}  // namespace

TEST_CASE("balanced_accuracy arithmetic") {
    CHECK(balanced_accuracy({1, 1, -1, -1}, {1, 1, -1, -1}) == 1.0);
    CHECK(balanced_accuracy({1, 1, -1, -1}, {1, -1, -1, -1}) == 0.75);
    // Predicting the majority class on imbalanced data scores chance level.
    CHECK(balanced_accuracy({1, -1, -1, -1, -1}, {-1, -1, -1, -1, -1}) == 0.5);
    CHECK_THROWS_AS(balanced_accuracy({1, 1}, {1, -1}), DataError);
    CHECK_THROWS_AS(balanced_accuracy({}, {}), ArgumentError);
    CHECK_THROWS_AS(balanced_accuracy({1, -1}, {1}), ArgumentError);
}

TEST_CASE("balanced_accuracy is invariant to class duplication") {
    const std::vector<int> y = {1, 1, -1, -1, -1};
    const std::vector<int> p = {1, -1, -1, 1, -1};
    const double base = balanced_accuracy(y, p);

    // Duplicate every positive example three times.
    std::vector<int> y2, p2;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const int copies = y[i] == 1 ? 3 : 1;
        for (int c = 0; c < copies; ++c) {
            y2.push_back(y[i]);
            p2.push_back(p[i]);
        }
    }
    CHECK(balanced_accuracy(y2, p2) == base);
}

TEST_CASE("default_grid endpoints and geometry") {
    const DiagnosisDataset data = make_separable(30, 8, 11);
    const Grid grid = default_grid(data);
    const double tau_max = diagnosis_tau_max(data);

    REQUIRE(grid.taus.size() == 20);
    CHECK(grid.taus.front() == tau_max);
    CHECK(grid.taus.back() == 1e-3 * tau_max);
    // Constant ratio between consecutive values.
    const double r = grid.taus[1] / grid.taus[0];
    for (std::size_t i = 1; i < grid.taus.size(); ++i)
        CHECK(grid.taus[i] / grid.taus[i - 1] == doctest::Approx(r).epsilon(1e-12));
    CHECK(grid.mus == std::vector<double>{1e-3, 1e-2, 1e-1, 1.0});

    // The largest grid tau kills every coefficient by construction.
    SolverReport report;
    const DiagnosisModel f = fit_diagnosis(data, grid.taus.front(),
                                           grid.mus.front(), {}, &report);
    CHECK(f.w.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("grid_search on a singleton grid returns that cell") {
    const DiagnosisDataset data = make_separable(20, 5, 3);
    Grid grid;
    grid.taus = {0.5 * diagnosis_tau_max(data)};
    grid.mus = {1e-2};
    const GridSearchResult result = grid_search(data, grid, 3, 17);
    CHECK(result.tau == grid.taus[0]);
    CHECK(result.mu == grid.mus[0]);
    REQUIRE(result.table.size() == 1);
    CHECK(result.table[0].mean_balanced_accuracy > 0.9);
}

TEST_CASE("grid_search breaks exact ties toward stronger regularization") {
    // Strong signal: several small taus all reach perfect CV accuracy, so the
    // winner must be the largest tau among them, at the largest mu.
    const DiagnosisDataset data = make_separable(40, 4, 5);
    Grid grid;
    const double tau_max = diagnosis_tau_max(data);
    grid.taus = {1e-2 * tau_max, 1e-3 * tau_max, 1e-4 * tau_max};
    grid.mus = {1e-3, 1e-2};
    const GridSearchResult result = grid_search(data, grid, 3, 29);

    double best = 0.0;
    for (const auto& cell : result.table)
        best = std::max(best, cell.mean_balanced_accuracy);
    REQUIRE(best == 1.0);
    double tau_at_best = 0.0, mu_at_best = 0.0;
    for (const auto& cell : result.table) {
        if (cell.mean_balanced_accuracy == best) {
            tau_at_best = std::max(tau_at_best, cell.tau);
            if (cell.tau == tau_at_best) mu_at_best = std::max(mu_at_best, cell.mu);
        }
    }
    CHECK(result.tau == tau_at_best);
    CHECK(result.mu == mu_at_best);
}

TEST_CASE("monte_carlo_evaluate base case with one split") {
    const DiagnosisDataset data = make_separable(24, 6, 7);
    Grid grid;
    grid.taus = {0.3 * diagnosis_tau_max(data), 0.03 * diagnosis_tau_max(data)};
    grid.mus = {1e-2};
    const ResamplingReport report =
        monte_carlo_evaluate(data, 1, 0.25, grid, 3, 42);

    CHECK(report.n_splits == 1);
    REQUIRE(report.splits.size() == 1);
    CHECK(report.mean_balanced_acc == report.splits[0].balanced_acc);
    CHECK_FALSE(report.stddev_balanced_acc.has_value());
    REQUIRE(report.frequencies.size() == 6);
    for (double fr : report.frequencies) {
        CHECK(fr >= 0.0);
        CHECK(fr <= 1.0);
        // With one split every frequency is 0 or 1.
        CHECK((fr == 0.0 || fr == 1.0));
    }
}

TEST_CASE("resampling reports are byte-identical across seeds and threads") {
    const DiagnosisDataset data = make_separable(24, 6, 9);
    const Grid grid = default_grid(data);
    const std::vector<std::string> names = {"a", "b", "c", "d", "e", "f"};

    const ResamplingReport r1 =
        monte_carlo_evaluate(data, 8, 0.25, grid, 3, 123, {}, 0.5, 1);
    const ResamplingReport r2 =
        monte_carlo_evaluate(data, 8, 0.25, grid, 3, 123, {}, 0.5, 4);
    CHECK(resampling_report_json(r1, names) == resampling_report_json(r2, names));
    CHECK(frequencies_csv(r1, names) == frequencies_csv(r2, names));

    const ResamplingReport r3 =
        monte_carlo_evaluate(data, 8, 0.25, grid, 3, 124, {}, 0.5, 1);
    CHECK(resampling_report_json(r1, names) != resampling_report_json(r3, names));

    CHECK(r1.stddev_balanced_acc.has_value());
    CHECK(*r1.stddev_balanced_acc >= 0.0);
}

TEST_CASE("stable set shrinks as the threshold grows") {
    const DiagnosisDataset data = make_separable(24, 6, 13);
    const Grid grid = default_grid(data);
    const ResamplingReport lo =
        monte_carlo_evaluate(data, 10, 0.25, grid, 3, 1, {}, 0.2);
    const ResamplingReport hi =
        monte_carlo_evaluate(data, 10, 0.25, grid, 3, 1, {}, 0.9);

    for (int idx : hi.stable_set) {
        CHECK(std::find(lo.stable_set.begin(), lo.stable_set.end(), idx) !=
              lo.stable_set.end());
    }
    // The informative feature survives even the strict threshold.
    CHECK(std::find(hi.stable_set.begin(), hi.stable_set.end(), 1) !=
          hi.stable_set.end());
}

TEST_CASE("monte_carlo_evaluate validates arguments") {
    const DiagnosisDataset data = make_separable(10, 3, 15);
    const Grid grid = default_grid(data);
    CHECK_THROWS_AS(monte_carlo_evaluate(data, 0, 0.25, grid, 3, 1),
                    ArgumentError);
    CHECK_THROWS_AS(monte_carlo_evaluate(data, 2, 0.0, grid, 3, 1),
                    ArgumentError);
    CHECK_THROWS_AS(monte_carlo_evaluate(data, 2, 1.0, grid, 3, 1),
                    ArgumentError);
    CHECK_THROWS_AS(grid_search(data, grid, 1, 1), ArgumentError);
    CHECK_THROWS_AS(grid_search(data, Grid{}, 3, 1), ArgumentError);
    // Failures inside a split surface as DataError naming the split.
    CHECK_THROWS_AS(monte_carlo_evaluate(data, 2, 0.25, grid, 1, 1), DataError);
}

#include "msprog/model_selection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "msprog/errors.hpp"
#include "msprog/format.hpp"
#include "msprog/quad.hpp"
#include "msprog/rng.hpp"

namespace msprog {

double balanced_accuracy(const std::vector<int>& y_true,
                         const std::vector<int>& y_pred) {
    if (y_true.empty() || y_true.size() != y_pred.size())
        throw ArgumentError("balanced_accuracy: need equal nonzero lengths");
    int tp = 0, fn = 0, tn = 0, fp = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] > 0)
            (y_pred[i] > 0 ? tp : fn)++;
        else
            (y_pred[i] > 0 ? fp : tn)++;
    }
    if (tp + fn == 0 || tn + fp == 0)
        throw DataError("balanced_accuracy: y_true contains a single class");
    const double sens = static_cast<double>(tp) / (tp + fn);
    const double spec = static_cast<double>(tn) / (tn + fp);
    return 0.5 * (sens + spec);
}

Grid default_grid(const DiagnosisDataset& data) {
    const double tau_max = diagnosis_tau_max(data);
    if (tau_max <= 0.0)
        throw DataError("default_grid: degenerate data, tau_max = 0");
    Grid grid;
    constexpr int kPoints = 20;
    const double ratio = std::pow(1e-3, 1.0 / (kPoints - 1));
    grid.taus.resize(kPoints);
    grid.taus[0] = tau_max;
    for (int i = 1; i < kPoints; ++i) grid.taus[i] = grid.taus[i - 1] * ratio;
    grid.taus.back() = 1e-3 * tau_max;  // pin the endpoint exactly
    grid.mus = {1e-3, 1e-2, 1e-1, 1.0};
    return grid;
}

namespace {

DiagnosisDataset subset_rows(const DiagnosisDataset& data,
                             const std::vector<int>& rows) {
    DiagnosisDataset out;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), data.X.cols());
    out.y.resize(static_cast<Eigen::Index>(rows.size()));
    out.provenance.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.X.row(static_cast<Eigen::Index>(i)) = data.X.row(rows[i]);
        out.y[static_cast<Eigen::Index>(i)] = data.y[rows[i]];
        out.provenance.push_back(data.provenance[static_cast<std::size_t>(rows[i])]);
    }
    return out;
}

// Row indices per class, shuffled deterministically.
std::pair<std::vector<int>, std::vector<int>> shuffled_classes(
    const DiagnosisDataset& data, std::mt19937_64& rng) {
    std::vector<int> pos, neg;
    for (Eigen::Index i = 0; i < data.y.size(); ++i)
        (data.y[i] > 0 ? pos : neg).push_back(static_cast<int>(i));
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    return {std::move(pos), std::move(neg)};
}

struct Candidate {
    double tau = 0.0, mu = 0.0, score = -1.0;
    bool better_than(const Candidate& other) const {
        if (score != other.score) return score > other.score;
        if (tau != other.tau) return tau > other.tau;
        return mu > other.mu;
    }
};

}  // namespace

GridSearchResult grid_search(const DiagnosisDataset& data, const Grid& grid,
                             int k_folds, std::uint64_t seed,
                             const SolverConfig& config) {
    if (k_folds < 2) throw ArgumentError("grid_search: k_folds must be >= 2");
    if (grid.taus.empty() || grid.mus.empty())
        throw ArgumentError("grid_search: empty grid");

    auto rng = std::mt19937_64(seed);
    auto [pos, neg] = shuffled_classes(data, rng);
    if (static_cast<int>(pos.size()) < k_folds ||
        static_cast<int>(neg.size()) < k_folds)
        throw DataError("grid_search: a fold would lose a class (need at "
                        "least k samples per class)");

    // Round-robin assignment keeps the folds stratified.
    std::vector<std::vector<int>> folds(static_cast<std::size_t>(k_folds));
    for (std::size_t i = 0; i < pos.size(); ++i)
        folds[i % static_cast<std::size_t>(k_folds)].push_back(pos[i]);
    for (std::size_t i = 0; i < neg.size(); ++i)
        folds[i % static_cast<std::size_t>(k_folds)].push_back(neg[i]);

    const std::size_t n_cells = grid.taus.size() * grid.mus.size();
    std::vector<double> cell_sum(n_cells, 0.0);

    for (int f = 0; f < k_folds; ++f) {
        std::vector<int> train_rows;
        for (int o = 0; o < k_folds; ++o)
            if (o != f)
                train_rows.insert(train_rows.end(),
                                  folds[static_cast<std::size_t>(o)].begin(),
                                  folds[static_cast<std::size_t>(o)].end());
        const auto& val_rows = folds[static_cast<std::size_t>(f)];

        const DiagnosisDataset train = subset_rows(data, train_rows);
        const Standardizer std_ = Standardizer::fit(train.X);
        const double intercept = train.y.mean();
        const Eigen::MatrixXd Xs = std_.apply(train.X);
        const Eigen::VectorXd yc = train.y.array() - intercept;
        const QuadLoss loss = QuadLoss::from_data(Xs, yc);
        const Eigen::MatrixXd Xval_s = std_.apply(subset_rows(data, val_rows).X);

        std::vector<int> yval;
        yval.reserve(val_rows.size());
        for (int r : val_rows) yval.push_back(data.y[r] > 0 ? +1 : -1);

        for (std::size_t mi = 0; mi < grid.mus.size(); ++mi) {
            // Warm start along the tau path (taus are decreasing).
            Eigen::VectorXd w = Eigen::VectorXd::Zero(data.X.cols());
            for (std::size_t ti = 0; ti < grid.taus.size(); ++ti) {
                w = solve_elastic_net(loss, grid.taus[ti], grid.mus[mi],
                                      config, w);
                const Eigen::VectorXd margins =
                    (Xval_s * w).array() + intercept;
                std::vector<int> ypred;
                ypred.reserve(yval.size());
                for (Eigen::Index i = 0; i < margins.size(); ++i)
                    ypred.push_back(margins[i] > 0.0 ? +1 : -1);
                cell_sum[ti * grid.mus.size() + mi] +=
                    balanced_accuracy(yval, ypred);
            }
        }
    }

    GridSearchResult result;
    Candidate best;
    for (std::size_t ti = 0; ti < grid.taus.size(); ++ti) {
        for (std::size_t mi = 0; mi < grid.mus.size(); ++mi) {
            const double mean = cell_sum[ti * grid.mus.size() + mi] / k_folds;
            result.table.push_back({grid.taus[ti], grid.mus[mi], mean});
            Candidate cand{grid.taus[ti], grid.mus[mi], mean};
            if (cand.better_than(best)) best = cand;
        }
    }
    result.tau = best.tau;
    result.mu = best.mu;
    return result;
}

namespace {

SplitRecord run_one_split(const DiagnosisDataset& data, double test_fraction,
                          const Grid& grid, int k_folds, std::uint64_t seed,
                          const SolverConfig& config, Eigen::VectorXd& w_out) {
    auto rng = std::mt19937_64(seed);
    auto [pos, neg] = shuffled_classes(data, rng);

    const auto n_test_pos = static_cast<std::size_t>(
        std::round(test_fraction * static_cast<double>(pos.size())));
    const auto n_test_neg = static_cast<std::size_t>(
        std::round(test_fraction * static_cast<double>(neg.size())));
    if (n_test_pos == 0 || n_test_neg == 0 || n_test_pos == pos.size() ||
        n_test_neg == neg.size())
        throw DataError("monte_carlo_evaluate: split would lose a class");

    std::vector<int> test_rows(pos.begin(),
                               pos.begin() + static_cast<long>(n_test_pos));
    test_rows.insert(test_rows.end(), neg.begin(),
                     neg.begin() + static_cast<long>(n_test_neg));
    std::vector<int> learn_rows(pos.begin() + static_cast<long>(n_test_pos),
                                pos.end());
    learn_rows.insert(learn_rows.end(),
                      neg.begin() + static_cast<long>(n_test_neg), neg.end());

    const DiagnosisDataset learn = subset_rows(data, learn_rows);
    const DiagnosisDataset test = subset_rows(data, test_rows);

    const GridSearchResult gs =
        grid_search(learn, grid, k_folds, derive_seed(seed, 1), config);
    const DiagnosisModel model =
        fit_diagnosis(learn, gs.tau, gs.mu, config);

    std::vector<int> y_true, y_pred;
    for (Eigen::Index i = 0; i < test.y.size(); ++i) {
        y_true.push_back(test.y[i] > 0 ? +1 : -1);
        y_pred.push_back(predict_course(model, test.X.row(i)).first);
    }

    w_out = model.w;
    return {balanced_accuracy(y_true, y_pred), gs.tau, gs.mu,
            model.selected_indices};
}

}  // namespace

ResamplingReport monte_carlo_evaluate(const DiagnosisDataset& data,
                                      int n_splits, double test_fraction,
                                      const Grid& grid, int k_folds,
                                      std::uint64_t master_seed,
                                      const SolverConfig& config,
                                      double stable_threshold, int n_threads) {
    if (n_splits < 1)
        throw ArgumentError("monte_carlo_evaluate: n_splits must be >= 1");
    if (test_fraction <= 0.0 || test_fraction >= 1.0)
        throw ArgumentError("monte_carlo_evaluate: test_fraction in (0, 1)");

    const auto d = data.X.cols();
    std::vector<SplitRecord> records(static_cast<std::size_t>(n_splits));
    std::vector<Eigen::VectorXd> weights(static_cast<std::size_t>(n_splits));

    if (n_threads == 0) {
        n_threads = static_cast<int>(std::thread::hardware_concurrency());
        if (n_threads < 1) n_threads = 1;
    }
    n_threads = std::min(n_threads, n_splits);

    std::atomic<int> next{0};
    std::mutex err_mutex;
    int err_split = -1;
    std::exception_ptr err;

    auto worker = [&]() {
        for (;;) {
            const int s = next.fetch_add(1);
            if (s >= n_splits) return;
            try {
                records[static_cast<std::size_t>(s)] = run_one_split(
                    data, test_fraction, grid, k_folds,
                    derive_seed(master_seed, static_cast<std::uint64_t>(s)),
                    config, weights[static_cast<std::size_t>(s)]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (err_split < 0 || s < err_split) {
                    err_split = s;
                    err = std::current_exception();
                }
            }
        }
    };

    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (err) {
        try {
            std::rethrow_exception(err);
        } catch (const std::exception& e) {
            throw DataError("monte_carlo_evaluate: split " +
                            std::to_string(err_split) + " failed: " + e.what());
        }
    }

    ResamplingReport report;
    report.n_splits = n_splits;
    report.test_fraction = test_fraction;
    report.splits = std::move(records);
    report.threshold = stable_threshold;

    double sum = 0.0;
    for (const auto& r : report.splits) sum += r.balanced_acc;
    report.mean_balanced_acc = sum / n_splits;
    if (n_splits > 1) {
        double ss = 0.0;
        for (const auto& r : report.splits) {
            const double dlt = r.balanced_acc - report.mean_balanced_acc;
            ss += dlt * dlt;
        }
        report.stddev_balanced_acc = std::sqrt(ss / (n_splits - 1));
    }

    report.frequencies.assign(static_cast<std::size_t>(d), 0.0);
    report.mean_weights = Eigen::VectorXd::Zero(d);
    for (std::size_t s = 0; s < report.splits.size(); ++s) {
        for (int idx : report.splits[s].selected)
            report.frequencies[static_cast<std::size_t>(idx - 1)] += 1.0;
        report.mean_weights += weights[s];
    }
    for (auto& f : report.frequencies) f /= n_splits;
    report.mean_weights /= static_cast<double>(n_splits);
    for (std::size_t j = 0; j < report.frequencies.size(); ++j)
        if (report.frequencies[j] >= stable_threshold)
            report.stable_set.push_back(static_cast<int>(j) + 1);
    return report;
}

std::string resampling_report_json(
    const ResamplingReport& report,
    const std::vector<std::string>& feature_names) {
    nlohmann::json doc;
    doc["n_splits"] = report.n_splits;
    doc["test_fraction"] = report.test_fraction;
    doc["mean_balanced_accuracy"] = report.mean_balanced_acc;
    if (report.stddev_balanced_acc)
        doc["stddev_balanced_accuracy"] = *report.stddev_balanced_acc;
    else
        doc["stddev_balanced_accuracy"] = nullptr;
    doc["stddev_convention"] = "sample (n-1)";
    doc["threshold"] = report.threshold;
    doc["stable_set"] = report.stable_set;
    doc["frequencies"] = report.frequencies;
    doc["feature_names"] = feature_names;
    nlohmann::json splits = nlohmann::json::array();
    for (const auto& r : report.splits) {
        splits.push_back({{"balanced_accuracy", r.balanced_acc},
                          {"tau", r.tau},
                          {"mu", r.mu},
                          {"selected", r.selected}});
    }
    doc["splits"] = std::move(splits);
    return doc.dump(2) + "\n";
}

std::string frequencies_csv(const ResamplingReport& report,
                            const std::vector<std::string>& feature_names) {
    std::ostringstream out;
    out << "feature_name,frequency,mean_weight\n";
    for (std::size_t j = 0; j < report.frequencies.size(); ++j) {
        const std::string name = j < feature_names.size()
                                     ? feature_names[j]
                                     : "q" + std::to_string(j + 1);
        out << name << ',' << format_double(report.frequencies[j]) << ','
            << format_double(report.mean_weights[static_cast<Eigen::Index>(j)])
            << '\n';
    }
    return out.str();
}

}  // namespace msprog

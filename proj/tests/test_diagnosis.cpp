#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "msprog/diagnosis.hpp"
#include "msprog/errors.hpp"

using namespace msprog;

namespace {

DiagnosisDataset random_dataset(std::mt19937_64& rng, int n, int d,
                                int informative) {
    std::normal_distribution<double> gauss;
    DiagnosisDataset ds;
    ds.X.resize(n, d);
    ds.y.resize(n);
    for (int i = 0; i < n; ++i) {
        double score = 0.0;
        for (int j = 0; j < d; ++j) {
            ds.X(i, j) = gauss(rng);
            if (j < informative) score += ds.X(i, j);
        }
        ds.y[i] = score > 0 ? +1.0 : -1.0;
        ds.provenance.push_back({"p" + std::to_string(i), 1});
    }
    return ds;
}

DiagnosisModel identity_model(const Eigen::VectorXd& w, double intercept) {
    DiagnosisModel m;
    m.w = w;
    m.intercept = intercept;
    m.standardization.mean = Eigen::VectorXd::Zero(w.size());
    m.standardization.stddev = Eigen::VectorXd::Ones(w.size());
    return m;
}

}  // namespace

TEST_CASE("separable two-point problem selects the informative axis") {
    DiagnosisDataset ds;
    ds.X.resize(2, 2);
    ds.X << 1.0, 0.0, -1.0, 0.0;
    ds.y.resize(2);
    ds.y << 1.0, -1.0;
    ds.provenance = {{"a", 1}, {"b", 1}};

    const DiagnosisModel model = fit_diagnosis(ds, 1e-3, 1e-3);
    CHECK(model.w[0] > 0.0);
    CHECK(predict_course(model, ds.X.row(0)).first == +1);
    CHECK(predict_course(model, ds.X.row(1)).first == -1);
}

TEST_CASE("tau at tau_max gives the all-zero model") {
    std::mt19937_64 rng(17);
    const auto ds = random_dataset(rng, 50, 8, 3);
    const double tmax = diagnosis_tau_max(ds);
    const DiagnosisModel model = fit_diagnosis(ds, tmax, 0.0);
    CHECK(model.w.norm() == 0.0);
    CHECK(model.selected_indices.empty());
}

TEST_CASE("extreme ridge shrinks the weights to zero") {
    std::mt19937_64 rng(18);
    const auto ds = random_dataset(rng, 50, 8, 3);
    const DiagnosisModel model = fit_diagnosis(ds, 0.0, 1e8);
    CHECK(model.w.norm() < 1e-4);
}

TEST_CASE("fit rejects degenerate labels and bad arguments") {
    std::mt19937_64 rng(19);
    auto ds = random_dataset(rng, 20, 4, 2);
    ds.y.setOnes();
    CHECK_THROWS_AS(fit_diagnosis(ds, 0.1, 0.1), DataError);

    const auto ok = random_dataset(rng, 20, 4, 2);
    CHECK_THROWS_AS(fit_diagnosis(ok, -0.1, 0.1), ArgumentError);
}

TEST_CASE("predict_course margins and tie rule") {
    Eigen::VectorXd w(2);
    w << 1.0, 0.0;
    const DiagnosisModel model = identity_model(w, 0.0);

    Eigen::VectorXd x(2);
    x << 2.0, 7.0;
    auto [label, margin] = predict_course(model, x);
    CHECK(label == +1);
    CHECK(margin == doctest::Approx(2.0));

    x << 0.0, 3.0;  // margin exactly zero -> RR
    CHECK(predict_course(model, x).first == -1);

    const DiagnosisModel constant =
        identity_model(Eigen::VectorXd::Zero(2), -0.2);
    CHECK(predict_course(constant, x) ==
          std::pair<int, double>(-1, -0.2));

    Eigen::VectorXd wrong(3);
    CHECK_THROWS_AS(predict_course(model, wrong), ArgumentError);
}

TEST_CASE("selected_variables is the exact 1-based support") {
    Eigen::VectorXd w(4);
    w << 0.0, 3.2, 0.0, -0.1;
    DiagnosisModel model = identity_model(w, 0.0);
    model.selected_indices = {2, 4};
    CHECK(selected_variables(model) == std::vector<int>{2, 4});

    model = identity_model(Eigen::VectorXd::Zero(4), 0.0);
    CHECK(selected_variables(model).empty());
}

TEST_CASE("subgradient optimality certificate at the solution") {
    std::mt19937_64 rng(23);
    const auto ds = random_dataset(rng, 80, 10, 4);
    const double tau = 0.3 * diagnosis_tau_max(ds);
    const double mu = 0.01;
    SolverConfig config;
    config.tol = 1e-10;
    const DiagnosisModel model = fit_diagnosis(ds, tau, mu, config);

    const Eigen::MatrixXd Xs = model.standardization.apply(ds.X);
    const Eigen::VectorXd yc = ds.y.array() - ds.y.mean();
    const Eigen::VectorXd grad =
        (2.0 / ds.X.rows()) * (Xs.transpose() * (Xs * model.w - yc)) +
        2.0 * mu * model.w;
    for (int j = 0; j < 10; ++j) {
        if (model.w[j] != 0.0)
            CHECK(std::abs(grad[j] + tau * (model.w[j] > 0 ? 1.0 : -1.0)) <
                  1e-4);
        else
            CHECK(std::abs(grad[j]) <= tau + 1e-4);
    }
}

TEST_CASE("average support size is nonincreasing in tau") {
    std::mt19937_64 rng(29);
    std::vector<double> avg_support(5, 0.0);
    const std::vector<double> fractions{0.9, 0.6, 0.3, 0.1, 0.02};
    for (int rep = 0; rep < 20; ++rep) {
        const auto ds = random_dataset(rng, 60, 12, 4);
        const double tmax = diagnosis_tau_max(ds);
        for (std::size_t k = 0; k < fractions.size(); ++k) {
            const DiagnosisModel m = fit_diagnosis(ds, fractions[k] * tmax, 0.01);
            avg_support[k] += static_cast<double>(m.selected_indices.size());
        }
    }
    for (std::size_t k = 1; k < avg_support.size(); ++k)
        CHECK(avg_support[k] >= avg_support[k - 1]);
}

TEST_CASE("predictions are invariant under positive feature rescaling") {
    std::mt19937_64 rng(37);
    const auto ds = random_dataset(rng, 60, 6, 3);
    const DiagnosisModel base = fit_diagnosis(ds, 0.05, 0.01);

    DiagnosisDataset scaled = ds;
    scaled.X.col(2) *= 17.5;
    const DiagnosisModel rescaled = fit_diagnosis(scaled, 0.05, 0.01);

    for (int i = 0; i < ds.X.rows(); ++i) {
        Eigen::VectorXd x = ds.X.row(i);
        Eigen::VectorXd xs = x;
        xs[2] *= 17.5;
        CHECK(predict_course(base, x).first ==
              predict_course(rescaled, xs).first);
    }
}

TEST_CASE("permuting feature columns permutes the weights") {
    std::mt19937_64 rng(41);
    const auto ds = random_dataset(rng, 60, 5, 2);
    const DiagnosisModel base = fit_diagnosis(ds, 0.05, 0.01);

    // Reverse the columns.
    DiagnosisDataset perm = ds;
    perm.X = ds.X.rowwise().reverse();
    const DiagnosisModel reversed = fit_diagnosis(perm, 0.05, 0.01);
    CHECK((reversed.w.reverse() - base.w).norm() < 1e-8);
}

TEST_CASE("constant features get unit stddev and are never selected") {
    std::mt19937_64 rng(43);
    auto ds = random_dataset(rng, 40, 4, 2);
    ds.X.col(3).setConstant(7.0);
    const DiagnosisModel model = fit_diagnosis(ds, 1e-4, 1e-4);
    CHECK(model.standardization.stddev[3] == 1.0);
    CHECK(model.w[3] == 0.0);
}

TEST_CASE("model JSON round-trip is value-exact") {
    std::mt19937_64 rng(47);
    const auto ds = random_dataset(rng, 60, 7, 3);
    DiagnosisModel model = fit_diagnosis(ds, 0.02, 0.01);
    model.feature_names = {"q001", "q002", "q003", "q004",
                           "q005", "q006", "q007"};

    const DiagnosisModel back = diagnosis_from_json(diagnosis_to_json(model));
    CHECK(back.w == model.w);  // bitwise
    CHECK(back.intercept == model.intercept);
    CHECK(back.standardization.mean == model.standardization.mean);
    CHECK(back.standardization.stddev == model.standardization.stddev);
    CHECK(back.tau == model.tau);
    CHECK(back.mu == model.mu);
    CHECK(back.selected_indices == model.selected_indices);
    CHECK(back.feature_names == model.feature_names);
    // And the round-trip of the serialized text is byte-stable.
    CHECK(diagnosis_to_json(back) == diagnosis_to_json(model));
}

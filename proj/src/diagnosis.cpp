#include "msprog/diagnosis.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "msprog/errors.hpp"
#include "msprog/quad.hpp"

namespace msprog {

using nlohmann::json;

Standardizer Standardizer::fit(const Eigen::MatrixXd& X) {
    Standardizer s;
    const auto n = static_cast<double>(X.rows());
    s.mean = X.colwise().mean();
    s.stddev.resize(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double var = (X.col(j).array() - s.mean[j]).square().sum() / n;
        const double sd = std::sqrt(var);
        s.stddev[j] = sd > 0.0 ? sd : 1.0;  // constant feature
    }
    return s;
}

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& x) const {
    if (x.size() != mean.size())
        throw ArgumentError("Standardizer: dimension mismatch");
    return (x - mean).cwiseQuotient(stddev);
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& X) const {
    if (X.cols() != mean.size())
        throw ArgumentError("Standardizer: dimension mismatch");
    return (X.rowwise() - mean.transpose()).array().rowwise() /
           stddev.transpose().array();
}

namespace {

std::vector<int> support_of(const Eigen::VectorXd& w) {
    std::vector<int> idx;
    for (Eigen::Index j = 0; j < w.size(); ++j)
        if (w[j] != 0.0) idx.push_back(static_cast<int>(j) + 1);
    return idx;
}

void check_two_classes(const Eigen::VectorXd& y) {
    bool pos = false, neg = false;
    for (Eigen::Index i = 0; i < y.size(); ++i) (y[i] > 0 ? pos : neg) = true;
    if (!pos || !neg)
        throw DataError("fit_diagnosis: labels contain a single class");
}

}  // namespace

double diagnosis_tau_max(const DiagnosisDataset& data) {
    const Standardizer std_ = Standardizer::fit(data.X);
    const Eigen::MatrixXd Xs = std_.apply(data.X);
    const Eigen::VectorXd yc =
        data.y.array() - data.y.mean();
    return (2.0 / static_cast<double>(data.X.rows())) *
           (Xs.transpose() * yc).lpNorm<Eigen::Infinity>();
}

DiagnosisModel fit_diagnosis(const DiagnosisDataset& data, double tau,
                             double mu, const SolverConfig& config,
                             SolverReport* report,
                             const std::vector<std::string>& feature_names) {
    if (data.X.rows() < 2) throw DataError("fit_diagnosis: need N >= 2");
    if (tau < 0.0 || mu < 0.0)
        throw ArgumentError("fit_diagnosis: tau and mu must be >= 0");
    check_two_classes(data.y);

    DiagnosisModel model;
    model.standardization = Standardizer::fit(data.X);
    model.tau = tau;
    model.mu = mu;
    model.feature_names = feature_names;
    model.intercept = data.y.mean();

    const Eigen::MatrixXd Xs = model.standardization.apply(data.X);
    const Eigen::VectorXd yc = data.y.array() - model.intercept;
    const QuadLoss loss = QuadLoss::from_data(Xs, yc);

    model.w = solve_elastic_net(loss, tau, mu, config,
                                Eigen::VectorXd::Zero(data.X.cols()), report);
    model.selected_indices = support_of(model.w);
    return model;
}

std::pair<int, double> predict_course(const DiagnosisModel& model,
                                      const Eigen::VectorXd& x) {
    const double margin =
        model.standardization.apply(x).dot(model.w) + model.intercept;
    return {margin > 0.0 ? +1 : -1, margin};
}

std::vector<int> selected_variables(const DiagnosisModel& model) {
    return model.selected_indices;
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd vector_from_json(const json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
}

}  // namespace

std::string diagnosis_to_json(const DiagnosisModel& model) {
    json doc;
    doc["format_version"] = 1;
    doc["w"] = vector_to_json(model.w);
    doc["intercept"] = model.intercept;
    doc["means"] = vector_to_json(model.standardization.mean);
    doc["stddevs"] = vector_to_json(model.standardization.stddev);
    doc["tau"] = model.tau;
    doc["mu"] = model.mu;
    doc["selected_indices"] = model.selected_indices;
    doc["feature_names"] = model.feature_names;
    return doc.dump(2) + "\n";
}

DiagnosisModel diagnosis_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("diagnosis model JSON: ") + e.what());
    }
    if (!doc.contains("format_version") || doc["format_version"] != 1)
        throw ParseError("diagnosis model JSON: unsupported format_version");
    DiagnosisModel model;
    model.w = vector_from_json(doc.at("w"));
    model.intercept = doc.at("intercept").get<double>();
    model.standardization.mean = vector_from_json(doc.at("means"));
    model.standardization.stddev = vector_from_json(doc.at("stddevs"));
    model.tau = doc.at("tau").get<double>();
    model.mu = doc.at("mu").get<double>();
    model.selected_indices = doc.at("selected_indices").get<std::vector<int>>();
    model.feature_names =
        doc.at("feature_names").get<std::vector<std::string>>();
    return model;
}

void save_diagnosis(const DiagnosisModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot open for writing: " + path);
    out << diagnosis_to_json(model);
}

DiagnosisModel load_diagnosis(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open diagnosis model: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return diagnosis_from_json(ss.str());
}

}  // namespace msprog

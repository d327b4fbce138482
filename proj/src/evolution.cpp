#include "msprog/evolution.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "msprog/errors.hpp"
#include "msprog/quad.hpp"

namespace msprog {

using nlohmann::json;

double evolution_tau_max(const EvolutionDataset& data) {
    const Standardizer std_ = Standardizer::fit(data.X);
    const Eigen::MatrixXd Xs = std_.apply(data.X);
    const Eigen::MatrixXd Yc = data.Y.rowwise() - data.Y.colwise().mean();
    const Eigen::MatrixXd grad0 =
        (2.0 / static_cast<double>(data.X.rows())) * (Xs.transpose() * Yc);
    double m = 0.0;
    for (Eigen::Index r = 0; r < grad0.rows(); ++r)
        m = std::max(m, grad0.row(r).norm());
    return m;
}

EvolutionModel fit_evolution(const EvolutionDataset& data, double tau_g,
                             const SolverConfig& config, SolverReport* report) {
    if (data.X.rows() < 2) throw DataError("fit_evolution: need N' >= 2");
    if (tau_g < 0.0) throw ArgumentError("fit_evolution: tau_g must be >= 0");
    if (data.Y.cols() != static_cast<Eigen::Index>(data.selected_indices.size()))
        throw ArgumentError("fit_evolution: Y / selected_indices mismatch");

    EvolutionModel model;
    model.standardization = Standardizer::fit(data.X);
    model.selected_indices = data.selected_indices;
    model.tau_g = tau_g;
    model.intercepts = data.Y.colwise().mean();

    const Eigen::MatrixXd Xs = model.standardization.apply(data.X);
    const Eigen::MatrixXd Yc = data.Y.rowwise() - model.intercepts.transpose();
    const QuadLoss loss = QuadLoss::from_data(Xs, Yc);

    model.W = solve_row_group(
        loss, tau_g, config,
        Eigen::MatrixXd::Zero(data.X.cols(), data.Y.cols()), report);
    return model;
}

Eigen::VectorXd predict_next(const EvolutionModel& model,
                             const Eigen::VectorXd& x) {
    return model.W.transpose() * model.standardization.apply(x) +
           model.intercepts;
}

namespace {

json vec_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd vec_from(const json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
}

}  // namespace

std::string evolution_to_json(const EvolutionModel& model) {
    json doc;
    doc["format_version"] = 1;
    doc["rows"] = model.W.rows();
    doc["cols"] = model.W.cols();
    json w = json::array();  // row-major
    for (Eigen::Index r = 0; r < model.W.rows(); ++r)
        for (Eigen::Index c = 0; c < model.W.cols(); ++c)
            w.push_back(model.W(r, c));
    doc["W"] = std::move(w);
    doc["intercepts"] = vec_json(model.intercepts);
    doc["means"] = vec_json(model.standardization.mean);
    doc["stddevs"] = vec_json(model.standardization.stddev);
    doc["tau_g"] = model.tau_g;
    doc["selected_indices"] = model.selected_indices;
    return doc.dump(2) + "\n";
}

EvolutionModel evolution_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("evolution model JSON: ") + e.what());
    }
    if (!doc.contains("format_version") || doc["format_version"] != 1)
        throw ParseError("evolution model JSON: unsupported format_version");
    EvolutionModel model;
    const auto rows = doc.at("rows").get<Eigen::Index>();
    const auto cols = doc.at("cols").get<Eigen::Index>();
    const auto& w = doc.at("W");
    if (static_cast<Eigen::Index>(w.size()) != rows * cols)
        throw ParseError("evolution model JSON: W size mismatch");
    model.W.resize(rows, cols);
    std::size_t i = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            model.W(r, c) = w[i++].get<double>();
    model.intercepts = vec_from(doc.at("intercepts"));
    model.standardization.mean = vec_from(doc.at("means"));
    model.standardization.stddev = vec_from(doc.at("stddevs"));
    model.tau_g = doc.at("tau_g").get<double>();
    model.selected_indices = doc.at("selected_indices").get<std::vector<int>>();
    return model;
}

void save_evolution(const EvolutionModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot open for writing: " + path);
    out << evolution_to_json(model);
}

EvolutionModel load_evolution(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open evolution model: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return evolution_from_json(ss.str());
}

}  // namespace msprog

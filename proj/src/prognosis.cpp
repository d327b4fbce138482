#include "msprog/prognosis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "msprog/errors.hpp"
#include "msprog/format.hpp"

namespace msprog {

namespace {

// f may only weight variables whose future values g provides.
void check_composition(const DiagnosisModel& f, const EvolutionModel& g) {
    std::vector<bool> covered(static_cast<std::size_t>(f.w.size()), false);
    for (int idx : g.selected_indices)
        if (idx >= 1 && idx <= f.w.size())
            covered[static_cast<std::size_t>(idx - 1)] = true;
    for (Eigen::Index j = 0; j < f.w.size(); ++j) {
        if (f.w[j] != 0.0 && !covered[static_cast<std::size_t>(j)]) {
            throw CompositionError(
                "prognosis: diagnosis model selects variable " +
                std::to_string(j + 1) +
                " but the evolution model does not predict it");
        }
    }
}

Eigen::VectorXd assemble(const Eigen::VectorXd& base,
                         const std::vector<int>& selected,
                         const Eigen::VectorXd& values) {
    Eigen::VectorXd out = base;
    for (std::size_t k = 0; k < selected.size(); ++k)
        out[selected[k] - 1] = values[static_cast<Eigen::Index>(k)];
    return out;
}

}  // namespace

OneStepPrognosis prognose_one_step(const DiagnosisModel& f,
                                   const EvolutionModel& g,
                                   const Eigen::VectorXd& x) {
    check_composition(f, g);
    OneStepPrognosis result;
    result.predicted_selected = predict_next(g, x);
    const Eigen::VectorXd x_next =
        assemble(x, g.selected_indices, result.predicted_selected);
    auto [label, margin] = predict_course(f, x_next);
    result.label = label;
    result.margin = margin;
    return result;
}

double concordance_rate(const std::vector<int>& predicted,
                        const std::vector<int>& clinician) {
    if (predicted.empty() || predicted.size() != clinician.size())
        throw ArgumentError("concordance_rate: need equal nonzero lengths");
    std::size_t matches = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == clinician[i]) ++matches;
    return static_cast<double>(matches) / static_cast<double>(predicted.size());
}

std::vector<RolloutStep> rollout(const DiagnosisModel& f,
                                 const EvolutionModel& g,
                                 const Eigen::VectorXd& x_last, int horizon,
                                 FillPolicy fill) {
    if (horizon < 1) throw ArgumentError("rollout: horizon must be >= 1");
    check_composition(f, g);

    std::vector<bool> selected(static_cast<std::size_t>(x_last.size()), false);
    for (int idx : g.selected_indices)
        selected[static_cast<std::size_t>(idx - 1)] = true;

    std::vector<RolloutStep> steps;
    steps.reserve(static_cast<std::size_t>(horizon));
    Eigen::VectorXd x = x_last;
    for (int s = 1; s <= horizon; ++s) {
        const Eigen::VectorXd pred = predict_next(g, x);
        Eigen::VectorXd x_next = assemble(x, g.selected_indices, pred);
        if (fill == FillPolicy::LearningMean) {
            for (Eigen::Index j = 0; j < x_next.size(); ++j)
                if (!selected[static_cast<std::size_t>(j)])
                    x_next[j] = f.standardization.mean[j];
        }
        auto [label, margin] = predict_course(f, x_next);
        steps.push_back({s, label, margin});
        x = std::move(x_next);
    }
    return steps;
}

PrognosisResult evaluate_prognosis(const DiagnosisModel& f,
                                   const EvolutionModel& g,
                                   const LongitudinalCohort& cohort,
                                   int t_prime) {
    if (t_prime < 1 || t_prime >= cohort.time_points)
        throw ArgumentError("evaluate_prognosis: require 1 <= T' < T");
    check_composition(f, g);

    const ImputePolicy impute = median_impute_policy(cohort, 1, t_prime);

    PrognosisResult result;
    std::vector<int> predicted, clinician;
    for (const auto& p : cohort.patients) {
        for (const auto& [t, x] : p.observations) {
            if (t < t_prime) continue;  // target t+1 must be in the test range
            auto lab = p.labels.find(t + 1);
            if (lab == p.labels.end()) continue;
            Eigen::VectorXd xi = x;
            for (Eigen::Index j = 0; j < xi.size(); ++j)
                if (std::isnan(xi[j])) xi[j] = impute.fill[j];
            const OneStepPrognosis one = prognose_one_step(f, g, xi);
            result.records.push_back(
                {p.patient_id, t + 1, one.label, one.margin, lab->second});
            predicted.push_back(one.label);
            clinician.push_back(lab->second);
        }
    }
    if (result.records.empty())
        throw DataError("evaluate_prognosis: empty test set (no scorable "
                        "(x^t, y^{t+1}) pairs)");

    std::sort(result.records.begin(), result.records.end(),
              [](const PrognosisRecord& a, const PrognosisRecord& b) {
                  return std::tie(a.patient_id, a.time_point) <
                         std::tie(b.patient_id, b.time_point);
              });
    result.n_scored = static_cast<int>(result.records.size());
    result.concordance = concordance_rate(predicted, clinician);
    return result;
}

std::string prognosis_csv(const PrognosisResult& result) {
    std::ostringstream out;
    out << "patient_id,time_point,predicted,margin,clinician_label\n";
    for (const auto& r : result.records) {
        out << r.patient_id << ',' << r.time_point << ','
            << (r.predicted > 0 ? "+1" : "-1") << ',' << format_double(r.margin)
            << ',';
        if (r.clinician) out << (*r.clinician > 0 ? "+1" : "-1");
        out << '\n';
    }
    return out.str();
}

std::string prognosis_summary_json(const PrognosisResult& result) {
    nlohmann::json doc;
    doc["concordance"] = result.concordance;
    doc["n_scored"] = result.n_scored;
    return doc.dump(2) + "\n";
}

}  // namespace msprog

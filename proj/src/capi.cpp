#include "msprog.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "msprog/cohort.hpp"
#include "msprog/diagnosis.hpp"
#include "msprog/errors.hpp"
#include "msprog/evolution.hpp"
#include "msprog/format.hpp"
#include "msprog/pipeline.hpp"
#include "msprog/prognosis.hpp"
#include "msprog/synth.hpp"

struct msprog_cohort {
    msprog::LongitudinalCohort value;
};
struct msprog_diagnosis {
    msprog::DiagnosisModel value;
};
struct msprog_evolution {
    msprog::EvolutionModel value;
};

namespace {

thread_local std::string g_last_error;

msprog_status set_error(msprog_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

// Translates C++ exceptions into status codes at the API boundary.
template <typename Fn>
msprog_status guarded(Fn&& fn) {
    try {
        fn();
        return MSPROG_OK;
    } catch (const msprog::ArgumentError& e) {
        return set_error(MSPROG_E_ARGUMENT, e.what());
    } catch (const msprog::ParseError& e) {
        return set_error(MSPROG_E_PARSE, e.what());
    } catch (const msprog::IOError& e) {
        return set_error(MSPROG_E_IO, e.what());
    } catch (const msprog::DataError& e) {
        return set_error(MSPROG_E_DATA, e.what());
    } catch (const msprog::SolverError& e) {
        return set_error(MSPROG_E_SOLVER, e.what());
    } catch (const msprog::CompositionError& e) {
        return set_error(MSPROG_E_COMPOSITION, e.what());
    } catch (const std::exception& e) {
        return set_error(MSPROG_E_IO, e.what());
    }
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw msprog::IOError("cannot open for writing: " + path);
    out << content;
    if (!out) throw msprog::IOError("write failed: " + path);
}

}  // namespace

extern "C" {

const char* msprog_last_error(void) { return g_last_error.c_str(); }

void msprog_string_free(char* s) { delete[] s; }

msprog_status msprog_cohort_load(const char* csv_path, msprog_cohort** out) {
    if (!csv_path || !out)
        return set_error(MSPROG_E_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *out = new msprog_cohort{msprog::load_cohort_file(csv_path)};
    });
}

void msprog_cohort_free(msprog_cohort* cohort) { delete cohort; }

int msprog_cohort_n_patients(const msprog_cohort* cohort) {
    return cohort ? static_cast<int>(cohort->value.patients.size()) : 0;
}
int msprog_cohort_n_features(const msprog_cohort* cohort) {
    return cohort ? cohort->value.n_features : 0;
}
int msprog_cohort_time_points(const msprog_cohort* cohort) {
    return cohort ? cohort->value.time_points : 0;
}

void msprog_synth_params_init(msprog_synth_params* params) {
    if (!params) return;
    const msprog::SynthConfig defaults;
    params->n_patients = defaults.n_patients;
    params->time_points = defaults.time_points;
    params->n_features = defaults.n_features;
    params->support_size = defaults.support_size;
    params->drift = defaults.drift;
    params->process_noise = defaults.process_noise;
    params->flip_prob = defaults.flip_prob;
    params->margin = defaults.margin;
    params->bias_scale = defaults.bias_scale;
    params->quantize = defaults.quantize ? 1 : 0;
    params->quant_levels = defaults.quant_levels;
    params->dropout = defaults.dropout;
    params->misspecified = defaults.misspecified ? 1 : 0;
    params->seed = defaults.seed;
}

msprog_status msprog_generate(const msprog_synth_params* params,
                              const char* cohort_csv_path,
                              const char* truth_json_path) {
    if (!params || !cohort_csv_path)
        return set_error(MSPROG_E_ARGUMENT, "null pointer argument");
    return guarded([&] {
        msprog::SynthConfig config;
        config.n_patients = params->n_patients;
        config.time_points = params->time_points;
        config.n_features = params->n_features;
        config.support_size = params->support_size;
        config.drift = params->drift;
        config.process_noise = params->process_noise;
        config.flip_prob = params->flip_prob;
        config.margin = params->margin;
        config.bias_scale = params->bias_scale;
        config.quantize = params->quantize != 0;
        config.quant_levels = params->quant_levels;
        config.dropout = params->dropout;
        config.misspecified = params->misspecified != 0;
        config.seed = params->seed;

        auto [cohort, truth] = msprog::generate_cohort(config);
        std::ostringstream csv;
        msprog::write_cohort_csv(cohort, csv);
        write_file(cohort_csv_path, csv.str());
        if (truth_json_path)
            write_file(truth_json_path, msprog::ground_truth_json(truth));
    });
}

void msprog_fit_params_init(msprog_fit_params* params) {
    if (!params) return;
    const msprog::FitParams defaults;
    params->t_prime = defaults.t_prime;
    params->n_splits = defaults.n_splits;
    params->test_fraction = defaults.test_fraction;
    params->k_folds = defaults.k_folds;
    params->stable_threshold = defaults.stable_threshold;
    params->max_iter = defaults.solver.max_iter;
    params->tol = defaults.solver.tol;
    params->threads = defaults.threads;
    params->seed = defaults.seed;
}

msprog_status msprog_fit(const msprog_cohort* cohort,
                         const msprog_fit_params* params,
                         msprog_diagnosis** diagnosis_out,
                         msprog_evolution** evolution_out, char** report_json,
                         char** frequencies_csv) {
    if (!cohort || !params)
        return set_error(MSPROG_E_ARGUMENT, "null pointer argument");
    return guarded([&] {
        msprog::FitParams p;
        p.t_prime = params->t_prime;
        p.n_splits = params->n_splits;
        p.test_fraction = params->test_fraction;
        p.k_folds = params->k_folds;
        p.stable_threshold = params->stable_threshold;
        p.solver.max_iter = params->max_iter;
        p.solver.tol = params->tol;
        p.threads = params->threads;
        p.seed = params->seed;

        msprog::FitResult result = msprog::fit_pipeline(cohort->value, p);
        if (report_json)
            *report_json = copy_string(msprog::resampling_report_json(
                result.report, cohort->value.feature_names));
        if (frequencies_csv)
            *frequencies_csv = copy_string(msprog::frequencies_csv(
                result.report, cohort->value.feature_names));
        if (diagnosis_out)
            *diagnosis_out = new msprog_diagnosis{std::move(result.diagnosis)};
        if (evolution_out)
            *evolution_out = new msprog_evolution{std::move(result.evolution)};
    });
}

void msprog_diagnosis_free(msprog_diagnosis* model) { delete model; }
void msprog_evolution_free(msprog_evolution* model) { delete model; }

msprog_status msprog_diagnosis_save(const msprog_diagnosis* model,
                                    const char* path) {
    if (!model || !path)
        return set_error(MSPROG_E_ARGUMENT, "null pointer argument");
    return guarded([&] { msprog::save_diagnosis(model->value, path); });
}

msprog_status msprog_diagnosis_load(const char* path, msprog_diagnosis** out) {
    if (!path || !out)
        return set_error(MSPROG_E_ARGUMENT, "null pointer argument");
    return guarded(
        [&] { *out = new msprog_diagnosis{msprog::load_diagnosis(path)}; });
}

msprog_status msprog_evolution_save(const msprog_evolution* model,
                                    const char* path) {
    if (!model || !path)
        return set_error(MSPROG_E_ARGUMENT, "null pointer argument");
    return guarded([&] { msprog::save_evolution(model->value, path); });
}

msprog_status msprog_evolution_load(const char* path, msprog_evolution** out) {
    if (!path || !out)
        return set_error(MSPROG_E_ARGUMENT, "null pointer argument");
    return guarded(
        [&] { *out = new msprog_evolution{msprog::load_evolution(path)}; });
}

msprog_status msprog_diagnosis_predict(const msprog_diagnosis* model,
                                       const double* x, int d, int* label,
                                       double* margin) {
    if (!model || !x)
        return set_error(MSPROG_E_ARGUMENT, "null pointer argument");
    return guarded([&] {
        if (d != model->value.w.size())
            throw msprog::ArgumentError("predict: dimension mismatch");
        const Eigen::VectorXd xi = Eigen::Map<const Eigen::VectorXd>(x, d);
        auto [lab, m] = msprog::predict_course(model->value, xi);
        if (label) *label = lab;
        if (margin) *margin = m;
    });
}

int msprog_evolution_n_outputs(const msprog_evolution* model) {
    return model ? static_cast<int>(model->value.W.cols()) : 0;
}

msprog_status msprog_evolution_predict(const msprog_evolution* model,
                                       const double* x, int d, double* next) {
    if (!model || !x || !next)
        return set_error(MSPROG_E_ARGUMENT, "null pointer argument");
    return guarded([&] {
        if (d != model->value.W.rows())
            throw msprog::ArgumentError("predict: dimension mismatch");
        const Eigen::VectorXd xi = Eigen::Map<const Eigen::VectorXd>(x, d);
        const Eigen::VectorXd out = msprog::predict_next(model->value, xi);
        std::copy(out.data(), out.data() + out.size(), next);
    });
}

msprog_status msprog_evaluate(const msprog_cohort* cohort,
                              const msprog_diagnosis* diagnosis,
                              const msprog_evolution* evolution, int t_prime,
                              char** report_csv, char** summary_json) {
    if (!cohort || !diagnosis || !evolution)
        return set_error(MSPROG_E_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const msprog::PrognosisResult result = msprog::evaluate_prognosis(
            diagnosis->value, evolution->value, cohort->value, t_prime);
        if (report_csv) *report_csv = copy_string(msprog::prognosis_csv(result));
        if (summary_json)
            *summary_json = copy_string(msprog::prognosis_summary_json(result));
    });
}

msprog_status msprog_prognose(const msprog_cohort* cohort,
                              const msprog_diagnosis* diagnosis,
                              const msprog_evolution* evolution, int horizon,
                              msprog_fill_policy fill, char** report_csv,
                              char** summary_json) {
    if (!cohort || !diagnosis || !evolution)
        return set_error(MSPROG_E_ARGUMENT, "null pointer argument");
    return guarded([&] {
        if (horizon < 1)
            throw msprog::ArgumentError("prognose: horizon must be >= 1");
        const msprog::FillPolicy policy = fill == MSPROG_FILL_LEARNING_MEAN
                                              ? msprog::FillPolicy::LearningMean
                                              : msprog::FillPolicy::HoldLast;
        const msprog::ImputePolicy impute = msprog::median_impute_policy(
            cohort->value, 1, cohort->value.time_points);

        // Sorted patient order keeps the output deterministic.
        std::vector<const msprog::PatientSeries*> patients;
        for (const auto& p : cohort->value.patients)
            if (!p.observations.empty()) patients.push_back(&p);
        std::sort(patients.begin(), patients.end(),
                  [](const auto* a, const auto* b) {
                      return a->patient_id < b->patient_id;
                  });

        std::ostringstream csv;
        csv << "patient_id,step,predicted,margin\n";
        std::vector<int> sp_count(static_cast<std::size_t>(horizon), 0);
        for (const auto* p : patients) {
            Eigen::VectorXd x = p->observations.rbegin()->second;
            for (Eigen::Index j = 0; j < x.size(); ++j)
                if (std::isnan(x[j])) x[j] = impute.fill[j];
            const auto steps = msprog::rollout(diagnosis->value,
                                               evolution->value, x, horizon,
                                               policy);
            for (const auto& s : steps) {
                csv << p->patient_id << ',' << s.step << ','
                    << (s.label > 0 ? "+1" : "-1") << ','
                    << msprog::format_double(s.margin) << '\n';
                if (s.label > 0)
                    sp_count[static_cast<std::size_t>(s.step - 1)]++;
            }
        }
        if (report_csv) *report_csv = copy_string(csv.str());
        if (summary_json) {
            nlohmann::json doc;
            doc["horizon"] = horizon;
            doc["n_patients"] = patients.size();
            nlohmann::json frac = nlohmann::json::array();
            for (int c : sp_count)
                frac.push_back(patients.empty()
                                   ? 0.0
                                   : static_cast<double>(c) /
                                         static_cast<double>(patients.size()));
            doc["sp_fraction_per_step"] = std::move(frac);
            *summary_json = copy_string(doc.dump(2) + "\n");
        }
    });
}

}  // extern "C"

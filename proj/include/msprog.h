/* C API for the msprog longitudinal disease-course pipeline.
 *
 * All functions return msprog_status; MSPROG_OK is 0. On failure,
 * msprog_last_error() returns a thread-local description of the most recent
 * error on the calling thread. Handles are opaque and must be released with
 * their matching _free function; strings returned through char** out
 * parameters must be released with msprog_string_free().
 */
#ifndef MSPROG_H
#define MSPROG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum msprog_status {
    MSPROG_OK = 0,
    MSPROG_E_ARGUMENT = 2,    /* bad argument or configuration */
    MSPROG_E_DATA = 3,        /* degenerate data (empty, single class, ...) */
    MSPROG_E_SOLVER = 4,      /* numerical failure in the optimizer */
    MSPROG_E_COMPOSITION = 5, /* f selects a variable g does not predict */
    MSPROG_E_PARSE = 6,       /* malformed CSV / JSON input */
    MSPROG_E_IO = 7           /* filesystem failure */
} msprog_status;

typedef struct msprog_cohort msprog_cohort;
typedef struct msprog_diagnosis msprog_diagnosis;
typedef struct msprog_evolution msprog_evolution;

const char* msprog_last_error(void);
void msprog_string_free(char* s);

/* ---- cohort ---- */

msprog_status msprog_cohort_load(const char* csv_path, msprog_cohort** out);
void msprog_cohort_free(msprog_cohort* cohort);
int msprog_cohort_n_patients(const msprog_cohort* cohort);
int msprog_cohort_n_features(const msprog_cohort* cohort);
int msprog_cohort_time_points(const msprog_cohort* cohort);

/* ---- synthetic cohort generation ---- */

typedef struct msprog_synth_params {
    int n_patients;
    int time_points;
    int n_features;
    int support_size;
    double drift;
    double process_noise;
    double flip_prob;
    double margin; /* minimum baseline |score|, 0 disables */
    double bias_scale; /* bias = -bias_scale * ||w*|| */
    int quantize;     /* 0/1 */
    int quant_levels;
    double dropout;
    int misspecified; /* 0/1 */
    unsigned long long seed;
} msprog_synth_params;

void msprog_synth_params_init(msprog_synth_params* params);

/* Writes the cohort CSV and, if truth_json_path is non-NULL, the planted
 * ground truth. */
msprog_status msprog_generate(const msprog_synth_params* params,
                              const char* cohort_csv_path,
                              const char* truth_json_path);

/* ---- fitting ---- */

typedef struct msprog_fit_params {
    int t_prime;
    int n_splits;
    double test_fraction;
    int k_folds;
    double stable_threshold;
    int max_iter;
    double tol;
    int threads; /* 0 = hardware concurrency */
    unsigned long long seed;
} msprog_fit_params;

void msprog_fit_params_init(msprog_fit_params* params);

/* Runs the full learning protocol. Any output pointer may be NULL to skip
 * that artifact. report_json is the resampling report; frequencies_csv the
 * per-variable selection-frequency table. */
msprog_status msprog_fit(const msprog_cohort* cohort,
                         const msprog_fit_params* params,
                         msprog_diagnosis** diagnosis_out,
                         msprog_evolution** evolution_out, char** report_json,
                         char** frequencies_csv);

/* ---- models ---- */

void msprog_diagnosis_free(msprog_diagnosis* model);
void msprog_evolution_free(msprog_evolution* model);

msprog_status msprog_diagnosis_save(const msprog_diagnosis* model,
                                    const char* path);
msprog_status msprog_diagnosis_load(const char* path, msprog_diagnosis** out);
msprog_status msprog_evolution_save(const msprog_evolution* model,
                                    const char* path);
msprog_status msprog_evolution_load(const char* path, msprog_evolution** out);

/* label receives -1 or +1. */
msprog_status msprog_diagnosis_predict(const msprog_diagnosis* model,
                                       const double* x, int d, int* label,
                                       double* margin);
/* next must have room for the model's output count
 * (msprog_evolution_n_outputs). */
int msprog_evolution_n_outputs(const msprog_evolution* model);
msprog_status msprog_evolution_predict(const msprog_evolution* model,
                                       const double* x, int d, double* next);

/* ---- prognosis ---- */

/* Teacher-forced one-step evaluation over the test portion (t > t_prime).
 * report_csv: patient_id,time_point,predicted,margin,clinician_label.
 * summary_json: {concordance, n_scored}. */
msprog_status msprog_evaluate(const msprog_cohort* cohort,
                              const msprog_diagnosis* diagnosis,
                              const msprog_evolution* evolution, int t_prime,
                              char** report_csv, char** summary_json);

typedef enum msprog_fill_policy {
    MSPROG_FILL_HOLD_LAST = 0,
    MSPROG_FILL_LEARNING_MEAN = 1
} msprog_fill_policy;

/* Rollout from each patient's last observed vector for `horizon` steps.
 * report_csv: patient_id,step,predicted,margin. */
msprog_status msprog_prognose(const msprog_cohort* cohort,
                              const msprog_diagnosis* diagnosis,
                              const msprog_evolution* evolution, int horizon,
                              msprog_fill_policy fill, char** report_csv,
                              char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* MSPROG_H */

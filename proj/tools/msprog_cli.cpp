// Command-line front end for the msprog pipeline. Talks to the core library
// exclusively through the C API in msprog.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "msprog.h"

namespace {

int exit_code_for(msprog_status status) {
    switch (status) {
        case MSPROG_OK:
            return 0;
        case MSPROG_E_ARGUMENT:
        case MSPROG_E_PARSE:
        case MSPROG_E_IO:
            return 2;
        case MSPROG_E_DATA:
            return 3;
        case MSPROG_E_SOLVER:
            return 4;
        case MSPROG_E_COMPOSITION:
            return 5;
    }
    return 2;
}

[[noreturn]] void fail(msprog_status status) {
    std::cerr << "error: " << msprog_last_error() << "\n";
    std::exit(exit_code_for(status));
}

void check(msprog_status status) {
    if (status != MSPROG_OK) fail(status);
}

void write_text(const std::string& path, const char* text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(2);
    }
}

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { msprog_string_free(ptr); }
};

struct CohortHandle {
    msprog_cohort* ptr = nullptr;
    ~CohortHandle() { msprog_cohort_free(ptr); }
};
struct DiagnosisHandle {
    msprog_diagnosis* ptr = nullptr;
    ~DiagnosisHandle() { msprog_diagnosis_free(ptr); }
};
struct EvolutionHandle {
    msprog_evolution* ptr = nullptr;
    ~EvolutionHandle() { msprog_evolution_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Longitudinal disease-course prediction pipeline"};
    app.require_subcommand(1);
    app.set_config("--config")->description(
        "flat key=value config file (subcommand keys are dotted, e.g. "
        "fit.splits=100)");

    unsigned long long seed = 0;
    int threads = 1;
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0 = auto)")
        ->capture_default_str();

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic cohort");
    msprog_synth_params sp;
    msprog_synth_params_init(&sp);
    std::string gen_out, gen_truth;
    bool no_quantize = false;
    gen->add_option("--out", gen_out, "cohort CSV output path")->required();
    gen->add_option("--truth", gen_truth, "ground-truth JSON output path");
    gen->add_option("--patients", sp.n_patients)->capture_default_str();
    gen->add_option("--time-points", sp.time_points)->capture_default_str();
    gen->add_option("--features", sp.n_features)->capture_default_str();
    gen->add_option("--support", sp.support_size)->capture_default_str();
    gen->add_option("--drift", sp.drift)->capture_default_str();
    gen->add_option("--noise", sp.process_noise)->capture_default_str();
    gen->add_option("--flip", sp.flip_prob)->capture_default_str();
    gen->add_option("--bias-scale", sp.bias_scale)->capture_default_str();
    gen->add_option("--margin", sp.margin,
                    "minimum baseline |score| (0 disables)")
        ->capture_default_str();
    gen->add_option("--levels", sp.quant_levels)->capture_default_str();
    gen->add_flag("--no-quantize", no_quantize, "emit raw latent values");
    gen->add_option("--dropout", sp.dropout)->capture_default_str();
    gen->add_flag("--misspecified", sp.misspecified,
                  "mild nonlinearity in the dynamics");

    // fit
    auto* fit = app.add_subcommand("fit", "resampling + final f and g models");
    msprog_fit_params fp;
    msprog_fit_params_init(&fp);
    std::string fit_cohort, fit_out_dir = ".";
    fit->add_option("--cohort", fit_cohort, "cohort CSV")->required();
    fit->add_option("--t-prime", fp.t_prime, "last learning time point")
        ->capture_default_str();
    fit->add_option("--splits", fp.n_splits)->capture_default_str();
    fit->add_option("--test-fraction", fp.test_fraction)->capture_default_str();
    fit->add_option("--folds", fp.k_folds)->capture_default_str();
    fit->add_option("--threshold", fp.stable_threshold,
                    "stable-variable frequency threshold")
        ->capture_default_str();
    fit->add_option("--max-iter", fp.max_iter)->capture_default_str();
    fit->add_option("--tol", fp.tol)->capture_default_str();
    fit->add_option("--out-dir", fit_out_dir)->capture_default_str();

    // evaluate
    auto* evaluate =
        app.add_subcommand("evaluate", "teacher-forced one-step concordance");
    std::string eval_cohort, eval_diag = "diagnosis.json",
                             eval_evo = "evolution.json", eval_out_dir = ".";
    int eval_t_prime = 4;
    evaluate->add_option("--cohort", eval_cohort, "cohort CSV")->required();
    evaluate->add_option("--diagnosis", eval_diag)->capture_default_str();
    evaluate->add_option("--evolution", eval_evo)->capture_default_str();
    evaluate->add_option("--t-prime", eval_t_prime)->capture_default_str();
    evaluate->add_option("--out-dir", eval_out_dir)->capture_default_str();

    // prognose
    auto* prognose =
        app.add_subcommand("prognose", "multi-step rollout per patient");
    std::string prog_cohort, prog_diag = "diagnosis.json",
                             prog_evo = "evolution.json", prog_out_dir = ".";
    int horizon = 1;
    std::string fill = "hold_last";
    prognose->add_option("--cohort", prog_cohort, "cohort CSV")->required();
    prognose->add_option("--diagnosis", prog_diag)->capture_default_str();
    prognose->add_option("--evolution", prog_evo)->capture_default_str();
    prognose->add_option("--horizon", horizon, "prediction steps")
        ->capture_default_str();
    prognose
        ->add_option("--fill", fill, "unselected-variable policy")
        ->check(CLI::IsMember({"hold_last", "learning_mean"}))
        ->capture_default_str();
    prognose->add_option("--out-dir", prog_out_dir)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (gen->parsed()) {
        sp.seed = seed;
        if (no_quantize) sp.quantize = 0;
        check(msprog_generate(&sp, gen_out.c_str(),
                              gen_truth.empty() ? nullptr : gen_truth.c_str()));
        return 0;
    }

    if (fit->parsed()) {
        fp.seed = seed;
        fp.threads = threads;
        CohortHandle cohort;
        check(msprog_cohort_load(fit_cohort.c_str(), &cohort.ptr));
        DiagnosisHandle f;
        EvolutionHandle g;
        OwnedString report, freqs;
        check(msprog_fit(cohort.ptr, &fp, &f.ptr, &g.ptr, &report.ptr,
                         &freqs.ptr));
        check(msprog_diagnosis_save(f.ptr,
                                    (fit_out_dir + "/diagnosis.json").c_str()));
        check(msprog_evolution_save(g.ptr,
                                    (fit_out_dir + "/evolution.json").c_str()));
        write_text(fit_out_dir + "/resampling.json", report.ptr);
        write_text(fit_out_dir + "/frequencies.csv", freqs.ptr);
        return 0;
    }

    if (evaluate->parsed()) {
        CohortHandle cohort;
        check(msprog_cohort_load(eval_cohort.c_str(), &cohort.ptr));
        DiagnosisHandle f;
        EvolutionHandle g;
        check(msprog_diagnosis_load(eval_diag.c_str(), &f.ptr));
        check(msprog_evolution_load(eval_evo.c_str(), &g.ptr));
        OwnedString csv, summary;
        check(msprog_evaluate(cohort.ptr, f.ptr, g.ptr, eval_t_prime, &csv.ptr,
                              &summary.ptr));
        write_text(eval_out_dir + "/prognosis.csv", csv.ptr);
        write_text(eval_out_dir + "/summary.json", summary.ptr);
        std::cout << summary.ptr;
        return 0;
    }

    if (prognose->parsed()) {
        CohortHandle cohort;
        check(msprog_cohort_load(prog_cohort.c_str(), &cohort.ptr));
        DiagnosisHandle f;
        EvolutionHandle g;
        check(msprog_diagnosis_load(prog_diag.c_str(), &f.ptr));
        check(msprog_evolution_load(prog_evo.c_str(), &g.ptr));
        OwnedString csv, summary;
        check(msprog_prognose(cohort.ptr, f.ptr, g.ptr, horizon,
                              fill == "learning_mean"
                                  ? MSPROG_FILL_LEARNING_MEAN
                                  : MSPROG_FILL_HOLD_LAST,
                              &csv.ptr, &summary.ptr));
        write_text(prog_out_dir + "/rollout.csv", csv.ptr);
        write_text(prog_out_dir + "/rollout_summary.json", summary.ptr);
        std::cout << summary.ptr;
        return 0;
    }
    return 2;
}

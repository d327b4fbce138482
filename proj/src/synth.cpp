#include "msprog/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "msprog/errors.hpp"
#include "msprog/rng.hpp"

namespace msprog {

namespace {

// Counter offsets for the seed derivation; patients use counters >= kPatients.
constexpr std::uint64_t kModelSeed = 1;
constexpr std::uint64_t kPatientBase = 1000;

void validate(const SynthConfig& c) {
    if (c.n_patients < 1 || c.time_points < 2 || c.n_features < 1)
        throw ArgumentError("generate_cohort: bad cohort shape");
    if (c.support_size < 1 || c.support_size > c.n_features)
        throw ArgumentError("generate_cohort: support_size must be in 1..d");
    if (c.flip_prob < 0.0 || c.flip_prob >= 0.5)
        throw ArgumentError("generate_cohort: flip_prob must be in [0, 0.5)");
    if (c.quantize && c.quant_levels < 2)
        throw ArgumentError("generate_cohort: quant_levels must be >= 2");
    if (c.dropout < 0.0 || c.dropout >= 1.0)
        throw ArgumentError("generate_cohort: dropout must be in [0, 1)");
    if (c.process_noise < 0.0)
        throw ArgumentError("generate_cohort: process_noise must be >= 0");
    if (c.margin < 0.0)
        throw ArgumentError("generate_cohort: margin must be >= 0");
}

double quantize_value(double z, int levels) {
    // Latents live mostly in [-3, 3]; map to ordinal levels 1..L.
    const double u = (z + 3.0) / 6.0;
    const double level = std::floor(u * levels) + 1.0;
    return std::clamp(level, 1.0, static_cast<double>(levels));
}

std::string patient_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "P%05d", i + 1);
    return buf;
}

}  // namespace

std::pair<LongitudinalCohort, GroundTruth> generate_cohort(
    const SynthConfig& config) {
    validate(config);
    const int d = config.n_features;
    const int k = config.support_size;

    GroundTruth truth;
    auto model_rng = make_rng(config.seed, kModelSeed);

    // Planted support: random subset of 1..d.
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), model_rng);
    truth.support.assign(perm.begin(), perm.begin() + k);
    std::sort(truth.support.begin(), truth.support.end());

    // w* supported on the planted set, magnitudes in [1, 2], random signs.
    std::uniform_real_distribution<double> mag(1.0, 2.0);
    std::bernoulli_distribution coin(0.5);
    truth.w_star = Eigen::VectorXd::Zero(d);
    for (int idx : truth.support)
        truth.w_star[idx - 1] = (coin(model_rng) ? 1.0 : -1.0) * mag(model_rng);
    truth.bias = -config.bias_scale * truth.w_star.norm();

    // Contractive dynamics with mild coupling inside the support; the drift
    // pushes support coordinates toward the SP side of w*.
    truth.A = config.decay * Eigen::MatrixXd::Identity(d, d);
    std::uniform_real_distribution<double> cpl(-config.coupling, config.coupling);
    for (int r : truth.support)
        for (int c : truth.support)
            if (r != c) truth.A(r - 1, c - 1) = cpl(model_rng);
    truth.b = Eigen::VectorXd::Zero(d);
    for (int idx : truth.support)
        truth.b[idx - 1] =
            config.drift * (truth.w_star[idx - 1] > 0 ? 1.0 : -1.0);

    LongitudinalCohort cohort;
    cohort.n_features = d;
    cohort.time_points = config.time_points;
    cohort.feature_names.reserve(static_cast<std::size_t>(d));
    for (int j = 1; j <= d; ++j) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "q%03d", j);
        cohort.feature_names.emplace_back(buf);
    }

    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int i = 0; i < config.n_patients; ++i) {
        auto rng = make_rng(config.seed, kPatientBase + static_cast<std::uint64_t>(i));
        PatientSeries series;
        series.patient_id = patient_name(i);

        Eigen::VectorXd z(d);
        for (int j = 0; j < d; ++j) z[j] = gauss(rng);
        while (config.margin > 0.0 &&
               std::abs(z.dot(truth.w_star) + truth.bias) < config.margin)
            for (int j = 0; j < d; ++j) z[j] = gauss(rng);

        std::vector<Eigen::VectorXd> traj;
        std::vector<int> labels_true;
        for (int t = 1; t <= config.time_points; ++t) {
            if (t > 1) {
                Eigen::VectorXd z_next = truth.A * z + truth.b;
                if (config.misspecified)
                    z_next = z_next.array().tanh() * 3.0;
                if (config.process_noise > 0.0)
                    for (int j = 0; j < d; ++j)
                        z_next[j] += config.process_noise * gauss(rng);
                z = std::move(z_next);
            }
            traj.push_back(z);

            const double score = z.dot(truth.w_star) + truth.bias;
            const int y_true = score > 0.0 ? +1 : -1;
            labels_true.push_back(y_true);
            int y = y_true;
            if (config.flip_prob > 0.0 && unit(rng) < config.flip_prob) y = -y;

            Eigen::VectorXd x(d);
            if (config.quantize) {
                for (int j = 0; j < d; ++j)
                    x[j] = quantize_value(z[j], config.quant_levels);
            } else {
                x = z;
            }
            series.observations.emplace(t, std::move(x));
            series.labels.emplace(t, y);

            // Enrollment-style dropout: once a patient misses an exam they
            // never return, so expected n_t decreases with t.
            if (t < config.time_points && config.dropout > 0.0 &&
                unit(rng) < config.dropout)
                break;
        }
        truth.trajectories.emplace(series.patient_id, std::move(traj));
        truth.true_labels.emplace(series.patient_id, std::move(labels_true));
        cohort.patients.push_back(std::move(series));
    }
    return {std::move(cohort), std::move(truth)};
}

std::string ground_truth_json(const GroundTruth& truth) {
    nlohmann::json doc;
    doc["bias"] = truth.bias;
    doc["support"] = truth.support;
    nlohmann::json w = nlohmann::json::array();
    for (Eigen::Index j = 0; j < truth.w_star.size(); ++j)
        w.push_back(truth.w_star[j]);
    doc["w_star"] = std::move(w);
    nlohmann::json b = nlohmann::json::array();
    for (Eigen::Index j = 0; j < truth.b.size(); ++j) b.push_back(truth.b[j]);
    doc["drift"] = std::move(b);
    nlohmann::json labels;
    for (const auto& [pid, ys] : truth.true_labels) labels[pid] = ys;
    doc["true_labels"] = std::move(labels);
    return doc.dump(2) + "\n";
}

}  // namespace msprog

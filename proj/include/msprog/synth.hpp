#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "msprog/cohort.hpp"

namespace msprog {

// Latent linear dynamics z^{t+1} = A z^t + b + noise with labels
// sign(z . w* + bias); observed features are the latents quantized to
// ordinal levels. Shapes default to a realistically sized cohort.
struct SynthConfig {
    int n_patients = 600;
    int time_points = 6;  // T
    int n_features = 145;
    int support_size = 16;  // d~*, size of the planted support
    double decay = 0.9;     // diagonal of A
    double coupling = 0.05; // off-diagonal coupling inside the support
    double drift = 0.05;    // drift magnitude toward SP on support coords
    double process_noise = 0.3;  // sigma_x
    double flip_prob = 0.0;      // label flip probability, in [0, 0.5)
    // Minimum |x . w* + bias| enforced at baseline by redrawing the initial
    // latents; 0 disables the check. Larger values make the cohort easier.
    double margin = 0.0;
    // bias = -bias_scale * ||w*||; positive values skew the cohort toward RR.
    double bias_scale = 0.6;
    bool quantize = true;
    int quant_levels = 10;  // ordinal levels 1..L
    double dropout = 0.08;  // per-time-point dropout probability
    bool misspecified = false;  // mild tanh nonlinearity in the dynamics
    std::uint64_t seed = 0;
};

struct GroundTruth {
    Eigen::VectorXd w_star;
    double bias = 0.0;
    std::vector<int> support;  // 1-based, ascending
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    // Latent trajectories and pre-flip labels, keyed by patient id.
    std::map<std::string, std::vector<Eigen::VectorXd>> trajectories;
    std::map<std::string, std::vector<int>> true_labels;
};

std::pair<LongitudinalCohort, GroundTruth> generate_cohort(
    const SynthConfig& config);

std::string ground_truth_json(const GroundTruth& truth);

}  // namespace msprog

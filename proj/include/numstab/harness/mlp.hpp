#pragma once

// Desk-scale two-layer MLP trained on seeded synthetic Gaussian clusters.
// The softmax layer honors the configured mode and precision; everything
// else runs in binary64. The backward pass through softmax is deliberately
// unfused: dL/dp = -y/p elementwise, then the softmax Jacobian. When a
// class probability underflows to exactly zero against a zero label entry,
// that division is 0/0, the gradient is NaN, and the parameters and loss
// follow - the causal chain the training report captures.
//
// The output bias starts at -100 so the logits live deep in the negative
// range: the unstable softmax exponentiates absolute logits and underflows
// once any logit drifts below about -103 at binary32, while the max-shifted
// stable softmax only ever sees relative gaps and stays healthy. Learning
// rate and architecture defaults are this project's own.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "numstab/kernels/softmax.hpp"
#include "numstab/types.hpp"

namespace numstab::harness {

struct MlpConfig {
    std::size_t input_dim = 16;
    std::size_t hidden_dim = 32;
    std::size_t num_classes = 10;
    std::size_t samples_per_class = 20;
    double learning_rate = 0.5;
    std::size_t epochs = 80;
    std::uint64_t seed = 0;
    StabilityMode softmax_mode = StabilityMode::unstable;
    Precision softmax_precision = Precision::binary32;
    double data_scale = 1.0; // multiplies the synthetic cluster centers
};

struct TrainReport {
    std::vector<double> losses; // mean loss per epoch, epoch 0 first
    std::optional<std::size_t> first_nonfinite_epoch;
    // First epoch in which some softmax output was exactly zero while the
    // matching one-hot label entry was zero (the 0/0 trigger).
    std::optional<std::size_t> first_zero_prob_epoch;
    bool final_params_finite = true;
};

namespace detail {

struct Dataset {
    std::vector<std::vector<double>> x;
    std::vector<std::size_t> label;
};

inline Dataset make_clusters(const MlpConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.5);
    Dataset d;
    std::vector<std::vector<double>> centers(cfg.num_classes,
                                             std::vector<double>(cfg.input_dim));
    for (auto& c : centers)
        for (auto& v : c) v = 4.0 * cfg.data_scale * unit(rng);
    for (std::size_t cls = 0; cls < cfg.num_classes; ++cls)
        for (std::size_t s = 0; s < cfg.samples_per_class; ++s) {
            std::vector<double> x(cfg.input_dim);
            for (std::size_t i = 0; i < cfg.input_dim; ++i)
                x[i] = centers[cls][i] + noise(rng);
            d.x.push_back(std::move(x));
            d.label.push_back(cls);
        }
    return d;
}

} // namespace detail

inline TrainReport run_mlp_demo(const MlpConfig& cfg) {
    if (cfg.input_dim == 0 || cfg.hidden_dim == 0 || cfg.num_classes < 2 ||
        cfg.samples_per_class == 0 || cfg.epochs == 0 || !(cfg.learning_rate > 0.0))
        throw std::invalid_argument("run_mlp_demo: sizes, epochs and learning rate must be positive");

    std::mt19937_64 rng(cfg.seed);
    const detail::Dataset data = detail::make_clusters(cfg, rng);
    const std::size_t n_samples = data.x.size();
    const std::size_t d = cfg.input_dim, h = cfg.hidden_dim, k = cfg.num_classes;

    std::uniform_real_distribution<double> w1_init(-0.3, 0.3);
    std::uniform_real_distribution<double> w2_init(-0.05, 0.05);
    std::vector<double> w1(h * d), b1(h, 0.0), w2(k * h), b2(k, -100.0);
    for (auto& v : w1) v = w1_init(rng);
    for (auto& v : w2) v = w2_init(rng);

    TrainReport report;
    std::vector<double> z1(h), a1(h), logits(k);
    std::vector<double> gw1(h * d), gb1(h), gw2(k * h), gb2(k);
    std::vector<double> dp(k), dz2(k), da1(h), dz1(h);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::fill(gw1.begin(), gw1.end(), 0.0);
        std::fill(gb1.begin(), gb1.end(), 0.0);
        std::fill(gw2.begin(), gw2.end(), 0.0);
        std::fill(gb2.begin(), gb2.end(), 0.0);
        double loss_sum = 0.0;
        bool zero_prob_hit = false;

        for (std::size_t s = 0; s < n_samples; ++s) {
            const auto& x = data.x[s];
            for (std::size_t i = 0; i < h; ++i) {
                double acc = b1[i];
                for (std::size_t j = 0; j < d; ++j) acc += w1[i * d + j] * x[j];
                z1[i] = acc;
                a1[i] = acc > 0.0 ? acc : 0.0;
            }
            for (std::size_t i = 0; i < k; ++i) {
                double acc = b2[i];
                for (std::size_t j = 0; j < h; ++j) acc += w2[i * h + j] * a1[j];
                logits[i] = acc;
            }

            const RealVector p =
                softmax(RealVector(logits, cfg.softmax_precision), cfg.softmax_mode);

            const std::size_t truth = data.label[s];
            loss_sum += -std::log(p[truth]);
            for (std::size_t j = 0; j < k; ++j)
                if (p[j] == 0.0 && j != truth) zero_prob_hit = true;

            // Unfused softmax backward: dL/dp = -y/p, then the Jacobian
            // dp_j/dz_k = p_j (delta_jk - p_k).
            for (std::size_t j = 0; j < k; ++j)
                dp[j] = (j == truth ? -1.0 : -0.0) / p[j];
            for (std::size_t kk = 0; kk < k; ++kk) {
                double acc = 0.0;
                for (std::size_t j = 0; j < k; ++j)
                    acc += dp[j] * p[j] * ((j == kk ? 1.0 : 0.0) - p[kk]);
                dz2[kk] = acc;
            }

            for (std::size_t i = 0; i < k; ++i) {
                gb2[i] += dz2[i];
                for (std::size_t j = 0; j < h; ++j) gw2[i * h + j] += dz2[i] * a1[j];
            }
            for (std::size_t j = 0; j < h; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < k; ++i) acc += w2[i * h + j] * dz2[i];
                da1[j] = acc;
                dz1[j] = z1[j] > 0.0 ? acc : 0.0;
            }
            for (std::size_t i = 0; i < h; ++i) {
                gb1[i] += dz1[i];
                for (std::size_t j = 0; j < d; ++j) gw1[i * d + j] += dz1[i] * x[j];
            }
        }

        const double mean_loss = loss_sum / static_cast<double>(n_samples);
        report.losses.push_back(mean_loss);
        if (zero_prob_hit && !report.first_zero_prob_epoch)
            report.first_zero_prob_epoch = epoch;
        if (!std::isfinite(mean_loss) && !report.first_nonfinite_epoch)
            report.first_nonfinite_epoch = epoch;

        const double step = cfg.learning_rate / static_cast<double>(n_samples);
        for (std::size_t i = 0; i < w1.size(); ++i) w1[i] -= step * gw1[i];
        for (std::size_t i = 0; i < b1.size(); ++i) b1[i] -= step * gb1[i];
        for (std::size_t i = 0; i < w2.size(); ++i) w2[i] -= step * gw2[i];
        for (std::size_t i = 0; i < b2.size(); ++i) b2[i] -= step * gb2[i];
    }

    for (const auto* params : {&w1, &b1, &w2, &b2})
        for (double v : *params)
            if (!std::isfinite(v)) report.final_params_finite = false;

    return report;
}

} // namespace numstab::harness

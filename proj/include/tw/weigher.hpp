#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tw/features.hpp"
#include "tw/targets.hpp"
#include "tw/weights_io.hpp"

namespace tw {

struct TrainingMeta {
    std::size_t epochs = 0;
    double learning_rate = 0.0;
    std::uint64_t seed = 0;
    double subsample_fraction = 1.0;
    std::size_t examples_used = 0;
    /// Loss before each epoch's update, then the final loss.
    std::vector<double> loss_history;
};

/// Linear regression head: y = w . f + b, over standardized features.
struct LinearModel {
    std::vector<double> w;
    double b = 0.0;
    std::vector<double> feature_means;
    std::vector<double> feature_stds;
    TrainingMeta meta;

    std::size_t dimension() const { return w.size(); }

    /// z-scores raw features with the stored training statistics.
    FeatureVector standardize(std::span<const double> raw) const;

    /// predict(standardize(raw)).
    double predict_raw(std::span<const double> raw) const;
};

struct Example {
    FeatureVector features;
    double target = 0.0;
};

/// w . f + b; unclamped.
double predict(const LinearModel& model, std::span<const double> features);

/// Sum over the batch of (target - prediction)^2.
double mse_loss(const LinearModel& model, std::span<const Example> batch);

struct Gradient {
    std::vector<double> w;
    double b = 0.0;
};

/// Analytic gradient of mse_loss with respect to (w, b).
Gradient gradient(const LinearModel& model, std::span<const Example> batch);

struct TrainOptions {
    double learning_rate = 1e-3;
    std::size_t epochs = 200;
    std::uint64_t seed = 13;
    /// Fraction of examples kept, chosen uniformly without replacement.
    double subsample_fraction = 1.0;
};

/// Indices of the examples kept for a given fraction: round(n * fraction)
/// of them (at least one), sorted ascending.
std::vector<std::size_t> subsample_indices(std::size_t n, double fraction, std::uint64_t seed);

/// Full-batch gradient descent from w = 0, b = mean(target) on
/// standardized raw features. Deterministic for a given seed. Throws when
/// the loss becomes non-finite.
LinearModel train(std::span<const Example> examples, const TrainOptions& options);

/// Replays ground-truth targets as predicted weights.
std::vector<WeightRecord> oracle_weigher(const std::vector<TermTargets>& targets);

/// Pairs each target with the features of the same term in its owner's
/// text. Owners without text and terms absent from the text are skipped.
std::vector<Example> build_examples(const std::vector<TermTargets>& targets, const std::vector<OwnerText>& owners,
                                    const CollectionStats& stats, const Analyzer& analyzer);

std::vector<WeightRecord> predict_weights(const LinearModel& model, const std::vector<OwnerText>& owners,
                                          const CollectionStats& stats, const Analyzer& analyzer);

void save_model(const std::string& path, const LinearModel& model);
LinearModel load_model(const std::string& path);

}  // namespace tw

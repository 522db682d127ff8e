#include "tw/weigher.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include <json.hpp>

#include "tw/error.hpp"

namespace tw {
namespace {

void check_dimension(const LinearModel& model, std::size_t n)
{
    if (n != model.w.size()) {
        throw Error("feature dimension " + std::to_string(n) + " does not match model dimension " +
                    std::to_string(model.w.size()));
    }
}

void check_batch(std::span<const Example> batch)
{
    if (batch.empty()) {
        throw Error("empty batch");
    }
}

/// Largest step for which gradient descent on the summed squared error
/// converges: 1 / largest eigenvalue of sum(x x^T), x = (features, 1).
double stable_learning_rate(std::span<const Example> batch)
{
    const std::size_t dim = batch.front().features.size() + 1;
    std::vector<double> gram(dim * dim, 0.0);
    for (const auto& ex : batch) {
        for (std::size_t i = 0; i < dim; ++i) {
            double xi = i + 1 < dim ? ex.features[i] : 1.0;
            for (std::size_t j = 0; j < dim; ++j) {
                gram[i * dim + j] += xi * (j + 1 < dim ? ex.features[j] : 1.0);
            }
        }
    }
    std::vector<double> v(dim, 1.0), next(dim);
    double eigen = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        double norm = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            next[i] = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                next[i] += gram[i * dim + j] * v[j];
            }
            norm += next[i] * next[i];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        for (std::size_t i = 0; i < dim; ++i) {
            v[i] = next[i] / norm;
        }
        eigen = norm;
    }
    return 1.0 / eigen;
}

}  // namespace

FeatureVector LinearModel::standardize(std::span<const double> raw) const
{
    check_dimension(*this, raw.size());
    FeatureVector out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        double mean = feature_means.empty() ? 0.0 : feature_means[i];
        double std = feature_stds.empty() ? 1.0 : feature_stds[i];
        out[i] = (raw[i] - mean) / std;
    }
    return out;
}

double LinearModel::predict_raw(std::span<const double> raw) const
{
    return predict(*this, standardize(raw));
}

double predict(const LinearModel& model, std::span<const double> features)
{
    check_dimension(model, features.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        sum += model.w[i] * features[i];
    }
    return sum + model.b;
}

double mse_loss(const LinearModel& model, std::span<const Example> batch)
{
    check_batch(batch);
    double loss = 0.0;
    for (const auto& ex : batch) {
        double residual = ex.target - predict(model, ex.features);
        loss += residual * residual;
    }
    return loss;
}

Gradient gradient(const LinearModel& model, std::span<const Example> batch)
{
    check_batch(batch);
    Gradient g{std::vector<double>(model.w.size(), 0.0), 0.0};
    for (const auto& ex : batch) {
        double scale = -2.0 * (ex.target - predict(model, ex.features));
        for (std::size_t i = 0; i < g.w.size(); ++i) {
            g.w[i] += scale * ex.features[i];
        }
        g.b += scale;
    }
    return g;
}

std::vector<std::size_t> subsample_indices(std::size_t n, double fraction, std::uint64_t seed)
{
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw Error("subsample fraction must be in (0, 1]");
    }
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (fraction == 1.0 || n == 0) {
        return all;
    }
    auto keep = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fraction));
    keep = std::clamp<std::size_t>(keep, 1, n);
    // Partial Fisher-Yates on raw engine output.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < keep; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
        std::swap(all[i], all[j]);
    }
    all.resize(keep);
    std::sort(all.begin(), all.end());
    return all;
}

LinearModel train(std::span<const Example> examples, const TrainOptions& options)
{
    if (examples.empty()) {
        throw Error("training needs at least one example");
    }
    if (!(options.learning_rate > 0.0)) {
        throw Error("learning rate must be positive");
    }
    const std::size_t dim = examples.front().features.size();
    for (const auto& ex : examples) {
        if (ex.features.size() != dim) {
            throw Error("examples have inconsistent feature dimensions");
        }
    }

    auto kept = subsample_indices(examples.size(), options.subsample_fraction, options.seed);

    LinearModel model;
    model.w.assign(dim, 0.0);
    model.feature_means.assign(dim, 0.0);
    model.feature_stds.assign(dim, 1.0);
    const double count = static_cast<double>(kept.size());
    for (std::size_t i : kept) {
        for (std::size_t d = 0; d < dim; ++d) {
            model.feature_means[d] += examples[i].features[d];
        }
    }
    for (auto& m : model.feature_means) {
        m /= count;
    }
    std::vector<double> var(dim, 0.0);
    for (std::size_t i : kept) {
        for (std::size_t d = 0; d < dim; ++d) {
            double diff = examples[i].features[d] - model.feature_means[d];
            var[d] += diff * diff;
        }
    }
    for (std::size_t d = 0; d < dim; ++d) {
        double s = std::sqrt(var[d] / count);
        // Constant features standardize to 0 and leave the bias to b.
        model.feature_stds[d] = s > 1e-12 ? s : 1.0;
    }

    std::vector<Example> batch;
    batch.reserve(kept.size());
    double target_sum = 0.0;
    for (std::size_t i : kept) {
        batch.push_back({model.standardize(examples[i].features), examples[i].target});
        target_sum += examples[i].target;
    }
    model.b = target_sum / count;

    model.meta.epochs = options.epochs;
    model.meta.learning_rate = options.learning_rate;
    model.meta.seed = options.seed;
    model.meta.subsample_fraction = options.subsample_fraction;
    model.meta.examples_used = kept.size();

    // Divergence: a non-finite loss or one above the starting loss.
    const double initial_loss = mse_loss(model, batch);
    auto check_loss = [&](double loss, std::size_t epoch) {
        if (!std::isfinite(loss) || loss > initial_loss) {
            char detail[96];
            std::snprintf(detail, sizeof detail, "; learning rate %g is too large for these examples (needs < %.3g)",
                          options.learning_rate, stable_learning_rate(batch));
            throw Error("training diverged at epoch " + std::to_string(epoch) + detail);
        }
    };
    for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
        double loss = mse_loss(model, batch);
        check_loss(loss, epoch);
        model.meta.loss_history.push_back(loss);
        Gradient g = gradient(model, batch);
        for (std::size_t d = 0; d < dim; ++d) {
            model.w[d] -= options.learning_rate * g.w[d];
        }
        model.b -= options.learning_rate * g.b;
    }
    double final_loss = mse_loss(model, batch);
    check_loss(final_loss, options.epochs);
    model.meta.loss_history.push_back(final_loss);
    return model;
}

std::vector<WeightRecord> oracle_weigher(const std::vector<TermTargets>& targets)
{
    std::vector<WeightRecord> out;
    out.reserve(targets.size());
    for (const auto& t : targets) {
        out.push_back({t.owner_id, t.weights});
    }
    return out;
}

std::vector<Example> build_examples(const std::vector<TermTargets>& targets, const std::vector<OwnerText>& owners,
                                    const CollectionStats& stats, const Analyzer& analyzer)
{
    std::unordered_map<std::string, const OwnerText*> by_id;
    for (const auto& o : owners) {
        by_id.emplace(o.owner_id, &o);
    }
    std::vector<Example> examples;
    for (const auto& t : targets) {
        auto it = by_id.find(t.owner_id);
        if (it == by_id.end()) {
            continue;
        }
        for (auto& tf : extract_features(*it->second, stats, analyzer)) {
            auto w = t.weights.find(tf.term);
            if (w != t.weights.end()) {
                examples.push_back({std::move(tf.values), w->second});
            }
        }
    }
    return examples;
}

std::vector<WeightRecord> predict_weights(const LinearModel& model, const std::vector<OwnerText>& owners,
                                          const CollectionStats& stats, const Analyzer& analyzer)
{
    std::vector<WeightRecord> out;
    out.reserve(owners.size());
    for (const auto& owner : owners) {
        WeightRecord record{owner.owner_id, {}};
        for (const auto& tf : extract_features(owner, stats, analyzer)) {
            record.weights.emplace(tf.term, model.predict_raw(tf.values));
        }
        out.push_back(std::move(record));
    }
    return out;
}

void save_model(const std::string& path, const LinearModel& model)
{
    nlohmann::ordered_json j;
    j["w"] = model.w;
    j["b"] = model.b;
    j["feature_means"] = model.feature_means;
    j["feature_stds"] = model.feature_stds;
    nlohmann::ordered_json meta;
    meta["epochs"] = model.meta.epochs;
    meta["learning_rate"] = model.meta.learning_rate;
    meta["seed"] = model.meta.seed;
    meta["subsample_fraction"] = model.meta.subsample_fraction;
    meta["examples_used"] = model.meta.examples_used;
    meta["loss_history"] = model.meta.loss_history;
    j["meta"] = std::move(meta);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path);
    }
    out << j.dump(2) << '\n';
}

LinearModel load_model(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path);
    }
    LinearModel model;
    try {
        auto j = nlohmann::json::parse(in);
        model.w = j.at("w").get<std::vector<double>>();
        model.b = j.at("b").get<double>();
        model.feature_means = j.at("feature_means").get<std::vector<double>>();
        model.feature_stds = j.at("feature_stds").get<std::vector<double>>();
        if (j.contains("meta")) {
            const auto& meta = j["meta"];
            model.meta.epochs = meta.value("epochs", std::size_t{0});
            model.meta.learning_rate = meta.value("learning_rate", 0.0);
            model.meta.seed = meta.value("seed", std::uint64_t{0});
            model.meta.subsample_fraction = meta.value("subsample_fraction", 1.0);
            model.meta.examples_used = meta.value("examples_used", std::size_t{0});
            model.meta.loss_history = meta.value("loss_history", std::vector<double>{});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(path + ": malformed model file: " + e.what());
    }
    if (model.feature_means.size() != model.w.size() || model.feature_stds.size() != model.w.size()) {
        throw Error(path + ": feature statistics do not match model dimension");
    }
    return model;
}

}  // namespace tw

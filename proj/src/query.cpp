#include "tw/query.hpp"

#include <cmath>

#include "tw/error.hpp"

namespace tw {
namespace {

void add_pair(std::vector<TermPair>& pairs, const std::string& a, const std::string& b)
{
    for (auto& p : pairs) {
        if (p.first == a && p.second == b) {
            p.weight += 1.0;
            return;
        }
    }
    pairs.push_back({a, b, 1.0});
}

}  // namespace

WeightedQuery::WeightedQuery(std::initializer_list<WeightedTerm> terms)
{
    for (const auto& t : terms) {
        add(t.term, t.weight);
    }
}

void WeightedQuery::add(const std::string& term, double weight)
{
    if (!(weight > 0.0) || !std::isfinite(weight)) {
        throw Error("query term weights must be positive and finite");
    }
    for (auto& t : terms_) {
        if (t.term == term) {
            t.weight += weight;
            return;
        }
    }
    terms_.push_back({term, weight});
}

std::vector<double> WeightedQuery::normalized_weights() const
{
    double sum = 0.0;
    for (const auto& t : terms_) {
        sum += t.weight;
    }
    std::vector<double> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        out.push_back(t.weight / sum);
    }
    return out;
}

WeightedQuery uniform_query(const Query& query, const Analyzer& analyzer)
{
    WeightedQuery out;
    for (const auto& term : analyzer.analyze(query.text)) {
        out.add(term, 1.0);
    }
    return out;
}

QueryWeighting make_weighted_query(const Query& query, const WeightRecord& weights, const Analyzer& analyzer)
{
    if (weights.owner_id != query.query_id) {
        throw Error("weight record '" + weights.owner_id + "' does not belong to query '" + query.query_id + "'");
    }
    QueryWeighting out;
    for (const auto& term : analyzer.analyze(query.text)) {
        auto it = weights.weights.find(term);
        if (it == weights.weights.end()) {
            out.missing_terms.push_back(term);
            continue;
        }
        if (it->second > 0.0) {
            out.query.add(term, it->second);
        }
    }
    if (out.query.empty()) {
        throw Error("query '" + query.query_id + "' has no term with a positive weight");
    }
    return out;
}

void validate(const SdmMix& mix)
{
    if (mix.unigram < 0.0 || mix.ordered < 0.0 || mix.unordered < 0.0) {
        throw Error("SDM mixture weights must be non-negative");
    }
    if (std::abs(mix.unigram + mix.ordered + mix.unordered - 1.0) > 1e-9) {
        throw Error("SDM mixture weights must sum to 1");
    }
}

SdmQuery make_sdm_query(const Query& query, const WeightRecord* weights, const Analyzer& analyzer, SdmMix mix,
                        std::uint32_t window)
{
    validate(mix);
    if (window < 2) {
        throw Error("SDM window must be >= 2");
    }
    SdmQuery out;
    out.mix = mix;
    out.window = window;
    out.unigrams = weights != nullptr ? make_weighted_query(query, *weights, analyzer).query
                                      : uniform_query(query, analyzer);
    auto terms = analyzer.analyze(query.text);
    for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
        add_pair(out.ordered_bigrams, terms[i], terms[i + 1]);
        add_pair(out.unordered_pairs, terms[i], terms[i + 1]);
    }
    return out;
}

}  // namespace tw

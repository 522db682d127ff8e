#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tw/analyzer.hpp"
#include "tw/corpus.hpp"
#include "tw/weights_io.hpp"

namespace tw {

struct WeightedTerm {
    std::string term;
    double weight = 0.0;

    bool operator==(const WeightedTerm&) const = default;
};

/// Bag of words with strictly positive weights, one entry per distinct
/// term in first-occurrence order.
class WeightedQuery {
public:
    WeightedQuery() = default;
    WeightedQuery(std::initializer_list<WeightedTerm> terms);

    /// Adds to an existing entry's weight or appends. Throws unless
    /// weight > 0 and finite.
    void add(const std::string& term, double weight);

    const std::vector<WeightedTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    /// Weights divided by their sum.
    std::vector<double> normalized_weights() const;

    bool operator==(const WeightedQuery&) const = default;

private:
    std::vector<WeightedTerm> terms_;
};

/// Every analyzed occurrence contributes weight 1.
WeightedQuery uniform_query(const Query& query, const Analyzer& analyzer);

struct QueryWeighting {
    WeightedQuery query;
    /// Analyzed terms with no weight in the record; dropped from the query.
    std::vector<std::string> missing_terms;
};

/// Pairs each analyzed occurrence with its predicted weight; non-positive
/// and missing weights are dropped. Throws if the record belongs to a
/// different query or nothing survives.
QueryWeighting make_weighted_query(const Query& query, const WeightRecord& weights, const Analyzer& analyzer);

struct TermPair {
    std::string first;
    std::string second;
    double weight = 1.0;

    bool operator==(const TermPair&) const = default;
};

struct SdmMix {
    double unigram = 0.85;
    double ordered = 0.10;
    double unordered = 0.05;
};

/// Throws unless all components are >= 0 and sum to 1 (within 1e-9).
void validate(const SdmMix& mix);

struct SdmQuery {
    WeightedQuery unigrams;
    std::vector<TermPair> ordered_bigrams;
    std::vector<TermPair> unordered_pairs;
    std::uint32_t window = 8;
    SdmMix mix;
};

/// Unigram part is the weighted query when `weights` is given, else
/// uniform. Pairs come from adjacent analyzed terms, weight 1 each,
/// duplicates summed.
SdmQuery make_sdm_query(const Query& query, const WeightRecord* weights, const Analyzer& analyzer, SdmMix mix = {},
                        std::uint32_t window = 8);

}  // namespace tw

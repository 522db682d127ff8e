#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tw/index.hpp"
#include "tw/query.hpp"

namespace tw {

struct ScoredDoc {
    std::string external_id;
    double score = 0.0;
    std::uint32_t rank = 0;

    bool operator==(const ScoredDoc&) const = default;
};

struct Bm25Params {
    double k1 = 0.9;
    double b = 0.4;
};

/// sum_t qw(t) * idf(t) * w(t,d)(k1+1) / (w(t,d) + k1(1 - b + b dl/avgdl)),
/// idf(t) = ln(1 + (N - df + 0.5)/(df + 0.5)), qw normalized to sum 1.
/// Results are sorted by score, ties by ascending external id.
std::vector<ScoredDoc> bm25_search(const InvertedIndex& index, const WeightedQuery& query, std::uint32_t k,
                                   const Bm25Params& params);

/// Jelinek-Mercer query likelihood:
/// sum_t qw(t) * ln((1 - lambda) w(t,d)/dl + lambda ctf(t)/total_weight)
/// over documents matching at least one query term. Terms absent from the
/// collection are skipped.
std::vector<ScoredDoc> ql_search(const InvertedIndex& index, const WeightedQuery& query, std::uint32_t k,
                                 double lambda);

/// Sequential dependence: lambda_T * S_uni + lambda_O * S_ord + lambda_U * S_win,
/// each part a query-likelihood score over unigrams, exact ordered
/// bigrams, and unordered co-occurrence within the window. Requires a
/// positional index.
std::vector<ScoredDoc> sdm_search(const InvertedIndex& index, const SdmQuery& query, std::uint32_t k,
                                  double lambda);

/// Occurrences of `second` immediately after `first`.
std::uint32_t count_ordered(std::span<const std::uint32_t> first, std::span<const std::uint32_t> second);

/// Position pairs (i in first, j in second, i != j) spanning at most
/// `window` terms, i.e. |i - j| < window. Pairs of a repeated term are
/// counted once.
std::uint32_t count_unordered(std::span<const std::uint32_t> first, std::span<const std::uint32_t> second,
                              std::uint32_t window, bool same_term);

enum class RetrievalModel { bm25, ql };

std::string_view to_string(RetrievalModel model);
RetrievalModel parse_retrieval_model(std::string_view name);

struct RetrievalParams {
    RetrievalModel model = RetrievalModel::bm25;
    Bm25Params bm25;
    double lambda = 0.4;
};

std::vector<ScoredDoc> search(const InvertedIndex& index, const WeightedQuery& query, std::uint32_t k,
                              const RetrievalParams& params);

}  // namespace tw

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tw/analyzer.hpp"
#include "tw/corpus.hpp"

namespace tw {

/// Hand-built per-term features standing in for contextual embeddings.
/// Layout:
///   [0] log(1 + tf in owner text)
///   [1] log((N + 1) / (df + 1)) over the document collection
///   [2] first occurrence position / (length - 1), 0 for one-term texts
///   [3] term length in code points / 20, capped at 1
///   [4] 1 if the term occurs in the title, else 0
///   [5] constant 1
inline constexpr std::size_t kFeatureCount = 6;

using FeatureVector = std::vector<double>;

struct CollectionStats {
    std::size_t doc_count = 0;
    std::unordered_map<std::string, std::size_t> df;
};

/// Document frequencies of analyzed terms (stopwords kept).
CollectionStats collect_stats(const DocumentStream& docs, const Analyzer& analyzer);

/// A text whose terms get weighted: a document (title + body) or a query.
struct OwnerText {
    std::string owner_id;
    std::optional<std::string> title;
    std::string body;
};

OwnerText owner_text(const Document& doc);
OwnerText owner_text(const Query& query);

struct TermFeatures {
    std::string term;
    FeatureVector values;
};

/// One entry per distinct analyzed term, in first-occurrence order.
std::vector<TermFeatures> extract_features(const OwnerText& owner, const CollectionStats& stats,
                                           const Analyzer& analyzer);

}  // namespace tw

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "tw/analyzer.hpp"
#include "tw/corpus.hpp"

namespace tw {

/// Ground-truth term importance for one document (query term recall) or
/// one query (term recall). `support` is the size of the relevant set the
/// ratios are taken over.
struct TermTargets {
    std::string owner_id;
    std::map<std::string, double> weights;
    std::size_t support = 0;

    bool operator==(const TermTargets&) const = default;
};

/// A judgment counts as relevant when its grade is > 0.
bool is_relevant(int grade);

/// Query term recall: for every document judged relevant to at least one
/// query, weight(t) = |{q relevant to d : t in q}| / |{q relevant to d}|
/// over each distinct analyzed term t of d. Documents are emitted in
/// stream order; never-relevant documents are omitted.
///
/// Analysis ignores the analyzer's stopword list. Throws when qrels judge
/// a query that is not in `queries`.
std::vector<TermTargets> compute_qtr(const Qrels& qrels, const std::vector<Query>& queries, const DocumentStream& docs,
                                     const Analyzer& analyzer);

/// Term recall: for every query with at least one relevant document,
/// weight(t) = |{d relevant to q : t in d}| / |{d relevant to q}| over each
/// distinct analyzed term t of q. Queries are emitted in `queries` order.
///
/// Throws when a judged document never appears in `docs` or a judged
/// query is not in `queries`.
std::vector<TermTargets> compute_tr(const Qrels& qrels, const std::vector<Query>& queries, const DocumentStream& docs,
                                    const Analyzer& analyzer);

}  // namespace tw

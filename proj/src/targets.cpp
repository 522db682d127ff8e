#include "tw/targets.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "tw/error.hpp"

namespace tw {
namespace {

std::vector<std::string> distinct_terms(const std::vector<std::string>& terms)
{
    std::vector<std::string> out = terms;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::unordered_map<std::string, const Query*> index_queries(const Qrels& qrels, const std::vector<Query>& queries)
{
    std::unordered_map<std::string, const Query*> by_id;
    for (const auto& q : queries) {
        by_id.emplace(q.query_id, &q);
    }
    for (const auto& [qid, judged] : qrels) {
        if (!by_id.contains(qid)) {
            throw Error("judged query '" + qid + "' is missing from the query set");
        }
    }
    return by_id;
}

}  // namespace

bool is_relevant(int grade)
{
    return grade > 0;
}

std::vector<TermTargets> compute_qtr(const Qrels& qrels, const std::vector<Query>& queries, const DocumentStream& docs,
                                     const Analyzer& analyzer)
{
    const Analyzer plain = analyzer.without_stopwords();
    auto by_id = index_queries(qrels, queries);

    // Invert qrels: doc -> relevant query term sets.
    std::unordered_map<std::string, std::vector<std::string>> relevant_queries;
    std::unordered_map<std::string, std::vector<std::string>> query_terms;
    for (const auto& [qid, judged] : qrels) {
        for (const auto& [docid, grade] : judged) {
            if (!is_relevant(grade)) {
                continue;
            }
            relevant_queries[docid].push_back(qid);
            if (!query_terms.contains(qid)) {
                query_terms.emplace(qid, distinct_terms(plain.analyze(by_id.at(qid)->text)));
            }
        }
    }

    std::vector<TermTargets> out;
    while (auto doc = docs()) {
        auto it = relevant_queries.find(doc->external_id);
        if (it == relevant_queries.end()) {
            continue;
        }
        const auto& qids = it->second;
        TermTargets targets;
        targets.owner_id = doc->external_id;
        targets.support = qids.size();
        for (const auto& term : distinct_terms(plain.analyze(document_text(*doc)))) {
            std::size_t containing = 0;
            for (const auto& qid : qids) {
                const auto& terms = query_terms.at(qid);
                if (std::binary_search(terms.begin(), terms.end(), term)) {
                    ++containing;
                }
            }
            targets.weights.emplace(term, static_cast<double>(containing) / static_cast<double>(qids.size()));
        }
        out.push_back(std::move(targets));
    }
    return out;
}

std::vector<TermTargets> compute_tr(const Qrels& qrels, const std::vector<Query>& queries, const DocumentStream& docs,
                                    const Analyzer& analyzer)
{
    const Analyzer plain = analyzer.without_stopwords();
    auto by_id = index_queries(qrels, queries);

    std::unordered_map<std::string, std::vector<std::string>> relevant_to;  // doc -> queries
    std::unordered_set<std::string> judged_docs;
    std::unordered_map<std::string, std::vector<std::string>> query_terms;
    std::unordered_map<std::string, std::map<std::string, std::size_t>> containing;
    std::unordered_map<std::string, std::size_t> support;
    for (const auto& [qid, judged] : qrels) {
        for (const auto& [docid, grade] : judged) {
            judged_docs.insert(docid);
            if (!is_relevant(grade)) {
                continue;
            }
            relevant_to[docid].push_back(qid);
            if (!query_terms.contains(qid)) {
                auto terms = distinct_terms(plain.analyze(by_id.at(qid)->text));
                auto& counts = containing[qid];
                for (const auto& t : terms) {
                    counts.emplace(t, 0);
                }
                query_terms.emplace(qid, std::move(terms));
            }
        }
    }

    std::unordered_set<std::string> judged_seen;
    while (auto doc = docs()) {
        if (judged_docs.contains(doc->external_id)) {
            judged_seen.insert(doc->external_id);
        }
        auto it = relevant_to.find(doc->external_id);
        if (it == relevant_to.end()) {
            continue;
        }
        auto doc_terms = distinct_terms(plain.analyze(document_text(*doc)));
        for (const auto& qid : it->second) {
            ++support[qid];
            auto& counts = containing.at(qid);
            for (const auto& t : query_terms.at(qid)) {
                if (std::binary_search(doc_terms.begin(), doc_terms.end(), t)) {
                    ++counts.at(t);
                }
            }
        }
    }
    if (judged_seen.size() != judged_docs.size()) {
        std::set<std::string> missing;
        for (const auto& docid : judged_docs) {
            if (!judged_seen.contains(docid)) {
                missing.insert(docid);
            }
        }
        throw Error("judged document '" + *missing.begin() + "' is missing from the collection (" +
                    std::to_string(missing.size()) + " missing in total)");
    }

    std::vector<TermTargets> out;
    for (const auto& q : queries) {
        auto s = support.find(q.query_id);
        if (s == support.end()) {
            continue;
        }
        TermTargets targets;
        targets.owner_id = q.query_id;
        targets.support = s->second;
        for (const auto& [term, count] : containing.at(q.query_id)) {
            targets.weights.emplace(term, static_cast<double>(count) / static_cast<double>(s->second));
        }
        out.push_back(std::move(targets));
    }
    return out;
}

}  // namespace tw

#include "tw/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "tw/error.hpp"

namespace tw {
namespace {

/// A posting list being traversed: either a real term's postings or a
/// materialized virtual term (doc, count).
struct Cursor {
    std::span<const Posting> postings;
    std::vector<std::pair<DocOrdinal, std::uint32_t>> virtual_list;
    bool is_virtual = false;
    std::size_t pos = 0;

    std::size_t size() const { return is_virtual ? virtual_list.size() : postings.size(); }
    bool done() const { return pos >= size(); }
    DocOrdinal doc() const { return is_virtual ? virtual_list[pos].first : postings[pos].doc; }
    std::uint32_t weight() const { return is_virtual ? virtual_list[pos].second : postings[pos].weight; }
};

/// Keeps the k best (score desc, external id asc) documents.
class TopK {
public:
    TopK(const InvertedIndex& index, std::uint32_t k) : index_(index), k_(k), heap_(Better{&index}) {}

    void offer(DocOrdinal doc, double score)
    {
        Entry e{doc, score};
        if (heap_.size() < k_) {
            heap_.push(e);
        } else if (Better{&index_}(e, heap_.top())) {
            heap_.pop();
            heap_.push(e);
        }
    }

    std::vector<ScoredDoc> sorted()
    {
        std::vector<Entry> entries;
        entries.reserve(heap_.size());
        while (!heap_.empty()) {
            entries.push_back(heap_.top());
            heap_.pop();
        }
        std::sort(entries.begin(), entries.end(), Better{&index_});
        std::vector<ScoredDoc> out;
        out.reserve(entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            out.push_back({index_.docs()[entries[i].doc].external_id, entries[i].score,
                           static_cast<std::uint32_t>(i + 1)});
        }
        return out;
    }

private:
    struct Entry {
        DocOrdinal doc;
        double score;
    };
    struct Better {
        const InvertedIndex* index;
        bool operator()(const Entry& a, const Entry& b) const
        {
            if (a.score != b.score) {
                return a.score > b.score;
            }
            return index->docs()[a.doc].external_id < index->docs()[b.doc].external_id;
        }
    };

    const InvertedIndex& index_;
    std::uint32_t k_;
    // Better as the heap order puts the worst kept entry on top.
    std::priority_queue<Entry, std::vector<Entry>, Better> heap_;
};

void check_k(std::uint32_t k)
{
    if (k == 0) {
        throw Error("k must be >= 1");
    }
}

void check_query(const WeightedQuery& query)
{
    if (query.empty()) {
        throw Error("empty query");
    }
}

void check_lambda(double lambda)
{
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw Error("lambda must be in (0, 1)");
    }
}

/// Document-at-a-time union traversal over `drivers`; `score(doc)` reads
/// the cursors positioned on `doc` and must advance nothing itself.
template <class ScoreFn>
std::vector<ScoredDoc> traverse(const InvertedIndex& index, std::vector<Cursor>& cursors, std::size_t drivers,
                                std::uint32_t k, ScoreFn&& score)
{
    TopK top(index, k);
    while (true) {
        DocOrdinal doc = std::numeric_limits<DocOrdinal>::max();
        bool any = false;
        for (std::size_t i = 0; i < drivers; ++i) {
            if (!cursors[i].done()) {
                doc = std::min(doc, cursors[i].doc());
                any = true;
            }
        }
        if (!any) {
            break;
        }
        for (auto& c : cursors) {
            while (!c.done() && c.doc() < doc) {
                ++c.pos;
            }
        }
        top.offer(doc, score(doc));
        for (auto& c : cursors) {
            if (!c.done() && c.doc() == doc) {
                ++c.pos;
            }
        }
    }
    return top.sorted();
}

struct QlPart {
    double query_weight;
    double collection_prob;
};

double ql_term(double lambda, double query_weight, double collection_prob, std::uint32_t weight, double dl)
{
    double p = (1.0 - lambda) * static_cast<double>(weight) / dl + lambda * collection_prob;
    return query_weight * std::log(p);
}

}  // namespace

std::vector<ScoredDoc> bm25_search(const InvertedIndex& index, const WeightedQuery& query, std::uint32_t k,
                                   const Bm25Params& params)
{
    check_k(k);
    check_query(query);
    if (params.k1 < 0.0 || params.b < 0.0 || params.b > 1.0) {
        throw Error("BM25 requires k1 >= 0 and 0 <= b <= 1");
    }
    const auto weights = query.normalized_weights();
    const double n = static_cast<double>(index.meta().doc_count);
    const double avgdl = index.meta().avgdl;

    std::vector<Cursor> cursors;
    std::vector<double> factors;  // qw * idf
    for (std::size_t i = 0; i < query.terms().size(); ++i) {
        auto id = index.find(query.terms()[i].term);
        if (!id) {
            continue;
        }
        const double df = index.lexicon()[*id].df;
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        cursors.push_back({index.postings(*id), {}, false, 0});
        factors.push_back(weights[i] * idf);
    }
    return traverse(index, cursors, cursors.size(), k, [&](DocOrdinal doc) {
        const double dl = static_cast<double>(index.docs()[doc].dl);
        double score = 0.0;
        for (std::size_t i = 0; i < cursors.size(); ++i) {
            if (cursors[i].done() || cursors[i].doc() != doc) {
                continue;
            }
            const double w = cursors[i].weight();
            score += factors[i] * (w * (params.k1 + 1.0)) / (w + params.k1 * (1.0 - params.b + params.b * dl / avgdl));
        }
        return score;
    });
}

std::vector<ScoredDoc> ql_search(const InvertedIndex& index, const WeightedQuery& query, std::uint32_t k,
                                 double lambda)
{
    check_k(k);
    check_query(query);
    check_lambda(lambda);
    const auto weights = query.normalized_weights();
    const double total = static_cast<double>(index.meta().total_weight);

    std::vector<Cursor> cursors;
    std::vector<QlPart> parts;
    for (std::size_t i = 0; i < query.terms().size(); ++i) {
        auto id = index.find(query.terms()[i].term);
        if (!id) {
            continue;
        }
        cursors.push_back({index.postings(*id), {}, false, 0});
        parts.push_back({weights[i], static_cast<double>(index.lexicon()[*id].ctf) / total});
    }
    return traverse(index, cursors, cursors.size(), k, [&](DocOrdinal doc) {
        const double dl = static_cast<double>(index.docs()[doc].dl);
        double score = 0.0;
        for (std::size_t i = 0; i < cursors.size(); ++i) {
            bool here = !cursors[i].done() && cursors[i].doc() == doc;
            score += ql_term(lambda, parts[i].query_weight, parts[i].collection_prob, here ? cursors[i].weight() : 0,
                             dl);
        }
        return score;
    });
}

std::uint32_t count_ordered(std::span<const std::uint32_t> first, std::span<const std::uint32_t> second)
{
    std::uint32_t count = 0;
    std::size_t j = 0;
    for (auto p : first) {
        while (j < second.size() && second[j] < p + 1) {
            ++j;
        }
        if (j < second.size() && second[j] == p + 1) {
            ++count;
        }
    }
    return count;
}

std::uint32_t count_unordered(std::span<const std::uint32_t> first, std::span<const std::uint32_t> second,
                              std::uint32_t window, bool same_term)
{
    std::uint32_t count = 0;
    std::size_t lo = 0;
    for (std::size_t a = 0; a < first.size(); ++a) {
        const std::int64_t p = first[a];
        while (lo < second.size() && static_cast<std::int64_t>(second[lo]) <= p - static_cast<std::int64_t>(window)) {
            ++lo;
        }
        for (std::size_t j = lo; j < second.size() && static_cast<std::int64_t>(second[j]) < p + window; ++j) {
            const std::int64_t q = second[j];
            if (q == p || (same_term && q < p)) {
                continue;
            }
            ++count;
        }
    }
    return count;
}

std::vector<ScoredDoc> sdm_search(const InvertedIndex& index, const SdmQuery& query, std::uint32_t k,
                                  double lambda)
{
    check_k(k);
    check_query(query.unigrams);
    check_lambda(lambda);
    validate(query.mix);
    if (!index.meta().positional) {
        throw Error("SDM queries need a positional index");
    }
    const double total = static_cast<double>(index.meta().total_weight);

    std::vector<Cursor> cursors;
    std::vector<QlPart> parts;
    std::vector<int> component;
    const auto uni_weights = query.unigrams.normalized_weights();
    for (std::size_t i = 0; i < query.unigrams.terms().size(); ++i) {
        auto id = index.find(query.unigrams.terms()[i].term);
        if (!id) {
            continue;
        }
        cursors.push_back({index.postings(*id), {}, false, 0});
        parts.push_back({uni_weights[i], static_cast<double>(index.lexicon()[*id].ctf) / total});
        component.push_back(0);
    }
    const std::size_t drivers = cursors.size();

    auto add_pairs = [&](const std::vector<TermPair>& pairs, int which) {
        double sum = 0.0;
        for (const auto& p : pairs) {
            sum += p.weight;
        }
        for (const auto& pair : pairs) {
            auto a = index.find(pair.first);
            auto b = index.find(pair.second);
            if (!a || !b) {
                continue;
            }
            Cursor c;
            c.is_virtual = true;
            std::uint64_t cf = 0;
            auto la = index.postings(*a);
            auto lb = index.postings(*b);
            std::size_t j = 0;
            for (const auto& pa : la) {
                while (j < lb.size() && lb[j].doc < pa.doc) {
                    ++j;
                }
                if (j == lb.size()) {
                    break;
                }
                if (lb[j].doc != pa.doc) {
                    continue;
                }
                std::uint32_t n = which == 1 ? count_ordered(pa.positions, lb[j].positions)
                                             : count_unordered(pa.positions, lb[j].positions, query.window, *a == *b);
                if (n > 0) {
                    c.virtual_list.emplace_back(pa.doc, n);
                    cf += n;
                }
            }
            if (cf == 0) {
                continue;
            }
            cursors.push_back(std::move(c));
            parts.push_back({pair.weight / sum, static_cast<double>(cf) / total});
            component.push_back(which);
        }
    };
    if (query.mix.ordered > 0.0) {
        add_pairs(query.ordered_bigrams, 1);
    }
    if (query.mix.unordered > 0.0) {
        add_pairs(query.unordered_pairs, 2);
    }

    return traverse(index, cursors, drivers, k, [&](DocOrdinal doc) {
        const double dl = static_cast<double>(index.docs()[doc].dl);
        double parts_sum[3] = {0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < cursors.size(); ++i) {
            bool here = !cursors[i].done() && cursors[i].doc() == doc;
            parts_sum[component[i]] += ql_term(lambda, parts[i].query_weight, parts[i].collection_prob,
                                               here ? cursors[i].weight() : 0, dl);
        }
        return query.mix.unigram * parts_sum[0] + query.mix.ordered * parts_sum[1] +
               query.mix.unordered * parts_sum[2];
    });
}

std::string_view to_string(RetrievalModel model)
{
    return model == RetrievalModel::bm25 ? "bm25" : "ql";
}

RetrievalModel parse_retrieval_model(std::string_view name)
{
    if (name == "bm25") {
        return RetrievalModel::bm25;
    }
    if (name == "ql") {
        return RetrievalModel::ql;
    }
    throw Error("unknown retrieval model '" + std::string(name) + "' (expected bm25 or ql)");
}

std::vector<ScoredDoc> search(const InvertedIndex& index, const WeightedQuery& query, std::uint32_t k,
                              const RetrievalParams& params)
{
    if (params.model == RetrievalModel::bm25) {
        return bm25_search(index, query, k, params.bm25);
    }
    return ql_search(index, query, k, params.lambda);
}

}  // namespace tw

#include "tw/index.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "tw/error.hpp"
#include "tw/parallel.hpp"
#include "tw/varint.hpp"

namespace tw {
namespace {

constexpr std::size_t kBuildBatch = 1024;

struct AnalyzedDoc {
    std::string external_id;
    bool dropped = false;
    std::uint64_t dl = 0;
    std::vector<std::pair<std::string, Posting>> terms;
};

AnalyzedDoc analyze_document(const Document& doc, const Analyzer& analyzer, const IndexOptions& options)
{
    if (doc.external_id.find_first_of("\t\r\n") != std::string::npos) {
        throw Error("document id '" + doc.external_id + "' contains a tab or newline");
    }
    AnalyzedDoc out;
    out.external_id = doc.external_id;

    auto tokens = analyzer.analyze(document_text(doc));
    std::map<std::string, Posting> grouped;
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
        Posting& p = grouped[tokens[pos]];
        ++p.weight;
        if (options.positional) {
            p.positions.push_back(static_cast<std::uint32_t>(pos));
        }
    }

    const WeightRecord* record = nullptr;
    if (options.weights != nullptr) {
        auto it = options.weights->find(doc.external_id);
        if (it != options.weights->end()) {
            record = &it->second;
        } else {
            switch (options.missing) {
            case MissingWeightPolicy::strict:
                throw Error("no weights for document '" + doc.external_id + "'");
            case MissingWeightPolicy::drop_doc:
                out.dropped = true;
                return out;
            case MissingWeightPolicy::use_tf:
                break;
            }
        }
    }

    for (auto& [term, posting] : grouped) {
        if (record != nullptr) {
            auto w = record->weights.find(term);
            if (w == record->weights.end()) {
                continue;
            }
            auto scaled = scale_weight(w->second, options.scale_n);
            if (!scaled) {
                continue;
            }
            posting.weight = *scaled;
        }
        out.dl += posting.weight;
        out.terms.emplace_back(term, std::move(posting));
    }
    return out;
}

}  // namespace

std::optional<std::uint32_t> scale_weight(double y, std::uint32_t n)
{
    if (!std::isfinite(y)) {
        throw Error("non-finite term weight");
    }
    if (n == 0) {
        throw Error("scale N must be >= 1");
    }
    if (y < 0.0) {
        return std::nullopt;
    }
    double scaled = std::round(y * static_cast<double>(n));
    if (scaled < 1.0) {
        return std::nullopt;
    }
    if (scaled > static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
        throw Error("scaled term weight overflows 32 bits");
    }
    return static_cast<std::uint32_t>(scaled);
}

std::string_view to_string(MissingWeightPolicy policy)
{
    switch (policy) {
    case MissingWeightPolicy::strict:
        return "strict";
    case MissingWeightPolicy::drop_doc:
        return "drop_doc";
    case MissingWeightPolicy::use_tf:
        return "use_tf";
    }
    return "strict";
}

MissingWeightPolicy parse_missing_policy(std::string_view name)
{
    if (name == "strict") {
        return MissingWeightPolicy::strict;
    }
    if (name == "drop_doc") {
        return MissingWeightPolicy::drop_doc;
    }
    if (name == "use_tf") {
        return MissingWeightPolicy::use_tf;
    }
    throw Error("unknown missing-weight policy '" + std::string(name) + "'");
}

std::optional<std::size_t> InvertedIndex::find(std::string_view term) const
{
    auto it = term_ids_.find(std::string(term));
    if (it == term_ids_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t InvertedIndex::posting_count() const
{
    std::size_t n = 0;
    for (const auto& list : postings_) {
        n += list.size();
    }
    return n;
}

std::string InvertedIndex::encode_postings(std::size_t term_id) const
{
    std::string out;
    DocOrdinal prev = 0;
    for (const auto& p : postings_[term_id]) {
        varint::encode(p.doc - prev, out);
        prev = p.doc;
        varint::encode(p.weight, out);
        if (meta_.positional) {
            varint::encode(p.positions.size(), out);
            std::uint32_t last = 0;
            for (auto pos : p.positions) {
                varint::encode(pos - last, out);
                last = pos;
            }
        }
    }
    return out;
}

InvertedIndex InvertedIndex::assemble(IndexMeta meta, std::vector<DocEntry> docs, std::vector<std::string> terms,
                                      std::vector<std::vector<Posting>> postings)
{
    InvertedIndex index;
    index.meta_ = std::move(meta);
    index.docs_ = std::move(docs);
    index.postings_ = std::move(postings);
    index.meta_.doc_count = index.docs_.size();
    index.meta_.total_weight = 0;
    for (const auto& d : index.docs_) {
        index.meta_.total_weight += d.dl;
    }
    index.meta_.avgdl = index.docs_.empty() ? 0.0
                                            : static_cast<double>(index.meta_.total_weight) /
                                                  static_cast<double>(index.meta_.doc_count);
    index.lexicon_.reserve(terms.size());
    std::uint64_t offset = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        LexiconEntry entry;
        entry.term = std::move(terms[i]);
        entry.df = static_cast<std::uint32_t>(index.postings_[i].size());
        for (const auto& p : index.postings_[i]) {
            entry.ctf += p.weight;
        }
        entry.postings_offset = offset;
        entry.postings_len = index.encode_postings(i).size();
        offset += entry.postings_len;
        index.term_ids_.emplace(entry.term, i);
        index.lexicon_.push_back(std::move(entry));
    }
    return index;
}

InvertedIndex build_index(const DocumentStream& docs, const Analyzer& analyzer, const IndexOptions& options)
{
    if (options.weights != nullptr && options.scale_n == 0) {
        throw Error("scale N must be >= 1");
    }
    std::vector<DocEntry> table;
    std::unordered_map<std::string, std::vector<Posting>> lists;

    std::vector<Document> batch;
    std::vector<AnalyzedDoc> analyzed;
    bool exhausted = false;
    while (!exhausted) {
        batch.clear();
        while (batch.size() < kBuildBatch) {
            auto doc = docs();
            if (!doc) {
                exhausted = true;
                break;
            }
            batch.push_back(std::move(*doc));
        }
        analyzed.assign(batch.size(), {});
        parallel_for(batch.size(), options.threads,
                     [&](std::size_t i) { analyzed[i] = analyze_document(batch[i], analyzer, options); });
        for (auto& doc : analyzed) {
            if (doc.dropped) {
                continue;
            }
            if (table.size() >= std::numeric_limits<DocOrdinal>::max()) {
                throw Error("too many documents for 32-bit ordinals");
            }
            auto ordinal = static_cast<DocOrdinal>(table.size());
            table.push_back({std::move(doc.external_id), doc.dl});
            for (auto& [term, posting] : doc.terms) {
                posting.doc = ordinal;
                lists[term].push_back(std::move(posting));
            }
        }
    }

    std::vector<std::string> terms;
    terms.reserve(lists.size());
    for (const auto& [term, list] : lists) {
        terms.push_back(term);
    }
    std::sort(terms.begin(), terms.end());
    std::vector<std::vector<Posting>> postings;
    postings.reserve(terms.size());
    for (const auto& term : terms) {
        postings.push_back(std::move(lists.at(term)));
    }

    IndexMeta meta;
    meta.analyzer = analyzer.config();
    meta.weighted = options.weights != nullptr;
    meta.scale_n = meta.weighted ? options.scale_n : 0;
    meta.positional = options.positional;
    return InvertedIndex::assemble(std::move(meta), std::move(table), std::move(terms), std::move(postings));
}

std::vector<double> weight_rank_profile(const InvertedIndex& index, std::uint32_t top_k)
{
    if (top_k == 0) {
        throw Error("top_k must be >= 1");
    }
    std::vector<std::vector<std::uint32_t>> per_doc(index.docs().size());
    for (std::size_t t = 0; t < index.lexicon().size(); ++t) {
        for (const auto& p : index.postings(t)) {
            per_doc[p.doc].push_back(p.weight);
        }
    }
    std::vector<double> profile(top_k, 0.0);
    std::size_t counted = 0;
    for (std::size_t d = 0; d < per_doc.size(); ++d) {
        const double dl = static_cast<double>(index.docs()[d].dl);
        if (dl == 0.0) {
            continue;
        }
        ++counted;
        auto& weights = per_doc[d];
        std::sort(weights.begin(), weights.end(), std::greater<>());
        for (std::size_t i = 0; i < weights.size() && i < top_k; ++i) {
            profile[i] += static_cast<double>(weights[i]) / dl;
        }
    }
    if (counted == 0) {
        throw Error("weight profile of an empty index");
    }
    for (auto& v : profile) {
        v /= static_cast<double>(counted);
    }
    return profile;
}

}  // namespace tw

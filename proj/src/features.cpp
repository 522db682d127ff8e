#include "tw/features.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace tw {

CollectionStats collect_stats(const DocumentStream& docs, const Analyzer& analyzer)
{
    const Analyzer plain = analyzer.without_stopwords();
    CollectionStats stats;
    while (auto doc = docs()) {
        ++stats.doc_count;
        auto terms = plain.analyze(document_text(*doc));
        std::sort(terms.begin(), terms.end());
        terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
        for (auto& t : terms) {
            ++stats.df[std::move(t)];
        }
    }
    return stats;
}

OwnerText owner_text(const Document& doc)
{
    return {doc.external_id, doc.title, doc.body};
}

OwnerText owner_text(const Query& query)
{
    return {query.query_id, std::nullopt, query.text};
}

std::vector<TermFeatures> extract_features(const OwnerText& owner, const CollectionStats& stats,
                                           const Analyzer& analyzer)
{
    const Analyzer plain = analyzer.without_stopwords();
    std::unordered_set<std::string> title_terms;
    std::string text = owner.body;
    if (owner.title && !owner.title->empty()) {
        for (auto& t : plain.analyze(*owner.title)) {
            title_terms.insert(std::move(t));
        }
        text = owner.body.empty() ? *owner.title : *owner.title + " " + owner.body;
    }
    auto terms = plain.analyze(text);

    struct Seen {
        std::size_t tf = 0;
        std::size_t first = 0;
        std::size_t order = 0;
    };
    std::unordered_map<std::string, Seen> seen;
    std::vector<const std::string*> order;
    for (std::size_t pos = 0; pos < terms.size(); ++pos) {
        auto [it, inserted] = seen.try_emplace(terms[pos], Seen{0, pos, order.size()});
        if (inserted) {
            order.push_back(&it->first);
        }
        ++it->second.tf;
    }

    const double n = static_cast<double>(stats.doc_count);
    const double span = terms.size() > 1 ? static_cast<double>(terms.size() - 1) : 1.0;
    std::vector<TermFeatures> out;
    out.reserve(order.size());
    for (const std::string* term : order) {
        const Seen& s = seen.at(*term);
        auto df_it = stats.df.find(*term);
        double df = df_it == stats.df.end() ? 0.0 : static_cast<double>(df_it->second);
        double length = static_cast<double>(decode_utf8(*term).size());
        FeatureVector f(kFeatureCount);
        f[0] = std::log1p(static_cast<double>(s.tf));
        f[1] = std::log((n + 1.0) / (df + 1.0));
        f[2] = terms.size() > 1 ? static_cast<double>(s.first) / span : 0.0;
        f[3] = std::min(length / 20.0, 1.0);
        f[4] = title_terms.contains(*term) ? 1.0 : 0.0;
        f[5] = 1.0;
        out.push_back({*term, std::move(f)});
    }
    return out;
}

}  // namespace tw

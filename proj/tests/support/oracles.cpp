#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace tw::testing {

std::vector<BruteDoc> brute_docs(const std::vector<Document>& docs, const Analyzer& analyzer)
{
    std::vector<BruteDoc> out;
    for (const auto& d : docs) {
        BruteDoc b{d.external_id, {}};
        for (const auto& t : analyzer.analyze(document_text(d))) {
            b.weights[t] += 1.0;
        }
        out.push_back(std::move(b));
    }
    return out;
}

namespace {

double length(const BruteDoc& d)
{
    double dl = 0.0;
    for (const auto& [t, w] : d.weights) {
        dl += w;
    }
    return dl;
}

std::vector<double> normalized(const BruteQuery& query)
{
    double sum = 0.0;
    for (const auto& [t, w] : query) {
        sum += w;
    }
    std::vector<double> out;
    for (const auto& [t, w] : query) {
        out.push_back(w / sum);
    }
    return out;
}

bool matches(const BruteDoc& d, const BruteQuery& query)
{
    for (const auto& [t, w] : query) {
        if (d.weights.count(t)) {
            return true;
        }
    }
    return false;
}

BruteRanking sorted(BruteRanking r)
{
    std::sort(r.begin(), r.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
    return r;
}

}  // namespace

BruteRanking brute_bm25(const std::vector<BruteDoc>& docs, const BruteQuery& query, double k1, double b)
{
    const double n = static_cast<double>(docs.size());
    double total = 0.0;
    for (const auto& d : docs) {
        total += length(d);
    }
    const double avgdl = total / n;
    const auto qw = normalized(query);

    BruteRanking out;
    for (const auto& d : docs) {
        if (!matches(d, query)) {
            continue;
        }
        const double dl = length(d);
        double score = 0.0;
        for (std::size_t i = 0; i < query.size(); ++i) {
            auto it = d.weights.find(query[i].first);
            if (it == d.weights.end()) {
                continue;
            }
            double df = 0.0;
            for (const auto& other : docs) {
                df += other.weights.count(query[i].first) ? 1.0 : 0.0;
            }
            const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
            const double w = it->second;
            score += qw[i] * idf * (w * (k1 + 1.0)) / (w + k1 * (1.0 - b + b * dl / avgdl));
        }
        out.emplace_back(d.id, score);
    }
    return sorted(out);
}

BruteRanking brute_ql(const std::vector<BruteDoc>& docs, const BruteQuery& query, double lambda)
{
    double total = 0.0;
    for (const auto& d : docs) {
        total += length(d);
    }
    const auto qw = normalized(query);

    BruteRanking out;
    for (const auto& d : docs) {
        const double dl = length(d);
        if (dl == 0.0 || !matches(d, query)) {
            continue;
        }
        double score = 0.0;
        for (std::size_t i = 0; i < query.size(); ++i) {
            double ctf = 0.0;
            for (const auto& other : docs) {
                auto it = other.weights.find(query[i].first);
                ctf += it == other.weights.end() ? 0.0 : it->second;
            }
            if (ctf == 0.0) {
                continue;
            }
            auto it = d.weights.find(query[i].first);
            const double w = it == d.weights.end() ? 0.0 : it->second;
            score += qw[i] * std::log((1.0 - lambda) * w / dl + lambda * (ctf / total));
        }
        out.emplace_back(d.id, score);
    }
    return sorted(out);
}

}  // namespace tw::testing

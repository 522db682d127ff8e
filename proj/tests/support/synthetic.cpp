#include "synthetic.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace tw::testing {

std::string word(const std::string& prefix, std::size_t n)
{
    static constexpr char kLetters[] = "bcdfgkmpt";
    std::string code;
    do {
        code.push_back(kLetters[n % 9]);
        n /= 9;
    } while (n > 0);
    return prefix + code;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n)
{
    return static_cast<std::size_t>(rng() % n);
}

std::vector<Document> random_docs(std::mt19937_64& rng, std::size_t docs, std::size_t vocab, std::size_t max_len)
{
    std::vector<Document> out;
    for (std::size_t i = 0; i < docs; ++i) {
        std::string text;
        std::size_t len = 1 + pick(rng, max_len);
        for (std::size_t j = 0; j < len; ++j) {
            text += (j ? " " : "") + word("w", pick(rng, vocab));
        }
        out.push_back({"doc" + std::to_string(i), std::nullopt, text});
    }
    return out;
}

std::vector<Query> random_queries(std::mt19937_64& rng, std::size_t queries, std::size_t vocab,
                                  std::size_t max_terms)
{
    std::vector<Query> out;
    for (std::size_t i = 0; i < queries; ++i) {
        std::string text;
        std::size_t len = 1 + pick(rng, max_terms);
        for (std::size_t j = 0; j < len; ++j) {
            text += (j ? " " : "") + word("w", pick(rng, vocab));
        }
        out.push_back({"q" + std::to_string(i), text, QueryKind::generic});
    }
    return out;
}

namespace {

std::vector<std::size_t> distinct(std::mt19937_64& rng, std::size_t count, std::size_t n,
                                  const std::set<std::size_t>& exclude = {})
{
    std::set<std::size_t> chosen;
    std::vector<std::size_t> out;
    while (out.size() < count) {
        std::size_t v = pick(rng, n);
        if (!exclude.count(v) && chosen.insert(v).second) {
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace

CentralTermsCorpus central_terms_corpus(std::uint64_t seed, const CentralTermsShape& shape)
{
    std::mt19937_64 rng(seed);
    CentralTermsCorpus c;

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < shape.central_vocab; ++a) {
        for (std::size_t b = a + 1; b < shape.central_vocab; ++b) {
            pairs.emplace_back(a, b);
        }
    }
    for (std::size_t i = pairs.size(); i > 1; --i) {
        std::swap(pairs[i - 1], pairs[pick(rng, i)]);
    }

    std::vector<std::set<std::size_t>> doc_distractors;
    for (std::size_t i = 0; i < shape.docs; ++i) {
        auto [a, b] = pairs[i];
        auto dis = distinct(rng, shape.distractors_per_doc, shape.distractor_vocab);
        std::vector<std::string> words{word("cen", a), word("cen", b)};
        for (auto d : dis) {
            words.push_back(word("dis", d));
        }
        for (std::size_t j = words.size(); j > 1; --j) {
            std::swap(words[j - 1], words[pick(rng, j)]);
        }
        std::string text;
        for (const auto& w : words) {
            text += (text.empty() ? "" : " ") + w;
        }
        c.docs.push_back({"d" + std::to_string(i), std::nullopt, text});
        doc_distractors.emplace_back(dis.begin(), dis.end());
    }

    auto make_query = [&](std::size_t doc) {
        auto [a, b] = pairs[doc];
        std::vector<std::string> words{word("cen", a), word("cen", b)};
        for (auto n : distinct(rng, shape.noise_words_per_query, shape.distractor_vocab, doc_distractors[doc])) {
            words.push_back(word("dis", n));
        }
        for (std::size_t j = words.size(); j > 1; --j) {
            std::swap(words[j - 1], words[pick(rng, j)]);
        }
        std::string text;
        for (const auto& w : words) {
            text += (text.empty() ? "" : " ") + w;
        }
        return text;
    };

    for (std::size_t i = 0; i < shape.docs; ++i) {
        for (std::size_t r = 0; r < shape.train_queries_per_doc; ++r) {
            std::string id = "train" + std::to_string(i) + "_" + std::to_string(r);
            c.train_queries.push_back({id, make_query(i), QueryKind::generic});
            c.train_qrels[id][c.docs[i].external_id] = 1;
        }
    }
    for (std::size_t doc : distinct(rng, shape.test_queries, shape.docs)) {
        std::string id = "test" + std::to_string(doc);
        c.test_queries.push_back({id, make_query(doc), QueryKind::generic});
        c.test_qrels[id][c.docs[doc].external_id] = 1;
    }
    return c;
}

}  // namespace tw::testing

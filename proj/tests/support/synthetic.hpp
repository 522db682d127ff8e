#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tw/corpus.hpp"

namespace tw::testing {

// Made-up word that every analyzer setting leaves unchanged: a prefix plus
// a consonant-only code, so no stemmer suffix rule can fire.
std::string word(const std::string& prefix, std::size_t n);

std::size_t pick(std::mt19937_64& rng, std::size_t n);

// Documents of 1..max_len words drawn from `vocab` words (repeats allowed).
std::vector<Document> random_docs(std::mt19937_64& rng, std::size_t docs, std::size_t vocab, std::size_t max_len);

// Queries of 1..max_terms words over the same vocabulary.
std::vector<Query> random_queries(std::mt19937_64& rng, std::size_t queries, std::size_t vocab,
                                  std::size_t max_terms);

struct CentralTermsCorpus {
    std::vector<Document> docs;
    std::vector<Query> train_queries;
    Qrels train_qrels;
    std::vector<Query> test_queries;
    Qrels test_qrels;
};

struct CentralTermsShape {
    std::size_t docs = 200;
    std::size_t central_vocab = 40;
    std::size_t distractor_vocab = 400;
    std::size_t distractors_per_doc = 8;
    std::size_t train_queries_per_doc = 2;
    std::size_t test_queries = 50;
    std::size_t noise_words_per_query = 2;
};

// Every document holds 2 central words and some distractor words, each once.
// No two documents share the same central pair. Queries ask for a document's
// central pair plus noise words that the document does not contain; each has
// exactly that document as its one relevant answer. Test queries are fresh
// queries, disjoint from the training queries.
CentralTermsCorpus central_terms_corpus(std::uint64_t seed, const CentralTermsShape& shape = {});

}  // namespace tw::testing

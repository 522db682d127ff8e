#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tw/analyzer.hpp"
#include "tw/corpus.hpp"
#include "tw/weights_io.hpp"

namespace tw {

using DocOrdinal = std::uint32_t;

/// Stored weight is raw tf or a scaled predicted weight, always >= 1.
/// Positions (0-based offsets in the analyzed document) are kept for every
/// occurrence when the index is positional, independent of the weight.
struct Posting {
    DocOrdinal doc = 0;
    std::uint32_t weight = 0;
    std::vector<std::uint32_t> positions;

    bool operator==(const Posting&) const = default;
};

struct LexiconEntry {
    std::string term;
    std::uint32_t df = 0;
    std::uint64_t ctf = 0;
    std::uint64_t postings_offset = 0;
    std::uint64_t postings_len = 0;

    bool operator==(const LexiconEntry&) const = default;
};

struct DocEntry {
    std::string external_id;
    /// Sum of the document's stored weights. Zero-length documents stay in
    /// the table but match nothing.
    std::uint64_t dl = 0;

    bool operator==(const DocEntry&) const = default;
};

struct IndexMeta {
    std::uint64_t doc_count = 0;
    std::uint64_t total_weight = 0;
    double avgdl = 0.0;
    AnalyzerConfig analyzer;
    bool weighted = false;
    std::uint32_t scale_n = 0;
    bool positional = false;

    bool operator==(const IndexMeta&) const = default;
};

/// round(y * n), half away from zero. Returns nullopt (term dropped) for
/// negative y or when the rounded value is below 1. Throws on non-finite y
/// or n == 0.
std::optional<std::uint32_t> scale_weight(double y, std::uint32_t n);

enum class MissingWeightPolicy { strict, drop_doc, use_tf };

std::string_view to_string(MissingWeightPolicy policy);
MissingWeightPolicy parse_missing_policy(std::string_view name);

struct IndexOptions {
    bool positional = false;
    /// Weighted mode when non-null: posting weight = scale_weight(record[term]).
    const WeightMap* weights = nullptr;
    std::uint32_t scale_n = 100;
    MissingWeightPolicy missing = MissingWeightPolicy::strict;
    std::size_t threads = 1;
};

class InvertedIndex {
public:
    InvertedIndex() = default;

    const IndexMeta& meta() const { return meta_; }
    std::span<const DocEntry> docs() const { return docs_; }
    std::span<const LexiconEntry> lexicon() const { return lexicon_; }

    /// Term id (position in the sorted lexicon) or nullopt.
    std::optional<std::size_t> find(std::string_view term) const;
    std::span<const Posting> postings(std::size_t term_id) const { return postings_[term_id]; }

    std::size_t posting_count() const;

    bool operator==(const InvertedIndex& other) const
    {
        return meta_ == other.meta_ && docs_ == other.docs_ && lexicon_ == other.lexicon_ &&
               postings_ == other.postings_;
    }

    /// Takes ownership of finished parts; recomputes lookup tables, postings
    /// offsets, and collection statistics.
    static InvertedIndex assemble(IndexMeta meta, std::vector<DocEntry> docs, std::vector<std::string> terms,
                                  std::vector<std::vector<Posting>> postings);

    /// Encoded bytes of one term's postings as stored in postings.bin.
    std::string encode_postings(std::size_t term_id) const;

private:
    IndexMeta meta_;
    std::vector<DocEntry> docs_;
    std::vector<LexiconEntry> lexicon_;
    std::vector<std::vector<Posting>> postings_;
    std::unordered_map<std::string, std::size_t> term_ids_;
};

InvertedIndex build_index(const DocumentStream& docs, const Analyzer& analyzer, const IndexOptions& options);

/// Writes meta.txt, lexicon.tsv, docs.tsv, postings.bin, checksums.txt.
void persist_index(const InvertedIndex& index, const std::string& dir);
InvertedIndex load_index(const std::string& dir);

inline constexpr int kIndexFormatVersion = 1;

/// Entry i: mean over documents with dl > 0 of (i-th largest stored weight
/// / dl); documents with fewer than i terms contribute 0.
std::vector<double> weight_rank_profile(const InvertedIndex& index, std::uint32_t top_k);

}  // namespace tw

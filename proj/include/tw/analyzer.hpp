#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace tw {

enum class StemmerKind { none, porter };

std::string_view to_string(StemmerKind kind);
StemmerKind parse_stemmer(std::string_view name);

struct AnalyzerConfig {
    bool lowercase = true;
    StemmerKind stem = StemmerKind::porter;
    /// Matched against case-folded tokens before stemming. Empty means no
    /// stopword removal.
    std::vector<std::string> stopwords;

    bool operator==(const AnalyzerConfig&) const = default;
};

/// Tokens are maximal runs of alphanumeric code points. Non-ASCII code
/// points count as alphanumeric unless they fall in a known punctuation,
/// symbol, separator, emoji, or private-use block.
bool is_token_codepoint(char32_t cp);

/// Decodes UTF-8; invalid sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

class Analyzer {
public:
    explicit Analyzer(AnalyzerConfig config = {});

    /// Ordered term sequence; a term's position is its index in the result.
    std::vector<std::string> analyze(std::string_view text) const;

    const AnalyzerConfig& config() const { return config_; }

    /// Same normalization with stopword removal disabled. Target
    /// computation runs on this so that stopwords still receive targets.
    Analyzer without_stopwords() const;

private:
    AnalyzerConfig config_;
    std::unordered_set<std::string> stopwords_;
};

std::vector<std::string> analyze(std::string_view text, const AnalyzerConfig& config);

/// A short English function-word list (the classic Lucene/SMART core).
std::vector<std::string> default_english_stopwords();

}  // namespace tw

#include "tw/analyzer.hpp"

#include "tw/error.hpp"
#include "tw/porter.hpp"

namespace tw {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

char32_t fold_case(char32_t cp)
{
    if (cp >= U'A' && cp <= U'Z') {
        return cp + 0x20;
    }
    if (cp < 0xC0) {
        return cp;
    }
    if (cp <= 0xDE && cp != 0xD7) {
        return cp + 0x20;
    }
    if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) {
        return (cp % 2 == 0) ? cp + 1 : cp;
    }
    if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
        return (cp % 2 == 1) ? cp + 1 : cp;
    }
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) {
        return cp + 0x20;
    }
    if (cp >= 0x410 && cp <= 0x42F) {
        return cp + 0x20;
    }
    if (cp >= 0x400 && cp <= 0x40F) {
        return cp + 0x50;
    }
    return cp;
}

}  // namespace

std::string_view to_string(StemmerKind kind)
{
    return kind == StemmerKind::porter ? "porter" : "none";
}

StemmerKind parse_stemmer(std::string_view name)
{
    if (name == "porter") {
        return StemmerKind::porter;
    }
    if (name == "none") {
        return StemmerKind::none;
    }
    throw Error("unknown stemmer '" + std::string(name) + "' (expected porter or none)");
}

bool is_token_codepoint(char32_t cp)
{
    if (cp < 0x80) {
        return (cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
    }
    if (cp < 0xC0) {
        // Latin-1 punctuation block; keep ordinal indicators, micro sign,
        // superscript digits and vulgar fractions.
        return cp == 0xAA || cp == 0xB2 || cp == 0xB3 || cp == 0xB5 || cp == 0xB9 || cp == 0xBA ||
               (cp >= 0xBC && cp <= 0xBE);
    }
    if (cp == 0xD7 || cp == 0xF7) {
        return false;
    }
    if (cp >= 0x2000 && cp <= 0x2BFF) {
        return false;
    }
    if (cp >= 0x3000 && cp <= 0x303F) {
        return false;
    }
    if ((cp >= 0xD800 && cp <= 0xF8FF) || (cp >= 0xFE30 && cp <= 0xFE4F)) {
        return false;
    }
    if ((cp >= 0xFF00 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) || (cp >= 0xFF3B && cp <= 0xFF40) ||
        (cp >= 0xFF5B && cp <= 0xFF65) || (cp >= 0xFFF0 && cp <= 0xFFFF)) {
        return false;
    }
    if ((cp >= 0x1F000 && cp <= 0x1FAFF) || cp >= 0xF0000) {
        return false;
    }
    return true;
}

std::u32string decode_utf8(std::string_view text)
{
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        auto lead = static_cast<unsigned char>(text[i]);
        int extra = 0;
        char32_t cp = 0;
        if (lead < 0x80) {
            out.push_back(lead);
            ++i;
            continue;
        } else if ((lead & 0xE0) == 0xC0) {
            extra = 1;
            cp = lead & 0x1F;
        } else if ((lead & 0xF0) == 0xE0) {
            extra = 2;
            cp = lead & 0x0F;
        } else if ((lead & 0xF8) == 0xF0) {
            extra = 3;
            cp = lead & 0x07;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + static_cast<std::size_t>(extra) >= text.size()) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        bool ok = true;
        for (int n = 1; n <= extra; ++n) {
            auto c = static_cast<unsigned char>(text[i + static_cast<std::size_t>(n)]);
            if ((c & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (c & 0x3F);
        }
        static constexpr char32_t kMin[] = {0, 0x80, 0x800, 0x10000};
        if (!ok || cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += static_cast<std::size_t>(extra) + 1;
    }
    return out;
}

std::string encode_utf8(std::u32string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

Analyzer::Analyzer(AnalyzerConfig config) : config_(std::move(config))
{
    for (const auto& word : config_.stopwords) {
        if (config_.lowercase) {
            std::u32string folded = decode_utf8(word);
            for (auto& cp : folded) {
                cp = fold_case(cp);
            }
            stopwords_.insert(encode_utf8(folded));
        } else {
            stopwords_.insert(word);
        }
    }
}

Analyzer Analyzer::without_stopwords() const
{
    AnalyzerConfig copy = config_;
    copy.stopwords.clear();
    return Analyzer(std::move(copy));
}

std::vector<std::string> Analyzer::analyze(std::string_view text) const
{
    std::vector<std::string> terms;
    std::u32string codepoints = decode_utf8(text);
    std::u32string token;
    auto flush = [&] {
        if (token.empty()) {
            return;
        }
        std::string term = encode_utf8(token);
        token.clear();
        if (!stopwords_.empty() && stopwords_.contains(term)) {
            return;
        }
        if (config_.stem == StemmerKind::porter) {
            term = porter_stem(term);
        }
        terms.push_back(std::move(term));
    };
    for (char32_t cp : codepoints) {
        if (is_token_codepoint(cp)) {
            token.push_back(config_.lowercase ? fold_case(cp) : cp);
        } else {
            flush();
        }
    }
    flush();
    return terms;
}

std::vector<std::string> analyze(std::string_view text, const AnalyzerConfig& config)
{
    return Analyzer(config).analyze(text);
}

std::vector<std::string> default_english_stopwords()
{
    return {"a",    "an",   "and",   "are",  "as",   "at",   "be",   "but",  "by",    "for",  "if",
            "in",   "into", "is",    "it",   "no",   "not",  "of",   "on",   "or",    "such", "that",
            "the",  "their", "then", "there", "these", "they", "this", "to",  "was",  "will", "with"};
}

}  // namespace tw

#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "tw/analyzer.hpp"
#include "tw/porter.hpp"

namespace tw {
namespace {

AnalyzerConfig plain()
{
    AnalyzerConfig c;
    c.stem = StemmerKind::none;
    return c;
}

TEST(Analyzer, EmptyTextGivesNoTerms)
{
    EXPECT_TRUE(analyze("", AnalyzerConfig{}).empty());
    EXPECT_TRUE(analyze("  ,;!  ", AnalyzerConfig{}).empty());
}

TEST(Analyzer, FoldsCase)
{
    EXPECT_EQ(analyze("Stomach stomach!", plain()), (std::vector<std::string>{"stomach", "stomach"}));
}

TEST(Analyzer, KeepsCaseWhenAsked)
{
    auto c = plain();
    c.lowercase = false;
    EXPECT_EQ(analyze("Stomach stomach", c), (std::vector<std::string>{"Stomach", "stomach"}));
}

TEST(Analyzer, PorterStemsInflections)
{
    EXPECT_EQ(analyze("running runs", AnalyzerConfig{}), (std::vector<std::string>{"run", "run"}));
}

TEST(Analyzer, SplitsOnPunctuationAndKeepsDigits)
{
    EXPECT_EQ(analyze("state-of-the-art, 2019's F1", plain()),
              (std::vector<std::string>{"state", "of", "the", "art", "2019", "s", "f1"}));
}

TEST(Analyzer, NonAsciiLettersFormTerms)
{
    EXPECT_EQ(analyze("Café ÉCOLE naïve", plain()), (std::vector<std::string>{"café", "école", "naïve"}));
    EXPECT_EQ(analyze("日本語 text", plain()), (std::vector<std::string>{"日本語", "text"}));
}

TEST(Analyzer, UnicodePunctuationSeparates)
{
    EXPECT_EQ(analyze("left\u2014right \u201cquoted\u201d", plain()),
              (std::vector<std::string>{"left", "right", "quoted"}));
}

TEST(Analyzer, InvalidUtf8DoesNotThrow)
{
    std::string bad = "ok \xff\xfe end";
    EXPECT_NO_THROW(analyze(bad, plain()));
}

TEST(Analyzer, StopwordsMatchBeforeStemming)
{
    AnalyzerConfig c;
    c.stopwords = {"The", "running"};
    EXPECT_EQ(analyze("the running runs", c), (std::vector<std::string>{"run"}));
}

TEST(Analyzer, WithoutStopwordsKeepsOtherSettings)
{
    AnalyzerConfig c;
    c.stopwords = default_english_stopwords();
    Analyzer a(c);
    EXPECT_EQ(a.analyze("the cats"), (std::vector<std::string>{"cat"}));
    EXPECT_EQ(a.without_stopwords().analyze("the cats"), (std::vector<std::string>{"the", "cat"}));
    EXPECT_EQ(a.without_stopwords().config().stem, StemmerKind::porter);
}

TEST(Analyzer, ParsesStemmerNames)
{
    EXPECT_EQ(parse_stemmer("porter"), StemmerKind::porter);
    EXPECT_EQ(parse_stemmer("none"), StemmerKind::none);
    EXPECT_EQ(to_string(StemmerKind::porter), "porter");
    EXPECT_THROW(parse_stemmer("snowball"), std::exception);
}

TEST(Analyzer, Utf8RoundTrip)
{
    std::string text = "aé日\U0001F600z";
    EXPECT_EQ(encode_utf8(decode_utf8(text)), text);
}

TEST(Porter, MatchesReferenceStems)
{
    std::ifstream in(std::string(TW_TEST_DATA_DIR) + "/porter_reference.tsv");
    ASSERT_TRUE(in);
    std::string line;
    std::size_t checked = 0;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string word, stem;
        fields >> word >> stem;
        EXPECT_EQ(porter_stem(word), stem) << word;
        ++checked;
    }
    EXPECT_EQ(checked, 200u);
}

TEST(Porter, ShortWordsUnchanged)
{
    EXPECT_EQ(porter_stem("as"), "as");
    EXPECT_EQ(porter_stem("a"), "a");
    EXPECT_EQ(porter_stem(""), "");
}

std::string random_text(std::mt19937_64& rng)
{
    static const std::vector<std::string> pieces = {
        "a", "Z", "7", " ", "\t", "-", ",", ".", "'", "é", "Ö", "ß", "日", "’", " ", "、", "ing", "ed", "s",
    };
    std::string text;
    std::size_t n = rng() % 40;
    for (std::size_t i = 0; i < n; ++i) {
        text += pieces[rng() % pieces.size()];
    }
    return text;
}

TEST(AnalyzerProperty, TermsContainOnlyTokenCharacters)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        for (const auto& term : analyze(random_text(rng), AnalyzerConfig{})) {
            ASSERT_FALSE(term.empty());
            for (char32_t cp : decode_utf8(term)) {
                ASSERT_TRUE(is_token_codepoint(cp)) << term;
            }
        }
    }
}

TEST(AnalyzerProperty, IdempotentWithoutStemming)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        auto terms = analyze(random_text(rng), plain());
        std::string joined;
        for (const auto& t : terms) {
            joined += t + " ";
        }
        ASSERT_EQ(analyze(joined, plain()), terms);
    }
}

TEST(AnalyzerProperty, Deterministic)
{
    std::mt19937_64 rng(3);
    Analyzer a;
    for (int i = 0; i < 500; ++i) {
        auto text = random_text(rng);
        ASSERT_EQ(a.analyze(text), a.analyze(text));
    }
}

}  // namespace
}  // namespace tw

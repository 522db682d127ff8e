#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "tw/eval.hpp"

namespace tw {
namespace {

QueryRun ranked(const std::string& qid, std::vector<std::string> docs)
{
    QueryRun q{qid, {}};
    for (std::size_t i = 0; i < docs.size(); ++i) {
        q.hits.push_back({docs[i], 100.0 - static_cast<double>(i), static_cast<std::uint32_t>(i + 1)});
    }
    return q;
}

tw::Run one(std::vector<std::string> docs)
{
    return tw::Run{{ranked("q", std::move(docs))}};
}

std::vector<std::string> filler(std::size_t n, const std::string& prefix = "x")
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(prefix + std::to_string(i));
    }
    return out;
}

TEST(Mrr, FirstRelevantRank)
{
    Qrels qrels{{"q", {{"r", 1}}}};
    EXPECT_DOUBLE_EQ(mrr_at_k(one({"r", "a"}), qrels).mean, 1.0);
    EXPECT_DOUBLE_EQ(mrr_at_k(one({"a", "b", "r"}), qrels).mean, 1.0 / 3.0);
    auto docs = filler(10);
    docs.push_back("r");
    EXPECT_DOUBLE_EQ(mrr_at_k(one(docs), qrels, 10).mean, 0.0);
    EXPECT_DOUBLE_EQ(mrr_at_k(one(docs), qrels, 11).mean, 1.0 / 11.0);
}

TEST(Mrr, GradeZeroIsNotRelevant)
{
    Qrels qrels{{"q", {{"a", 0}, {"r", 2}}}};
    EXPECT_DOUBLE_EQ(mrr_at_k(one({"a", "r"}), qrels).mean, 0.5);
}

TEST(Map, WorkedExample)
{
    Qrels qrels{{"q", {{"r1", 1}, {"r2", 1}}}};
    auto report = map_at_k(one({"r1", "x", "r2"}), qrels);
    EXPECT_NEAR(report.mean, (1.0 + 2.0 / 3.0) / 2.0, 1e-12);
    EXPECT_NEAR(report.mean, 0.8333, 1e-4);
    EXPECT_DOUBLE_EQ(map_at_k(one({"r2", "r1", "x"}), qrels).mean, 1.0);
    EXPECT_DOUBLE_EQ(map_at_k(one({"x", "y"}), qrels).mean, 0.0);
}

TEST(Map, UnretrievedRelevantsCountInDenominator)
{
    Qrels qrels{{"q", {{"r1", 1}, {"r2", 1}, {"r3", 1}, {"r4", 1}}}};
    EXPECT_DOUBLE_EQ(map_at_k(one({"r1", "r2"}), qrels).mean, 0.5);
    EXPECT_DOUBLE_EQ(map_at_k(one({"r1", "x", "r2"}), qrels, 2).mean, 0.25);
}

TEST(Ndcg, WorkedExamples)
{
    Qrels qrels{{"q", {{"r", 1}}}};
    EXPECT_DOUBLE_EQ(ndcg_at_k(one({"r"}), qrels).mean, 1.0);
    auto report = ndcg_at_k(one({"x", "r"}), qrels);
    EXPECT_NEAR(report.mean, 1.0 / std::log2(3.0), 1e-12);
    EXPECT_NEAR(report.mean, 0.6309, 1e-4);
}

TEST(Ndcg, GradedGains)
{
    Qrels qrels{{"q", {{"a", 3}, {"b", 1}, {"c", 2}}}};
    EXPECT_DOUBLE_EQ(ndcg_at_k(one({"a", "c", "b"}), qrels).mean, 1.0);
    double dcg = 1.0 / std::log2(2.0) + 7.0 / std::log2(3.0) + 3.0 / std::log2(4.0);
    double idcg = 7.0 / std::log2(2.0) + 3.0 / std::log2(3.0) + 1.0 / std::log2(4.0);
    EXPECT_NEAR(ndcg_at_k(one({"b", "a", "c"}), qrels).mean, dcg / idcg, 1e-12);
    // The ideal ordering is taken over all judged docs, not only retrieved ones.
    EXPECT_NEAR(ndcg_at_k(one({"c"}), qrels).mean, 3.0 / idcg, 1e-12);
}

TEST(Ndcg, UnjudgedDocsBelowCutoffDoNotMatter)
{
    Qrels qrels{{"q", {{"a", 2}, {"b", 1}}}};
    EXPECT_DOUBLE_EQ(ndcg_at_k(one({"a", "b", "x", "y"}), qrels, 2).mean, 1.0);
    EXPECT_LT(ndcg_at_k(one({"a", "x", "b"}), qrels, 20).mean, 1.0);
}

TEST(Recall, SetCounts)
{
    Qrels qrels{{"q", {{"r", 1}}}};
    auto docs = filler(4);
    docs.push_back("r");
    EXPECT_DOUBLE_EQ(recall_at_depth(one(docs), qrels, 10).mean, 1.0);
    EXPECT_DOUBLE_EQ(recall_at_depth(one(docs), qrels, 4).mean, 0.0);

    Qrels four{{"q", {{"r1", 1}, {"r2", 1}, {"r3", 1}, {"r4", 1}}}};
    auto many = filler(150);
    many[10] = "r1";
    many[99] = "r2";
    many[120] = "r3";
    EXPECT_DOUBLE_EQ(recall_at_depth(one(many), four, 100).mean, 0.5);
}

TEST(Reports, SkipsQueriesWithoutRelevantDocs)
{
    tw::Run run{{ranked("q1", {"a"}), ranked("q2", {"b"}), ranked("q3", {"c"})}};
    Qrels qrels{{"q1", {{"a", 1}}}, {"q2", {{"b", 0}}}};
    for (auto metric : {Metric::mrr, Metric::map, Metric::ndcg, Metric::recall}) {
        auto report = evaluate(metric, run, qrels, default_cutoff(metric));
        EXPECT_EQ(report.evaluated, 1u);
        EXPECT_EQ(report.skipped, 2u);
        EXPECT_DOUBLE_EQ(report.mean, 1.0);
    }
}

TEST(Reports, TsvAndJson)
{
    tw::Run run{{ranked("q1", {"a"}), ranked("q2", {"x", "b"})}};
    Qrels qrels{{"q1", {{"a", 1}}}, {"q2", {{"b", 1}}}};
    auto report = mrr_at_k(run, qrels);
    std::ostringstream tsv;
    write_report_tsv(tsv, report);
    EXPECT_EQ(tsv.str(), "q1\t1.000000\nq2\t0.500000\n");
    EXPECT_EQ(report_json(report), "{\"metric\":\"mrr\",\"k\":10,\"mean\":0.75,\"evaluated\":2,\"skipped\":0}");
}

TEST(Reports, MetricNames)
{
    EXPECT_EQ(parse_metric("ndcg"), Metric::ndcg);
    EXPECT_EQ(to_string(Metric::map), "map");
    EXPECT_EQ(default_cutoff(Metric::mrr), 10u);
    EXPECT_EQ(default_cutoff(Metric::map), 1000u);
    EXPECT_EQ(default_cutoff(Metric::ndcg), 20u);
    EXPECT_THROW(parse_metric("p@10"), std::exception);
    EXPECT_THROW(mrr_at_k(tw::Run{}, {}, 0), std::exception);
}

struct RandomSetup {
    tw::Run run;
    Qrels qrels;
};

RandomSetup random_setup(std::mt19937_64& rng)
{
    RandomSetup s;
    std::size_t queries = 1 + rng() % 15;
    for (std::size_t q = 0; q < queries; ++q) {
        std::string qid = "q" + std::to_string(q);
        std::vector<std::string> docs = filler(rng() % 60, "d");
        for (std::size_t i = docs.size(); i > 1; --i) {
            std::swap(docs[i - 1], docs[rng() % i]);
        }
        s.run.queries.push_back(ranked(qid, docs));
        for (std::size_t d = 0; d < 80; ++d) {
            if (rng() % 8 == 0) {
                s.qrels[qid]["d" + std::to_string(d)] = static_cast<int>(rng() % 4);
            }
        }
    }
    return s;
}

TEST(MetricProperty, RangeAndMeanOfPerQuery)
{
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 300; ++trial) {
        auto s = random_setup(rng);
        for (auto metric : {Metric::mrr, Metric::map, Metric::ndcg, Metric::recall}) {
            auto report = evaluate(metric, s.run, s.qrels, 1 + static_cast<std::uint32_t>(rng() % 30), 3);
            double sum = 0;
            for (const auto& [qid, v] : report.per_query) {
                ASSERT_GE(v, 0.0);
                ASSERT_LE(v, 1.0 + 1e-12);
                sum += v;
            }
            ASSERT_EQ(report.evaluated + report.skipped, s.run.queries.size());
            if (report.evaluated > 0) {
                ASSERT_NEAR(report.mean, sum / static_cast<double>(report.evaluated), 1e-12);
            }
        }
    }
}

TEST(MetricProperty, RecallMonotoneInDepth)
{
    std::mt19937_64 rng(56);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = random_setup(rng);
        double last = -1.0;
        for (std::uint32_t depth = 1; depth <= 64; depth *= 2) {
            double value = recall_at_depth(s.run, s.qrels, depth).mean;
            ASSERT_GE(value, last);
            last = value;
        }
    }
}

TEST(MetricProperty, MrrIgnoresOrderBelowCutoff)
{
    std::mt19937_64 rng(57);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = random_setup(rng);
        auto shuffled = s.run;
        for (auto& q : shuffled.queries) {
            if (q.hits.size() > 10) {
                std::reverse(q.hits.begin() + 10, q.hits.end());
            }
        }
        ASSERT_EQ(mrr_at_k(s.run, s.qrels).mean, mrr_at_k(shuffled, s.qrels).mean);
    }
}

TEST(WinTieLossTest, IdenticalRunsTie)
{
    std::mt19937_64 rng(60);
    auto s = random_setup(rng);
    auto report = mrr_at_k(s.run, s.qrels);
    auto wtl = win_tie_loss(s.run, s.run, s.qrels, Metric::mrr, 10);
    EXPECT_EQ(wtl, (WinTieLoss{0, static_cast<std::uint32_t>(report.evaluated), 0}));
}

TEST(WinTieLossTest, AlwaysBetterWinsEverywhere)
{
    tw::Run a, b;
    Qrels qrels;
    for (int i = 0; i < 5; ++i) {
        std::string qid = "q" + std::to_string(i);
        a.queries.push_back(ranked(qid, {"rel", "x"}));
        auto docs = filler(10);
        docs.push_back("rel");
        b.queries.push_back(ranked(qid, docs));
        qrels[qid]["rel"] = 1;
    }
    EXPECT_EQ(win_tie_loss(a, b, qrels, Metric::mrr, 10), (WinTieLoss{5, 0, 0}));
    EXPECT_EQ(win_tie_loss(b, a, qrels, Metric::mrr, 10), (WinTieLoss{0, 0, 5}));
}

TEST(WinTieLossTest, MatchesIndependentComparison)
{
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        auto s = random_setup(rng);
        auto other = s.run;
        for (auto& q : other.queries) {
            for (std::size_t i = q.hits.size(); i > 1; --i) {
                std::swap(q.hits[i - 1].external_id, q.hits[rng() % i].external_id);
            }
        }
        for (auto metric : {Metric::mrr, Metric::ndcg}) {
            auto ra = evaluate(metric, s.run, s.qrels, 10);
            auto rb = evaluate(metric, other, s.qrels, 10);
            WinTieLoss expected;
            for (std::size_t i = 0; i < ra.per_query.size(); ++i) {
                ASSERT_EQ(ra.per_query[i].first, rb.per_query[i].first);
                double x = ra.per_query[i].second, y = rb.per_query[i].second;
                expected.wins += x > y;
                expected.ties += x == y;
                expected.losses += x < y;
            }
            ASSERT_EQ(win_tie_loss(s.run, other, s.qrels, metric, 10), expected);
        }
    }
}

TEST(WinTieLossTest, EpsilonWidensTies)
{
    Qrels qrels{{"q", {{"r", 1}}}};
    auto a = one({"r"});
    auto b = one({"x", "r"});
    EXPECT_EQ(win_tie_loss(a, b, qrels, Metric::mrr, 10), (WinTieLoss{1, 0, 0}));
    EXPECT_EQ(win_tie_loss(a, b, qrels, Metric::mrr, 10, 0.6), (WinTieLoss{0, 1, 0}));
}

TEST(WinTieLossTest, QuerySetMismatchIsError)
{
    tw::Run a{{ranked("q1", {"a"})}};
    tw::Run b{{ranked("q2", {"a"})}};
    EXPECT_THROW(win_tie_loss(a, b, {}, Metric::mrr, 10), std::exception);
}

}  // namespace
}  // namespace tw

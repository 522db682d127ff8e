#include "tw/eval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "tw/error.hpp"
#include "tw/parallel.hpp"

namespace tw {
namespace {

using Judged = std::map<std::string, int>;
using PerQuery = std::function<std::optional<double>(const std::vector<ScoredDoc>&, const Judged&)>;

std::size_t count_relevant(const Judged& judged)
{
    std::size_t n = 0;
    for (const auto& [doc, grade] : judged) {
        if (grade > 0) {
            ++n;
        }
    }
    return n;
}

int grade_of(const Judged& judged, const std::string& doc)
{
    auto it = judged.find(doc);
    return it == judged.end() ? 0 : it->second;
}

void check_cutoff(std::uint32_t k)
{
    if (k == 0) {
        throw Error("metric cutoff must be >= 1");
    }
}

MetricReport run_metric(Metric metric, std::uint32_t k, const Run& run, const Qrels& qrels, std::size_t threads,
                        const PerQuery& per_query)
{
    check_cutoff(k);
    std::vector<std::optional<double>> values(run.queries.size());
    parallel_for(run.queries.size(), threads, [&](std::size_t i) {
        const auto& q = run.queries[i];
        auto judged = qrels.find(q.query_id);
        if (judged == qrels.end() || count_relevant(judged->second) == 0) {
            return;
        }
        values[i] = per_query(q.hits, judged->second);
    });
    MetricReport report;
    report.metric = metric;
    report.k = k;
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i]) {
            ++report.skipped;
            continue;
        }
        report.per_query.emplace_back(run.queries[i].query_id, *values[i]);
        sum += *values[i];
    }
    report.evaluated = report.per_query.size();
    report.mean = report.evaluated == 0 ? 0.0 : sum / static_cast<double>(report.evaluated);
    return report;
}

}  // namespace

std::string_view to_string(Metric metric)
{
    switch (metric) {
    case Metric::mrr:
        return "mrr";
    case Metric::map:
        return "map";
    case Metric::ndcg:
        return "ndcg";
    case Metric::recall:
        return "recall";
    }
    return "mrr";
}

Metric parse_metric(std::string_view name)
{
    if (name == "mrr") {
        return Metric::mrr;
    }
    if (name == "map") {
        return Metric::map;
    }
    if (name == "ndcg") {
        return Metric::ndcg;
    }
    if (name == "recall") {
        return Metric::recall;
    }
    throw Error("unknown metric '" + std::string(name) + "' (expected mrr, map, ndcg or recall)");
}

std::uint32_t default_cutoff(Metric metric)
{
    switch (metric) {
    case Metric::mrr:
        return 10;
    case Metric::map:
        return 1000;
    case Metric::ndcg:
        return 20;
    case Metric::recall:
        return 1000;
    }
    return 10;
}

MetricReport mrr_at_k(const Run& run, const Qrels& qrels, std::uint32_t k, std::size_t threads)
{
    return run_metric(Metric::mrr, k, run, qrels, threads, [k](const auto& hits, const Judged& judged) {
        for (std::size_t r = 0; r < hits.size() && r < k; ++r) {
            if (grade_of(judged, hits[r].external_id) > 0) {
                return std::optional<double>(1.0 / static_cast<double>(r + 1));
            }
        }
        return std::optional<double>(0.0);
    });
}

MetricReport map_at_k(const Run& run, const Qrels& qrels, std::uint32_t k, std::size_t threads)
{
    return run_metric(Metric::map, k, run, qrels, threads, [k](const auto& hits, const Judged& judged) {
        double sum = 0.0;
        std::size_t found = 0;
        for (std::size_t r = 0; r < hits.size() && r < k; ++r) {
            if (grade_of(judged, hits[r].external_id) > 0) {
                ++found;
                sum += static_cast<double>(found) / static_cast<double>(r + 1);
            }
        }
        return std::optional<double>(sum / static_cast<double>(count_relevant(judged)));
    });
}

MetricReport ndcg_at_k(const Run& run, const Qrels& qrels, std::uint32_t k, std::size_t threads)
{
    return run_metric(Metric::ndcg, k, run, qrels, threads,
                      [k](const auto& hits, const Judged& judged) -> std::optional<double> {
                          auto gain = [](int grade) { return std::exp2(static_cast<double>(grade)) - 1.0; };
                          double dcg = 0.0;
                          for (std::size_t r = 0; r < hits.size() && r < k; ++r) {
                              dcg += gain(grade_of(judged, hits[r].external_id)) / std::log2(static_cast<double>(r) + 2.0);
                          }
                          std::vector<int> grades;
                          for (const auto& [doc, grade] : judged) {
                              grades.push_back(grade);
                          }
                          std::sort(grades.begin(), grades.end(), std::greater<>());
                          double ideal = 0.0;
                          for (std::size_t r = 0; r < grades.size() && r < k; ++r) {
                              ideal += gain(grades[r]) / std::log2(static_cast<double>(r) + 2.0);
                          }
                          if (ideal == 0.0) {
                              return std::nullopt;
                          }
                          return dcg / ideal;
                      });
}

MetricReport recall_at_depth(const Run& run, const Qrels& qrels, std::uint32_t depth, std::size_t threads)
{
    return run_metric(Metric::recall, depth, run, qrels, threads, [depth](const auto& hits, const Judged& judged) {
        std::size_t found = 0;
        for (std::size_t r = 0; r < hits.size() && r < depth; ++r) {
            if (grade_of(judged, hits[r].external_id) > 0) {
                ++found;
            }
        }
        return std::optional<double>(static_cast<double>(found) / static_cast<double>(count_relevant(judged)));
    });
}

MetricReport evaluate(Metric metric, const Run& run, const Qrels& qrels, std::uint32_t k, std::size_t threads)
{
    switch (metric) {
    case Metric::mrr:
        return mrr_at_k(run, qrels, k, threads);
    case Metric::map:
        return map_at_k(run, qrels, k, threads);
    case Metric::ndcg:
        return ndcg_at_k(run, qrels, k, threads);
    case Metric::recall:
        return recall_at_depth(run, qrels, k, threads);
    }
    throw Error("unknown metric");
}

void write_report_tsv(std::ostream& out, const MetricReport& report)
{
    char buf[64];
    for (const auto& [qid, value] : report.per_query) {
        std::snprintf(buf, sizeof buf, "%.6f", value);
        out << qid << '\t' << buf << '\n';
    }
}

std::string report_json(const MetricReport& report)
{
    nlohmann::ordered_json j;
    j["metric"] = to_string(report.metric);
    j["k"] = report.k;
    j["mean"] = report.mean;
    j["evaluated"] = report.evaluated;
    j["skipped"] = report.skipped;
    return j.dump();
}

WinTieLoss win_tie_loss(const Run& a, const Run& b, const Qrels& qrels, Metric metric, std::uint32_t k,
                        double epsilon)
{
    std::set<std::string> qa, qb;
    for (const auto& q : a.queries) {
        qa.insert(q.query_id);
    }
    for (const auto& q : b.queries) {
        qb.insert(q.query_id);
    }
    if (qa != qb) {
        throw Error("runs cover different query sets");
    }
    auto ra = evaluate(metric, a, qrels, k);
    auto rb = evaluate(metric, b, qrels, k);
    std::unordered_map<std::string, double> vb(rb.per_query.begin(), rb.per_query.end());
    WinTieLoss out;
    for (const auto& [qid, value] : ra.per_query) {
        double diff = value - vb.at(qid);
        if (diff > epsilon) {
            ++out.wins;
        } else if (-diff > epsilon) {
            ++out.losses;
        } else {
            ++out.ties;
        }
    }
    return out;
}

}  // namespace tw

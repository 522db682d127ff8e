#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tw/corpus.hpp"
#include "tw/run.hpp"

namespace tw {

enum class Metric { mrr, map, ndcg, recall };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view name);
std::uint32_t default_cutoff(Metric metric);

/// Per-query values in run order. Queries without any relevant judgment
/// are left out of `per_query` and counted in `skipped`.
struct MetricReport {
    Metric metric = Metric::mrr;
    std::uint32_t k = 0;
    std::vector<std::pair<std::string, double>> per_query;
    double mean = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
};

/// 1 / rank of the first relevant document within the top k, else 0.
MetricReport mrr_at_k(const Run& run, const Qrels& qrels, std::uint32_t k = 10, std::size_t threads = 1);

/// Sum of precision@r at each relevant rank r <= k, over the number of
/// judged-relevant documents.
MetricReport map_at_k(const Run& run, const Qrels& qrels, std::uint32_t k = 1000, std::size_t threads = 1);

/// DCG with gain 2^grade - 1 and discount log2(r + 1), over the ideal DCG
/// of the judged grades.
MetricReport ndcg_at_k(const Run& run, const Qrels& qrels, std::uint32_t k = 20, std::size_t threads = 1);

/// Fraction of relevant documents inside the top `depth`.
MetricReport recall_at_depth(const Run& run, const Qrels& qrels, std::uint32_t depth, std::size_t threads = 1);

MetricReport evaluate(Metric metric, const Run& run, const Qrels& qrels, std::uint32_t k, std::size_t threads = 1);

/// `query_id<TAB>value` lines.
void write_report_tsv(std::ostream& out, const MetricReport& report);
/// {"metric", "k", "mean", "evaluated", "skipped"}.
std::string report_json(const MetricReport& report);

struct WinTieLoss {
    std::uint32_t wins = 0;
    std::uint32_t ties = 0;
    std::uint32_t losses = 0;

    bool operator==(const WinTieLoss&) const = default;
};

/// Per-query comparison of run a against run b. A difference within
/// `epsilon` is a tie. Both runs must cover the same queries.
WinTieLoss win_tie_loss(const Run& a, const Run& b, const Qrels& qrels, Metric metric, std::uint32_t k,
                        double epsilon = 0.0);

}  // namespace tw

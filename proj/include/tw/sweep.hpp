#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tw/eval.hpp"
#include "tw/run.hpp"

namespace tw {

struct SweepGrid {
    std::vector<double> k1;
    std::vector<double> b;
    std::vector<double> lambda;
};

struct SweepRow {
    std::vector<double> params;
    double value = 0.0;
};

struct SweepResult {
    std::vector<std::string> param_names;
    /// Every grid point, in ascending lexicographic parameter order.
    std::vector<SweepRow> rows;
    SweepRow best;
};

/// "0.5,0.9,1.2" or inclusive "start:stop:step".
std::vector<double> parse_grid(std::string_view spec);

/// Evaluates every grid point (bm25: k1 x b, ql: lambda) and returns the
/// one with the highest mean metric; ties go to the lexicographically
/// smallest parameter tuple.
SweepResult sweep(const InvertedIndex& index, const std::vector<QueryInput>& queries, const Qrels& qrels,
                  RetrievalModel model, const SweepGrid& grid, Metric metric, std::uint32_t metric_k,
                  std::uint32_t depth, std::size_t threads = 1);

}  // namespace tw

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tw/search.hpp"

namespace tw {

struct QueryRun {
    std::string query_id;
    std::vector<ScoredDoc> hits;

    bool operator==(const QueryRun&) const = default;
};

/// Ranked lists per query, in query order.
struct Run {
    std::vector<QueryRun> queries;

    const QueryRun* find(std::string_view query_id) const;
    bool operator==(const Run&) const = default;
};

/// Six columns: `qid Q0 external_id rank score tag`, score with 6 decimals.
void write_run(std::ostream& out, const Run& run, std::string_view tag);
void write_run(const std::string& path, const Run& run, std::string_view tag);

/// Groups lines by query in order of first appearance and sorts each list
/// by rank. Scores keep the precision written in the file.
Run parse_run(std::istream& in, const std::string& source);
Run read_run(const std::string& path);

/// Keeps the first `depth` hits of every query.
Run truncate_run(const Run& run, std::uint32_t depth);

/// Writes the run truncated to `depth` under a new tag, the candidate set
/// a downstream re-ranker consumes.
void export_candidates(const Run& run, std::uint32_t depth, std::string_view tag, const std::string& path);

struct QueryInput {
    std::string query_id;
    WeightedQuery query;
};

/// Runs every query (in parallel when threads > 1); the result keeps input
/// order, so it does not depend on the thread count.
Run run_queries(const InvertedIndex& index, const std::vector<QueryInput>& queries, std::uint32_t k,
                const RetrievalParams& params, std::size_t threads = 1);

}  // namespace tw

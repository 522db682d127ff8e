#include "tw/run.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "tw/error.hpp"
#include "tw/parallel.hpp"

namespace tw {

const QueryRun* Run::find(std::string_view query_id) const
{
    for (const auto& q : queries) {
        if (q.query_id == query_id) {
            return &q;
        }
    }
    return nullptr;
}

void write_run(std::ostream& out, const Run& run, std::string_view tag)
{
    if (tag.empty() || tag.find_first_of(" \t\n") != std::string_view::npos) {
        throw Error("run tag must be a non-empty word");
    }
    char score[64];
    for (const auto& q : run.queries) {
        for (const auto& hit : q.hits) {
            std::snprintf(score, sizeof score, "%.6f", hit.score);
            out << q.query_id << " Q0 " << hit.external_id << ' ' << hit.rank << ' ' << score << ' ' << tag << '\n';
        }
    }
}

void write_run(const std::string& path, const Run& run, std::string_view tag)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path);
    }
    write_run(out, run, tag);
    if (!out) {
        throw Error("write failed: " + path);
    }
}

Run parse_run(std::istream& in, const std::string& source)
{
    Run run;
    std::unordered_map<std::string, std::size_t> slot;
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::istringstream fields(line);
        std::string qid, q0, docid, rank_text, score_text, tag, extra;
        if (!(fields >> qid >> q0 >> docid >> rank_text >> score_text >> tag) || (fields >> extra)) {
            throw Error(source + ":" + std::to_string(line_no) + ": expected 'qid Q0 docid rank score tag'");
        }
        ScoredDoc hit;
        hit.external_id = docid;
        auto [rp, rec] = std::from_chars(rank_text.data(), rank_text.data() + rank_text.size(), hit.rank);
        if (rec != std::errc() || rp != rank_text.data() + rank_text.size()) {
            throw Error(source + ":" + std::to_string(line_no) + ": bad rank '" + rank_text + "'");
        }
        try {
            std::size_t used = 0;
            hit.score = std::stod(score_text, &used);
            if (used != score_text.size()) {
                throw std::invalid_argument(score_text);
            }
        } catch (const std::exception&) {
            throw Error(source + ":" + std::to_string(line_no) + ": bad score '" + score_text + "'");
        }
        if (!seen.emplace(qid, docid).second) {
            throw Error(source + ":" + std::to_string(line_no) + ": duplicate document '" + docid + "' for query '" +
                        qid + "'");
        }
        auto [it, inserted] = slot.try_emplace(qid, run.queries.size());
        if (inserted) {
            run.queries.push_back({qid, {}});
        }
        run.queries[it->second].hits.push_back(std::move(hit));
    }
    for (auto& q : run.queries) {
        std::stable_sort(q.hits.begin(), q.hits.end(),
                         [](const ScoredDoc& a, const ScoredDoc& b) { return a.rank < b.rank; });
    }
    return run;
}

Run read_run(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return parse_run(in, path);
}

Run truncate_run(const Run& run, std::uint32_t depth)
{
    if (depth == 0) {
        throw Error("depth must be >= 1");
    }
    Run out;
    for (const auto& q : run.queries) {
        QueryRun t{q.query_id, {}};
        auto n = std::min<std::size_t>(depth, q.hits.size());
        t.hits.assign(q.hits.begin(), q.hits.begin() + static_cast<std::ptrdiff_t>(n));
        out.queries.push_back(std::move(t));
    }
    return out;
}

void export_candidates(const Run& run, std::uint32_t depth, std::string_view tag, const std::string& path)
{
    write_run(path, truncate_run(run, depth), tag);
}

Run run_queries(const InvertedIndex& index, const std::vector<QueryInput>& queries, std::uint32_t k,
                const RetrievalParams& params, std::size_t threads)
{
    Run run;
    run.queries.resize(queries.size());
    parallel_for(queries.size(), threads, [&](std::size_t i) {
        run.queries[i].query_id = queries[i].query_id;
        try {
            run.queries[i].hits = search(index, queries[i].query, k, params);
        } catch (const Error& e) {
            throw Error("query '" + queries[i].query_id + "': " + e.what());
        }
    });
    return run;
}

}  // namespace tw

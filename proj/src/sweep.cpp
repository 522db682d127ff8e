#include "tw/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tw/error.hpp"

namespace tw {
namespace {

double parse_double(std::string_view text)
{
    std::string s(text);
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used == s.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw Error("bad grid value '" + s + "'");
}

std::vector<double> sorted_unique(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec)
{
    std::vector<double> values;
    if (spec.find(':') != std::string_view::npos) {
        auto c1 = spec.find(':');
        auto c2 = spec.find(':', c1 + 1);
        if (c2 == std::string_view::npos) {
            throw Error("range grid must be start:stop:step");
        }
        double start = parse_double(spec.substr(0, c1));
        double stop = parse_double(spec.substr(c1 + 1, c2 - c1 - 1));
        double step = parse_double(spec.substr(c2 + 1));
        if (!(step > 0.0) || stop < start) {
            throw Error("range grid needs step > 0 and stop >= start");
        }
        auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) {
            values.push_back(std::round((start + static_cast<double>(i) * step) * 1e10) / 1e10);
        }
        return values;
    }
    std::size_t start = 0;
    while (start <= spec.size()) {
        auto end = spec.find(',', start);
        if (end == std::string_view::npos) {
            end = spec.size();
        }
        values.push_back(parse_double(spec.substr(start, end - start)));
        start = end + 1;
    }
    return values;
}

SweepResult sweep(const InvertedIndex& index, const std::vector<QueryInput>& queries, const Qrels& qrels,
                  RetrievalModel model, const SweepGrid& grid, Metric metric, std::uint32_t metric_k,
                  std::uint32_t depth, std::size_t threads)
{
    std::vector<std::vector<double>> points;
    SweepResult result;
    if (model == RetrievalModel::bm25) {
        result.param_names = {"k1", "b"};
        for (double k1 : sorted_unique(grid.k1)) {
            for (double b : sorted_unique(grid.b)) {
                points.push_back({k1, b});
            }
        }
    } else {
        result.param_names = {"lambda"};
        for (double lambda : sorted_unique(grid.lambda)) {
            points.push_back({lambda});
        }
    }
    if (points.empty()) {
        throw Error("empty parameter grid");
    }
    bool have_best = false;
    for (const auto& point : points) {
        RetrievalParams params;
        params.model = model;
        if (model == RetrievalModel::bm25) {
            params.bm25 = {point[0], point[1]};
        } else {
            params.lambda = point[0];
        }
        Run run = run_queries(index, queries, depth, params, threads);
        double value = evaluate(metric, run, qrels, metric_k, threads).mean;
        result.rows.push_back({point, value});
        if (!have_best || value > result.best.value) {
            result.best = result.rows.back();
            have_best = true;
        }
    }
    return result;
}

}  // namespace tw

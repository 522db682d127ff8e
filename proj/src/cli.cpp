#include "tw/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tw/analyzer.hpp"
#include "tw/corpus.hpp"
#include "tw/error.hpp"
#include "tw/eval.hpp"
#include "tw/features.hpp"
#include "tw/index.hpp"
#include "tw/parallel.hpp"
#include "tw/query.hpp"
#include "tw/run.hpp"
#include "tw/search.hpp"
#include "tw/sweep.hpp"
#include "tw/targets.hpp"
#include "tw/weigher.hpp"
#include "tw/weights_io.hpp"

namespace tw::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
public:
    using Error::Error;
};

struct AnalyzerFlags {
    std::string stem = "porter";
    bool lowercase = true;
    std::string stopwords = "none";
};

struct Options {
    std::size_t threads = 1;
    std::uint64_t seed = 13;
    std::string config;

    AnalyzerFlags analyzer;
    std::string mode;

    std::string collection;
    std::string format = "auto";
    std::string queries;
    std::string qrels;
    std::string out;

    // index
    std::string weights;
    std::uint32_t scale = 100;
    std::string missing = "strict";
    bool positional = false;

    // train / predict
    std::string targets;
    std::string model;
    std::string owners = "docs";
    double learning_rate = 1e-3;
    std::size_t epochs = 200;
    double subsample = 1.0;

    // search / sweep
    std::string index;
    std::uint32_t k = 1000;
    double k1 = 0.9;
    double b = 0.4;
    double lambda = 0.4;
    std::string weighted_query;
    bool sdm = false;
    std::string mix = "0.85,0.10,0.05";
    std::uint32_t window = 8;
    std::string tag;
    std::string k1_grid = "0.5:1.5:0.1";
    std::string b_grid = "0.1:1.0:0.1";
    std::string lambda_grid = "0.1:0.9:0.1";
    std::string metric = "mrr";
    std::uint32_t metric_k = 0;
    std::uint32_t depth = 1000;
    std::size_t sample = 0;

    // evaluate / compare / export / stats
    std::string run;
    std::string run_a;
    std::string run_b;
    std::uint32_t cutoff = 0;
    std::string per_query;
    double epsilon = 0.0;
    std::uint32_t top_k = 10;
};

void add_analyzer_flags(CLI::App* sub, AnalyzerFlags& flags)
{
    sub->add_option("--stem", flags.stem, "Stemmer applied to every term")->check(CLI::IsMember({"porter", "none"}));
    sub->add_option("--lowercase", flags.lowercase, "Fold case before matching (true or false)");
    sub->add_option("--stopwords", flags.stopwords, "Stopword list: none, english, or a file with one word per line");
}

AnalyzerConfig analyzer_config(const AnalyzerFlags& flags)
{
    AnalyzerConfig config;
    config.lowercase = flags.lowercase;
    config.stem = parse_stemmer(flags.stem);
    if (flags.stopwords == "english") {
        config.stopwords = default_english_stopwords();
    } else if (flags.stopwords != "none") {
        std::ifstream in(flags.stopwords);
        if (!in) {
            throw Error("cannot open stopword file " + flags.stopwords);
        }
        std::string word;
        while (in >> word) {
            config.stopwords.push_back(word);
        }
    }
    return config;
}

CollectionFormat collection_format(const Options& o)
{
    return o.format == "auto" ? guess_collection_format(o.collection) : parse_collection_format(o.format);
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) {
        out.push_back(item);
    }
    return out;
}

std::string option_name(const CLI::Option* opt)
{
    const auto& long_names = opt->get_lnames();
    return long_names.empty() ? opt->get_name() : long_names.front();
}

/// key=value lines of every option in effect for `sub`, sorted by key.
/// The thread count is left out: it never changes an output.
std::string resolved_config(const CLI::App& app, const CLI::App& sub)
{
    std::map<std::string, std::string> values;
    auto collect = [&values](const CLI::App& from) {
        for (const CLI::Option* opt : from.get_options()) {
            std::string key = option_name(opt);
            if (key.empty() || key == "help" || key == "config" || key == "threads") {
                continue;
            }
            std::string value;
            if (opt->count() > 0) {
                auto results = opt->results();
                for (std::size_t i = 0; i < results.size(); ++i) {
                    value += (i ? "," : "") + results[i];
                }
                if (opt->get_expected_min() == 0 && value.empty()) {
                    value = "true";
                }
            } else {
                value = opt->get_default_str();
                if (opt->get_expected_min() == 0 && value.empty()) {
                    value = "false";
                }
            }
            values[key] = value;
        }
    };
    collect(app);
    collect(sub);
    std::string out;
    for (const auto& [k, v] : values) {
        out += k + "=" + v + "\n";
    }
    return out;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path);
    }
    out << text;
}

std::vector<TermTargets> targets_from_records(std::vector<WeightRecord> records)
{
    std::vector<TermTargets> out;
    out.reserve(records.size());
    for (auto& r : records) {
        out.push_back({std::move(r.owner_id), std::move(r.weights), 1});
    }
    return out;
}

std::vector<OwnerText> owner_texts(const Options& o, const std::vector<Document>& docs)
{
    std::vector<OwnerText> owners;
    if (o.owners == "queries") {
        if (o.queries.empty()) {
            throw UsageError("--owners queries needs --queries");
        }
        for (const auto& q : load_queries(o.queries)) {
            owners.push_back(owner_text(q));
        }
    } else {
        for (const auto& d : docs) {
            owners.push_back(owner_text(d));
        }
    }
    return owners;
}

SdmMix parse_mix(const std::string& text)
{
    auto parts = split(text, ',');
    if (parts.size() != 3) {
        throw UsageError("--mix needs three comma-separated weights");
    }
    try {
        SdmMix mix{std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
        validate(mix);
        return mix;
    } catch (const std::invalid_argument&) {
        throw UsageError("--mix needs numeric weights");
    }
}

/// Weighted (or uniform) bag-of-words queries; missing-term warnings go to
/// `err` in query order.
std::vector<QueryInput> build_queries(const std::vector<Query>& queries, const Analyzer& analyzer,
                                      const std::optional<WeightMap>& weights, std::ostream& err)
{
    std::vector<QueryInput> out;
    out.reserve(queries.size());
    for (const auto& q : queries) {
        if (!weights) {
            out.push_back({q.query_id, uniform_query(q, analyzer)});
            continue;
        }
        auto it = weights->find(q.query_id);
        if (it == weights->end()) {
            throw Error("no query weights for query '" + q.query_id + "'");
        }
        auto weighted = make_weighted_query(q, it->second, analyzer);
        if (!weighted.missing_terms.empty()) {
            err << "warning: query '" << q.query_id << "': no weight for";
            for (const auto& t : weighted.missing_terms) {
                err << ' ' << t;
            }
            err << "; dropped\n";
        }
        out.push_back({q.query_id, std::move(weighted.query)});
    }
    return out;
}

std::optional<WeightMap> query_weights(const Options& o)
{
    if (o.weighted_query.empty()) {
        return std::nullopt;
    }
    return read_weight_map(o.weighted_query);
}

void cmd_index(const Options& o, std::ostream& out, const std::string& config)
{
    Analyzer analyzer(analyzer_config(o.analyzer));
    std::optional<WeightMap> weights;
    IndexOptions options;
    options.positional = o.positional;
    options.threads = o.threads;
    options.scale_n = o.scale;
    options.missing = parse_missing_policy(o.missing);
    if (!o.weights.empty()) {
        weights = read_weight_map(o.weights);
        options.weights = &*weights;
    }
    CollectionReader reader(o.collection, collection_format(o));
    auto index = build_index(stream_documents(reader), analyzer, options);
    persist_index(index, o.out);
    write_text((fs::path(o.out) / "config.txt").string(), config);
    out << "indexed " << index.meta().doc_count << " documents, " << index.lexicon().size() << " terms, "
        << index.posting_count() << " postings\n";
}

void cmd_targets(const Options& o, std::ostream& out, const std::string& config)
{
    Analyzer analyzer(analyzer_config(o.analyzer));
    auto qrels = load_qrels(o.qrels);
    auto queries = load_queries(o.queries);
    CollectionReader reader(o.collection, collection_format(o));
    auto targets = o.mode == "qtr" ? compute_qtr(qrels, queries, stream_documents(reader), analyzer)
                                   : compute_tr(qrels, queries, stream_documents(reader), analyzer);
    write_weights(o.out, oracle_weigher(targets));
    write_text(o.out + ".config", config);
    out << "wrote " << targets.size() << " " << o.mode << " target records\n";
}

void cmd_train(const Options& o, std::ostream& out, const std::string& config)
{
    Analyzer analyzer(analyzer_config(o.analyzer));
    auto docs = load_collection(o.collection, collection_format(o));
    auto stats = collect_stats(stream_documents(docs), analyzer);
    auto targets = targets_from_records(read_weights(o.targets));
    auto examples = build_examples(targets, owner_texts(o, docs), stats, analyzer);
    if (examples.empty()) {
        throw Error("no training examples: target owners do not match the " + o.owners + " texts");
    }
    TrainOptions options;
    options.learning_rate = o.learning_rate;
    options.epochs = o.epochs;
    options.seed = o.seed;
    options.subsample_fraction = o.subsample;
    auto model = train(examples, options);
    save_model(o.out, model);
    write_text(o.out + ".config", config);
    nlohmann::ordered_json summary;
    summary["examples"] = examples.size();
    summary["examples_used"] = model.meta.examples_used;
    summary["final_loss"] = model.meta.loss_history.back();
    out << summary.dump() << '\n';
}

void cmd_predict(const Options& o, std::ostream& out, const std::string& config)
{
    Analyzer analyzer(analyzer_config(o.analyzer));
    auto model = load_model(o.model);
    if (model.dimension() != kFeatureCount) {
        throw Error("model dimension " + std::to_string(model.dimension()) + " does not match the " +
                    std::to_string(kFeatureCount) + " term features");
    }
    auto docs = load_collection(o.collection, collection_format(o));
    auto stats = collect_stats(stream_documents(docs), analyzer);
    auto records = predict_weights(model, owner_texts(o, docs), stats, analyzer);
    write_weights(o.out, records);
    write_text(o.out + ".config", config);
    out << "wrote " << records.size() << " weight records\n";
}

void cmd_search(const Options& o, std::ostream& out, std::ostream& err, const std::string& config)
{
    RetrievalParams params;
    params.model = parse_retrieval_model(o.mode);
    params.bm25 = {o.k1, o.b};
    params.lambda = o.lambda;
    if (o.sdm && params.model != RetrievalModel::ql) {
        throw UsageError("--sdm is scored with query likelihood; use 'search ql --sdm'");
    }
    auto index = load_index(o.index);
    Analyzer analyzer(index.meta().analyzer);
    auto queries = load_queries(o.queries);
    auto weights = query_weights(o);

    Run run;
    std::string tag = o.tag;
    if (o.sdm) {
        SdmMix mix = parse_mix(o.mix);
        std::vector<SdmQuery> sdm;
        for (const auto& q : queries) {
            const WeightRecord* record = nullptr;
            if (weights) {
                auto it = weights->find(q.query_id);
                if (it == weights->end()) {
                    throw Error("no query weights for query '" + q.query_id + "'");
                }
                record = &it->second;
            }
            sdm.push_back(make_sdm_query(q, record, analyzer, mix, o.window));
        }
        run.queries.resize(queries.size());
        parallel_for(queries.size(), o.threads, [&](std::size_t i) {
            run.queries[i].query_id = queries[i].query_id;
            run.queries[i].hits = sdm_search(index, sdm[i], o.k, o.lambda);
        });
        if (tag.empty()) {
            tag = "sdm-ql";
        }
    } else {
        auto inputs = build_queries(queries, analyzer, weights, err);
        run = run_queries(index, inputs, o.k, params, o.threads);
        if (tag.empty()) {
            tag = params.model == RetrievalModel::bm25 ? "bm25-lucene" : "ql-jm";
        }
    }
    write_run(o.out, run, tag);
    write_text(o.out + ".config", config);
    out << "searched " << queries.size() << " queries\n";
}

MetricReport evaluate_from(const Options& o, Metric metric, const Run& run, const Qrels& qrels)
{
    std::uint32_t k = o.cutoff == 0 ? default_cutoff(metric) : o.cutoff;
    return evaluate(metric, run, qrels, k, o.threads);
}

void cmd_evaluate(const Options& o, std::ostream& out, const std::string& config)
{
    auto report = evaluate_from(o, parse_metric(o.mode), read_run(o.run), load_qrels(o.qrels));
    if (!o.per_query.empty()) {
        std::ofstream tsv(o.per_query, std::ios::binary | std::ios::trunc);
        if (!tsv) {
            throw Error("cannot write " + o.per_query);
        }
        write_report_tsv(tsv, report);
    }
    std::string summary = report_json(report) + "\n";
    if (o.out.empty()) {
        out << summary;
    } else {
        write_text(o.out, summary);
        write_text(o.out + ".config", config);
    }
}

void cmd_compare(const Options& o, std::ostream& out, const std::string& config)
{
    Metric metric = parse_metric(o.metric);
    std::uint32_t k = o.cutoff == 0 ? default_cutoff(metric) : o.cutoff;
    auto result = win_tie_loss(read_run(o.run_a), read_run(o.run_b), load_qrels(o.qrels), metric, k, o.epsilon);
    nlohmann::ordered_json j;
    j["metric"] = to_string(metric);
    j["k"] = k;
    j["wins"] = result.wins;
    j["ties"] = result.ties;
    j["losses"] = result.losses;
    std::string text = j.dump() + "\n";
    if (o.out.empty()) {
        out << text;
    } else {
        write_text(o.out, text);
        write_text(o.out + ".config", config);
    }
}

void cmd_sweep(const Options& o, std::ostream& out, std::ostream& err, const std::string& config)
{
    RetrievalModel model = parse_retrieval_model(o.mode);
    Metric metric = parse_metric(o.metric);
    std::uint32_t metric_k = o.metric_k == 0 ? default_cutoff(metric) : o.metric_k;
    auto index = load_index(o.index);
    Analyzer analyzer(index.meta().analyzer);
    auto queries = load_queries(o.queries);
    if (o.sample > 0 && o.sample < queries.size()) {
        auto keep = subsample_indices(queries.size(),
                                      static_cast<double>(o.sample) / static_cast<double>(queries.size()), o.seed);
        std::vector<Query> sampled;
        for (auto i : keep) {
            sampled.push_back(queries[i]);
        }
        queries = std::move(sampled);
    }
    auto inputs = build_queries(queries, analyzer, query_weights(o), err);
    SweepGrid grid{parse_grid(o.k1_grid), parse_grid(o.b_grid), parse_grid(o.lambda_grid)};
    auto result = sweep(index, inputs, load_qrels(o.qrels), model, grid, metric, metric_k, o.depth, o.threads);

    if (!o.out.empty()) {
        std::ostringstream table;
        for (const auto& name : result.param_names) {
            table << name << '\t';
        }
        table << to_string(metric) << '\n';
        char buf[64];
        for (const auto& row : result.rows) {
            for (double p : row.params) {
                table << format_weight(p) << '\t';
            }
            std::snprintf(buf, sizeof buf, "%.6f", row.value);
            table << buf << '\n';
        }
        write_text(o.out, table.str());
        write_text(o.out + ".config", config);
    }
    nlohmann::ordered_json best;
    best["model"] = to_string(model);
    best["metric"] = to_string(metric);
    best["k"] = metric_k;
    for (std::size_t i = 0; i < result.param_names.size(); ++i) {
        best[result.param_names[i]] = result.best.params[i];
    }
    best["value"] = result.best.value;
    best["queries"] = inputs.size();
    out << best.dump() << '\n';
}

void cmd_stats(const Options& o, std::ostream& out, const std::string& config)
{
    auto index = load_index(o.index);
    nlohmann::ordered_json j;
    j["doc_count"] = index.meta().doc_count;
    j["terms"] = index.lexicon().size();
    j["postings"] = index.posting_count();
    j["total_weight"] = index.meta().total_weight;
    j["avgdl"] = index.meta().avgdl;
    j["weighted"] = index.meta().weighted;
    j["scale_n"] = index.meta().scale_n;
    j["positional"] = index.meta().positional;
    j["weight_rank_profile"] = weight_rank_profile(index, o.top_k);
    std::string text = j.dump() + "\n";
    if (o.out.empty()) {
        out << text;
    } else {
        write_text(o.out, text);
        write_text(o.out + ".config", config);
    }
}

void cmd_export(const Options& o, std::ostream& out, const std::string& config)
{
    if (o.tag.empty()) {
        throw UsageError("export needs --tag");
    }
    auto run = read_run(o.run);
    export_candidates(run, o.depth, o.tag, o.out);
    write_text(o.out + ".config", config);
    out << "exported " << run.queries.size() << " queries at depth " << o.depth << '\n';
}

bool mentioned(const std::vector<std::string>& args, const std::string& key)
{
    const std::string flag = "--" + key;
    for (const auto& a : args) {
        if (a == flag || a.rfind(flag + "=", 0) == 0) {
            return true;
        }
    }
    return false;
}

std::map<std::string, std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config file " + path);
    }
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
        }
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::optional<std::string> config_argument(const std::vector<std::string>& args)
{
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            return args[i + 1];
        }
        if (args[i].rfind("--config=", 0) == 0) {
            return args[i].substr(9);
        }
    }
    return std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& input_args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Learned term weighting for first-stage retrieval", "termweight"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    app.add_option("--threads", o.threads, "Worker threads; results do not depend on it")
        ->check(CLI::Range(std::size_t{1}, std::size_t{256}));
    app.add_option("--seed", o.seed, "Seed for every random choice (training subsample, sweep query sample)");
    app.add_option("--config", o.config, "key=value file; command-line flags take precedence");

    auto* index = app.add_subcommand("index", "Build an inverted index (tf or weighted postings)");
    index->add_option("--collection", o.collection, "Collection file (TSV id<TAB>text or JSONL)")->required();
    index->add_option("--format", o.format, "Collection format")->check(CLI::IsMember({"auto", "tsv", "jsonl"}));
    index->add_option("--out", o.out, "Index directory")->required();
    index->add_option("--weights", o.weights, "Document weight file; switches postings to scaled weights");
    index->add_option("--scale", o.scale, "Scale N: stored weight = round(weight * N)")
        ->check(CLI::Range(std::uint32_t{1}, std::uint32_t{1000000}));
    index->add_option("--missing", o.missing, "Documents without weights: strict, drop_doc or use_tf")
        ->check(CLI::IsMember({"strict", "drop_doc", "use_tf"}));
    index->add_flag("--positional", o.positional, "Store term positions (needed for --sdm)");
    add_analyzer_flags(index, o.analyzer);

    auto* targets = app.add_subcommand("targets", "Compute ground-truth term weights from relevance judgments");
    targets->add_option("mode", o.mode, "qtr (document terms) or tr (query terms)")
        ->required()
        ->check(CLI::IsMember({"qtr", "tr"}));
    targets->add_option("--qrels", o.qrels, "Relevance judgments (qid 0 docid grade)")->required();
    targets->add_option("--queries", o.queries, "Queries (TSV)")->required();
    targets->add_option("--collection", o.collection, "Collection file")->required();
    targets->add_option("--format", o.format, "Collection format")->check(CLI::IsMember({"auto", "tsv", "jsonl"}));
    targets->add_option("--out", o.out, "Output weight file (JSONL)")->required();
    add_analyzer_flags(targets, o.analyzer);

    auto* trainer = app.add_subcommand("train", "Fit the linear term weigher to target weights");
    trainer->add_option("--targets", o.targets, "Target weight file (JSONL)")->required();
    trainer->add_option("--collection", o.collection, "Collection file (texts and document frequencies)")
        ->required();
    trainer->add_option("--format", o.format, "Collection format")->check(CLI::IsMember({"auto", "tsv", "jsonl"}));
    trainer->add_option("--queries", o.queries, "Queries (TSV), when the targets belong to queries");
    trainer->add_option("--owners", o.owners, "Whose texts the targets describe")
        ->check(CLI::IsMember({"docs", "queries"}));
    trainer->add_option("--out", o.out, "Model file (JSON)")->required();
    trainer->add_option("--lr", o.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
    trainer->add_option("--epochs", o.epochs, "Full-batch gradient steps");
    trainer->add_option("--subsample", o.subsample, "Fraction of training examples to keep")
        ->check(CLI::Range(0.0, 1.0));
    add_analyzer_flags(trainer, o.analyzer);

    auto* predictor = app.add_subcommand("predict", "Write predicted term weights for documents or queries");
    predictor->add_option("--model", o.model, "Model file (JSON)")->required();
    predictor->add_option("--collection", o.collection, "Collection file (texts and document frequencies)")
        ->required();
    predictor->add_option("--format", o.format, "Collection format")->check(CLI::IsMember({"auto", "tsv", "jsonl"}));
    predictor->add_option("--queries", o.queries, "Queries (TSV), with --owners queries");
    predictor->add_option("--owners", o.owners, "Weight documents or queries")
        ->check(CLI::IsMember({"docs", "queries"}));
    predictor->add_option("--out", o.out, "Output weight file (JSONL)")->required();
    add_analyzer_flags(predictor, o.analyzer);

    auto* searcher = app.add_subcommand("search", "Rank documents for every query and write a run file");
    searcher->add_option("mode", o.mode, "Retrieval model: bm25 or ql")->required()->check(CLI::IsMember({"bm25", "ql"}));
    searcher->add_option("--index", o.index, "Index directory")->required();
    searcher->add_option("--queries", o.queries, "Queries (TSV)")->required();
    searcher->add_option("--out", o.out, "Run file")->required();
    searcher->add_option("--k", o.k, "Results per query")->check(CLI::PositiveNumber);
    searcher->add_option("--k1", o.k1, "BM25 k1")->check(CLI::NonNegativeNumber);
    searcher->add_option("--b", o.b, "BM25 b")->check(CLI::Range(0.0, 1.0));
    searcher->add_option("--lambda", o.lambda, "Query likelihood smoothing weight")->check(CLI::Range(0.0, 1.0));
    searcher->add_option("--weighted-query", o.weighted_query, "Query weight file (JSONL)");
    searcher->add_flag("--sdm", o.sdm, "Sequential dependence query (ql only, positional index)");
    searcher->add_option("--mix", o.mix, "SDM unigram,ordered,unordered weights");
    searcher->add_option("--window", o.window, "SDM unordered window")->check(CLI::Range(std::uint32_t{2}, std::uint32_t{1000}));
    searcher->add_option("--tag", o.tag, "Run tag (default names the scorer)");

    auto* evaluator = app.add_subcommand("evaluate", "Score a run against relevance judgments");
    evaluator->add_option("mode", o.mode, "Metric: mrr, map, ndcg or recall")
        ->required()
        ->check(CLI::IsMember({"mrr", "map", "ndcg", "recall"}));
    evaluator->add_option("--run", o.run, "Run file")->required();
    evaluator->add_option("--qrels", o.qrels, "Relevance judgments")->required();
    evaluator->add_option("--k", o.cutoff, "Cutoff (default: mrr 10, map 1000, ndcg 20, recall 1000)");
    evaluator->add_option("--per-query", o.per_query, "Per-query values (TSV)");
    evaluator->add_option("--out", o.out, "JSON summary file (default stdout)");

    auto* comparer = app.add_subcommand("compare", "Count queries improved, unchanged and hurt by run A over run B");
    comparer->add_option("--run-a", o.run_a, "Run file A")->required();
    comparer->add_option("--run-b", o.run_b, "Run file B (baseline)")->required();
    comparer->add_option("--qrels", o.qrels, "Relevance judgments")->required();
    comparer->add_option("--metric", o.metric, "Metric")->check(CLI::IsMember({"mrr", "map", "ndcg", "recall"}));
    comparer->add_option("--k", o.cutoff, "Metric cutoff (default per metric)");
    comparer->add_option("--epsilon", o.epsilon, "Differences up to epsilon count as ties")
        ->check(CLI::NonNegativeNumber);
    comparer->add_option("--out", o.out, "JSON output file (default stdout)");

    auto* sweeper = app.add_subcommand("sweep", "Grid-search retrieval parameters");
    sweeper->add_option("mode", o.mode, "Retrieval model: bm25 or ql")->required()->check(CLI::IsMember({"bm25", "ql"}));
    sweeper->add_option("--index", o.index, "Index directory")->required();
    sweeper->add_option("--queries", o.queries, "Queries (TSV)")->required();
    sweeper->add_option("--qrels", o.qrels, "Relevance judgments")->required();
    sweeper->add_option("--metric", o.metric, "Target metric")->check(CLI::IsMember({"mrr", "map", "ndcg", "recall"}));
    sweeper->add_option("--metric-k", o.metric_k, "Metric cutoff (default per metric)");
    sweeper->add_option("--depth", o.depth, "Results retrieved per query")->check(CLI::PositiveNumber);
    sweeper->add_option("--k1-grid", o.k1_grid, "BM25 k1 values: list a,b,c or start:stop:step");
    sweeper->add_option("--b-grid", o.b_grid, "BM25 b values");
    sweeper->add_option("--lambda-grid", o.lambda_grid, "Query likelihood lambda values");
    sweeper->add_option("--sample", o.sample, "Sweep on a random sample of this many queries (0 = all)");
    sweeper->add_option("--weighted-query", o.weighted_query, "Query weight file (JSONL)");
    sweeper->add_option("--out", o.out, "Table of every grid point (TSV)");

    auto* stats = app.add_subcommand("stats", "Index statistics and the term weight rank profile");
    stats->add_option("--index", o.index, "Index directory")->required();
    stats->add_option("--top-k", o.top_k, "Ranks in the weight profile")->check(CLI::PositiveNumber);
    stats->add_option("--out", o.out, "JSON output file (default stdout)");

    auto* exporter = app.add_subcommand("export", "Write the top candidates of a run for a re-ranker");
    exporter->add_option("--run", o.run, "Run file")->required();
    exporter->add_option("--depth", o.depth, "Candidates per query")->check(CLI::PositiveNumber);
    exporter->add_option("--tag", o.tag, "Tag of the exported run")->required();
    exporter->add_option("--out", o.out, "Candidate run file")->required();

    std::vector<std::string> args = input_args;
    try {
        if (auto config_path = config_argument(args)) {
            const CLI::App* active = nullptr;
            for (const auto& a : args) {
                for (const CLI::App* sub : app.get_subcommands({})) {
                    if (sub->get_name() == a) {
                        active = sub;
                        break;
                    }
                }
                if (active) {
                    break;
                }
            }
            for (const auto& [key, value] : read_config_file(*config_path)) {
                const std::string flag = "--" + key;
                bool known = key != "config" && app.get_option_no_throw(flag) != nullptr;
                for (const CLI::App* sub : app.get_subcommands({})) {
                    known = known || sub->get_option_no_throw(flag) != nullptr;
                }
                if (!known) {
                    throw UsageError("unknown config key '" + key + "' in " + *config_path);
                }
                bool applies = app.get_option_no_throw(flag) != nullptr ||
                               (active != nullptr && active->get_option_no_throw(flag) != nullptr);
                if (applies && !mentioned(args, key)) {
                    args.push_back(flag + "=" + value);
                }
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        const CLI::App* sub = app.get_subcommands().front();
        const std::string config = resolved_config(app, *sub);
        const std::string& name = sub->get_name();
        if (name == "index") {
            cmd_index(o, out, config);
        } else if (name == "targets") {
            cmd_targets(o, out, config);
        } else if (name == "train") {
            cmd_train(o, out, config);
        } else if (name == "predict") {
            cmd_predict(o, out, config);
        } else if (name == "search") {
            cmd_search(o, out, err, config);
        } else if (name == "evaluate") {
            cmd_evaluate(o, out, config);
        } else if (name == "compare") {
            cmd_compare(o, out, config);
        } else if (name == "sweep") {
            cmd_sweep(o, out, err, config);
        } else if (name == "stats") {
            cmd_stats(o, out, config);
        } else if (name == "export") {
            cmd_export(o, out, config);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace tw::cli

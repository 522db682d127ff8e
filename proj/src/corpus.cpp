#include "tw/corpus.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

#include "tw/error.hpp"

namespace tw {
namespace {

std::string located(const std::string& path, std::size_t line, const std::string& what)
{
    return path + ":" + std::to_string(line) + ": " + what;
}

void strip_cr(std::string& line)
{
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

bool is_blank(std::string_view line)
{
    return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return in;
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path);
    }
    return out;
}

}  // namespace

std::string document_text(const Document& doc)
{
    if (doc.title && !doc.title->empty()) {
        return doc.body.empty() ? *doc.title : *doc.title + " " + doc.body;
    }
    return doc.body;
}

CollectionFormat guess_collection_format(std::string_view path)
{
    if (path.ends_with(".jsonl") || path.ends_with(".json")) {
        return CollectionFormat::jsonl;
    }
    return CollectionFormat::tsv_id_text;
}

CollectionFormat parse_collection_format(std::string_view name)
{
    if (name == "tsv") {
        return CollectionFormat::tsv_id_text;
    }
    if (name == "jsonl") {
        return CollectionFormat::jsonl;
    }
    throw Error("unknown collection format '" + std::string(name) + "' (expected tsv or jsonl)");
}

CollectionReader::CollectionReader(const std::string& path, CollectionFormat format)
    : path_(path), format_(format), in_(open_input(path))
{
}

Document CollectionReader::parse_line(std::string_view line) const
{
    Document doc;
    if (format_ == CollectionFormat::tsv_id_text) {
        auto tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw Error(located(path_, line_no_, "expected 'id<TAB>text', found 1 column"));
        }
        doc.external_id = std::string(line.substr(0, tab));
        doc.body = std::string(line.substr(tab + 1));
    } else {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(located(path_, line_no_, std::string("malformed JSON: ") + e.what()));
        }
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
            throw Error(located(path_, line_no_, "expected an object with a string 'id'"));
        }
        doc.external_id = j["id"].get<std::string>();
        if (j.contains("title") && !j["title"].is_null()) {
            if (!j["title"].is_string()) {
                throw Error(located(path_, line_no_, "'title' must be a string"));
            }
            doc.title = j["title"].get<std::string>();
        }
        if (j.contains("body") && !j["body"].is_null()) {
            if (!j["body"].is_string()) {
                throw Error(located(path_, line_no_, "'body' must be a string"));
            }
            doc.body = j["body"].get<std::string>();
        }
    }
    if (doc.external_id.empty()) {
        throw Error(located(path_, line_no_, "empty document id"));
    }
    if (doc.body.empty() && (!doc.title || doc.title->empty())) {
        throw Error(located(path_, line_no_, "document '" + doc.external_id + "' has neither title nor body"));
    }
    return doc;
}

std::optional<Document> CollectionReader::next()
{
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        strip_cr(line);
        if (is_blank(line)) {
            continue;
        }
        Document doc = parse_line(line);
        if (!seen_.insert(doc.external_id).second) {
            throw Error(located(path_, line_no_, "duplicate document id '" + doc.external_id + "'"));
        }
        return doc;
    }
    return std::nullopt;
}

DocumentStream stream_documents(const std::vector<Document>& docs)
{
    return [&docs, i = std::size_t{0}]() mutable -> std::optional<Document> {
        if (i == docs.size()) {
            return std::nullopt;
        }
        return docs[i++];
    };
}

DocumentStream stream_documents(CollectionReader& reader)
{
    return [&reader] { return reader.next(); };
}

std::vector<Document> load_collection(const std::string& path, CollectionFormat format)
{
    CollectionReader reader(path, format);
    std::vector<Document> docs;
    while (auto doc = reader.next()) {
        docs.push_back(std::move(*doc));
    }
    return docs;
}

void write_collection(std::ostream& out, const std::vector<Document>& docs, CollectionFormat format)
{
    for (const auto& doc : docs) {
        if (format == CollectionFormat::tsv_id_text) {
            if (doc.title) {
                throw Error("document '" + doc.external_id + "' has a title; TSV cannot carry titles");
            }
            if (doc.external_id.find_first_of("\t\n") != std::string::npos ||
                doc.body.find_first_of("\n\r") != std::string::npos) {
                throw Error("document '" + doc.external_id + "' cannot be represented as a TSV line");
            }
            out << doc.external_id << '\t' << doc.body << '\n';
        } else {
            nlohmann::ordered_json j;
            j["id"] = doc.external_id;
            if (doc.title) {
                j["title"] = *doc.title;
            }
            j["body"] = doc.body;
            out << j.dump() << '\n';
        }
    }
}

void write_collection(const std::string& path, const std::vector<Document>& docs, CollectionFormat format)
{
    auto out = open_output(path);
    write_collection(out, docs, format);
}

std::vector<Query> load_queries(const std::string& path, QueryKind kind)
{
    auto in = open_input(path);
    std::vector<Query> queries;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (is_blank(line)) {
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw Error(located(path, line_no, "expected 'query_id<TAB>text'"));
        }
        Query q{line.substr(0, tab), line.substr(tab + 1), kind};
        if (q.query_id.empty()) {
            throw Error(located(path, line_no, "empty query id"));
        }
        if (is_blank(q.text)) {
            throw Error(located(path, line_no, "query '" + q.query_id + "' has empty text"));
        }
        if (!seen.insert(q.query_id).second) {
            throw Error(located(path, line_no, "duplicate query id '" + q.query_id + "'"));
        }
        queries.push_back(std::move(q));
    }
    return queries;
}

void write_queries(const std::string& path, const std::vector<Query>& queries)
{
    auto out = open_output(path);
    for (const auto& q : queries) {
        out << q.query_id << '\t' << q.text << '\n';
    }
}

Qrels parse_qrels(std::istream& in, const std::string& source)
{
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (is_blank(line)) {
            continue;
        }
        std::istringstream fields(line);
        std::string qid, iteration, docid, grade_text, extra;
        if (!(fields >> qid >> iteration >> docid >> grade_text) || (fields >> extra)) {
            throw Error(located(source, line_no, "expected 'qid 0 docid grade'"));
        }
        int grade = 0;
        auto [ptr, ec] = std::from_chars(grade_text.data(), grade_text.data() + grade_text.size(), grade);
        if (ec != std::errc() || ptr != grade_text.data() + grade_text.size()) {
            throw Error(located(source, line_no, "grade '" + grade_text + "' is not an integer"));
        }
        if (grade < 0) {
            throw Error(located(source, line_no, "negative grade " + grade_text));
        }
        if (!qrels[qid].emplace(docid, grade).second) {
            throw Error(located(source, line_no, "duplicate judgment for (" + qid + ", " + docid + ")"));
        }
    }
    return qrels;
}

Qrels load_qrels(const std::string& path)
{
    auto in = open_input(path);
    return parse_qrels(in, path);
}

void write_qrels(const std::string& path, const Qrels& qrels)
{
    auto out = open_output(path);
    for (const auto& [qid, docs] : qrels) {
        for (const auto& [docid, grade] : docs) {
            out << qid << " 0 " << docid << ' ' << grade << '\n';
        }
    }
}

}  // namespace tw

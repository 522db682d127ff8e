#pragma once

#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace tw {

struct Document {
    std::string external_id;
    std::optional<std::string> title;
    std::string body;

    bool operator==(const Document&) const = default;
};

/// Text handed to the analyzer: title (when present) followed by body.
std::string document_text(const Document& doc);

enum class QueryKind { title, description, narrative, generic };

struct Query {
    std::string query_id;
    std::string text;
    QueryKind kind = QueryKind::generic;

    bool operator==(const Query&) const = default;
};

/// query_id -> external_id -> grade. Ordered maps keep every consumer
/// deterministic.
using Qrels = std::map<std::string, std::map<std::string, int>>;

enum class CollectionFormat { tsv_id_text, jsonl };

/// Picks jsonl for *.jsonl / *.json paths, tsv otherwise.
CollectionFormat guess_collection_format(std::string_view path);
CollectionFormat parse_collection_format(std::string_view name);

/// Streaming reader over a collection file. Single consumer; yields
/// documents in file order and rejects duplicate ids. Blank lines are not
/// data lines and are skipped.
class CollectionReader {
public:
    CollectionReader(const std::string& path, CollectionFormat format);

    std::optional<Document> next();
    std::size_t line_number() const { return line_no_; }

private:
    std::string path_;
    CollectionFormat format_;
    std::ifstream in_;
    std::size_t line_no_ = 0;
    std::unordered_set<std::string> seen_;

    Document parse_line(std::string_view line) const;
};

/// Pull-style document source: returns the next document or nullopt at
/// end of stream.
using DocumentStream = std::function<std::optional<Document>()>;

DocumentStream stream_documents(const std::vector<Document>& docs);
DocumentStream stream_documents(CollectionReader& reader);

std::vector<Document> load_collection(const std::string& path, CollectionFormat format);
void write_collection(std::ostream& out, const std::vector<Document>& docs, CollectionFormat format);
void write_collection(const std::string& path, const std::vector<Document>& docs, CollectionFormat format);

/// `query_id<TAB>text` per line.
std::vector<Query> load_queries(const std::string& path, QueryKind kind = QueryKind::generic);
void write_queries(const std::string& path, const std::vector<Query>& queries);

/// Whitespace-separated `qid 0 docid grade`.
Qrels load_qrels(const std::string& path);
Qrels parse_qrels(std::istream& in, const std::string& source);
void write_qrels(const std::string& path, const Qrels& qrels);

}  // namespace tw

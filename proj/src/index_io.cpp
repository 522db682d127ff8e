#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <zlib.h>

#include "tw/error.hpp"
#include "tw/index.hpp"
#include "tw/varint.hpp"

namespace tw {
namespace {

namespace fs = std::filesystem;

constexpr const char* kFormatName = "termweight-index";
constexpr const char* kDataFiles[] = {"docs.tsv", "lexicon.tsv", "meta.txt", "postings.bin"};

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& data)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size()))) {
        throw Error("cannot write " + path.string());
    }
}

std::string crc_hex(const std::string& data)
{
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
    return buf;
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<std::string>& words, char sep)
{
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) {
            out.push_back(sep);
        }
        out += words[i];
    }
    return out;
}

std::vector<std::string> split(std::string_view text, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto end = text.find(sep, start);
        out.emplace_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos) {
            return out;
        }
        start = end + 1;
    }
}

template <class T>
T parse_number(std::string_view text, const std::string& what)
{
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error("corrupt index: bad " + what + " '" + std::string(text) + "'");
    }
    return value;
}

bool parse_bool(const std::string& text, const std::string& key)
{
    if (text == "true") {
        return true;
    }
    if (text == "false") {
        return false;
    }
    throw Error("corrupt index: bad boolean for " + key);
}

std::string meta_text(const IndexMeta& meta)
{
    std::ostringstream out;
    out << "format=" << kFormatName << '\n'
        << "version=" << kIndexFormatVersion << '\n'
        << "doc_count=" << meta.doc_count << '\n'
        << "total_weight=" << meta.total_weight << '\n'
        << "avgdl=" << format_double(meta.avgdl) << '\n'
        << "weighted=" << (meta.weighted ? "true" : "false") << '\n'
        << "scale_n=" << meta.scale_n << '\n'
        << "positional=" << (meta.positional ? "true" : "false") << '\n'
        << "doc_length=sum_of_stored_weights\n"
        << "lowercase=" << (meta.analyzer.lowercase ? "true" : "false") << '\n'
        << "stemmer=" << to_string(meta.analyzer.stem) << '\n'
        << "stopwords=" << join(meta.analyzer.stopwords, ',') << '\n';
    return out.str();
}

std::map<std::string, std::string> parse_key_values(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error("corrupt index: meta line without '='");
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key)
{
    auto it = kv.find(key);
    if (it == kv.end()) {
        throw Error("corrupt index: meta.txt lacks '" + key + "'");
    }
    return it->second;
}

}  // namespace

void persist_index(const InvertedIndex& index, const std::string& dir)
{
    fs::create_directories(dir);
    const fs::path root(dir);

    std::string postings;
    std::ostringstream lexicon;
    for (std::size_t t = 0; t < index.lexicon().size(); ++t) {
        const auto& e = index.lexicon()[t];
        postings += index.encode_postings(t);
        lexicon << e.term << '\t' << e.df << '\t' << e.ctf << '\t' << e.postings_offset << '\t' << e.postings_len
                << '\n';
    }
    std::ostringstream docs;
    for (std::size_t d = 0; d < index.docs().size(); ++d) {
        docs << d << '\t' << index.docs()[d].external_id << '\t' << index.docs()[d].dl << '\n';
    }

    std::map<std::string, std::string> files = {
        {"docs.tsv", docs.str()},
        {"lexicon.tsv", lexicon.str()},
        {"meta.txt", meta_text(index.meta())},
        {"postings.bin", postings},
    };
    std::string checksums;
    for (const auto& [name, data] : files) {
        write_file(root / name, data);
        checksums += name + " " + crc_hex(data) + "\n";
    }
    write_file(root / "checksums.txt", checksums);
}

InvertedIndex load_index(const std::string& dir)
{
    const fs::path root(dir);
    if (!fs::is_directory(root)) {
        throw Error("index directory " + dir + " does not exist");
    }

    std::map<std::string, std::string> files;
    for (const char* name : kDataFiles) {
        files[name] = read_file(root / name);
    }

    auto kv = parse_key_values(files["meta.txt"]);
    if (require(kv, "format") != kFormatName) {
        throw Error("not a termweight index: " + dir);
    }
    if (require(kv, "version") != std::to_string(kIndexFormatVersion)) {
        throw Error("index version " + require(kv, "version") + " is not supported (expected " +
                    std::to_string(kIndexFormatVersion) + ")");
    }

    std::map<std::string, std::string> expected;
    {
        std::istringstream in(read_file(root / "checksums.txt"));
        std::string name, crc;
        while (in >> name >> crc) {
            expected[name] = crc;
        }
    }
    for (const auto& [name, data] : files) {
        auto it = expected.find(name);
        if (it == expected.end()) {
            throw Error("checksums.txt has no entry for " + name);
        }
        if (it->second != crc_hex(data)) {
            throw Error("checksum mismatch for " + name + " in " + dir);
        }
    }

    IndexMeta meta;
    meta.weighted = parse_bool(require(kv, "weighted"), "weighted");
    meta.scale_n = parse_number<std::uint32_t>(require(kv, "scale_n"), "scale_n");
    meta.positional = parse_bool(require(kv, "positional"), "positional");
    meta.analyzer.lowercase = parse_bool(require(kv, "lowercase"), "lowercase");
    meta.analyzer.stem = parse_stemmer(require(kv, "stemmer"));
    const auto& stop = require(kv, "stopwords");
    if (!stop.empty()) {
        meta.analyzer.stopwords = split(stop, ',');
    }

    std::vector<DocEntry> docs;
    {
        std::istringstream in(files["docs.tsv"]);
        std::string line;
        while (std::getline(in, line)) {
            auto cols = split(line, '\t');
            if (cols.size() != 3) {
                throw Error("corrupt index: docs.tsv line " + std::to_string(docs.size() + 1));
            }
            if (parse_number<std::uint64_t>(cols[0], "ordinal") != docs.size()) {
                throw Error("corrupt index: docs.tsv ordinals out of order");
            }
            docs.push_back({cols[1], parse_number<std::uint64_t>(cols[2], "document length")});
        }
    }

    const std::string& bytes = files["postings.bin"];
    std::vector<std::string> terms;
    std::vector<std::vector<Posting>> postings;
    std::vector<LexiconEntry> stored;
    {
        std::istringstream in(files["lexicon.tsv"]);
        std::string line;
        while (std::getline(in, line)) {
            auto cols = split(line, '\t');
            if (cols.size() != 5) {
                throw Error("corrupt index: lexicon.tsv line " + std::to_string(terms.size() + 1));
            }
            LexiconEntry e{cols[0], parse_number<std::uint32_t>(cols[1], "df"),
                           parse_number<std::uint64_t>(cols[2], "ctf"),
                           parse_number<std::uint64_t>(cols[3], "offset"),
                           parse_number<std::uint64_t>(cols[4], "length")};
            if (e.postings_offset + e.postings_len > bytes.size()) {
                throw Error("corrupt index: postings for '" + e.term + "' out of range");
            }
            std::span<const char> span(bytes.data() + e.postings_offset, e.postings_len);
            std::size_t pos = 0;
            std::vector<Posting> list;
            list.reserve(e.df);
            std::uint64_t doc = 0;
            for (std::uint32_t i = 0; i < e.df; ++i) {
                Posting p;
                doc += varint::decode(span, pos);
                if (doc >= docs.size() || (i > 0 && doc <= list.back().doc)) {
                    throw Error("corrupt index: bad document ordinal in postings of '" + e.term + "'");
                }
                p.doc = static_cast<DocOrdinal>(doc);
                p.weight = static_cast<std::uint32_t>(varint::decode(span, pos));
                if (meta.positional) {
                    auto count = varint::decode(span, pos);
                    std::uint64_t position = 0;
                    for (std::uint64_t k = 0; k < count; ++k) {
                        position += varint::decode(span, pos);
                        p.positions.push_back(static_cast<std::uint32_t>(position));
                    }
                }
                list.push_back(std::move(p));
            }
            if (pos != span.size()) {
                throw Error("corrupt index: trailing bytes in postings of '" + e.term + "'");
            }
            terms.push_back(e.term);
            postings.push_back(std::move(list));
            stored.push_back(std::move(e));
        }
    }

    InvertedIndex index =
        InvertedIndex::assemble(std::move(meta), std::move(docs), std::move(terms), std::move(postings));
    if (index.lexicon().size() != stored.size() ||
        !std::equal(stored.begin(), stored.end(), index.lexicon().begin())) {
        throw Error("corrupt index: lexicon statistics disagree with postings");
    }
    if (index.meta().doc_count != parse_number<std::uint64_t>(require(kv, "doc_count"), "doc_count") ||
        index.meta().total_weight != parse_number<std::uint64_t>(require(kv, "total_weight"), "total_weight")) {
        throw Error("corrupt index: collection statistics disagree with document table");
    }
    return index;
}

}  // namespace tw

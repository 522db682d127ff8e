#include "tw/weights_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <json.hpp>

#include "tw/error.hpp"

namespace tw {

std::string format_weight(double value)
{
    if (!std::isfinite(value)) {
        throw Error("cannot serialize non-finite weight");
    }
    if (value == 0.0) {
        return "0";
    }
    // %.8e yields exactly 9 significant digits, correctly rounded.
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", value);
    std::string text(buf);
    auto e = text.find('e');
    int exponent = std::atoi(text.c_str() + e + 1);
    bool negative = text[0] == '-';
    std::string digits;
    for (std::size_t i = negative ? 1 : 0; i < e; ++i) {
        if (text[i] != '.') {
            digits.push_back(text[i]);
        }
    }
    while (digits.size() > 1 && digits.back() == '0') {
        digits.pop_back();
    }
    std::string out = negative ? "-" : "";
    if (exponent >= -4 && exponent < 9) {
        if (exponent < 0) {
            out += "0.";
            out.append(static_cast<std::size_t>(-exponent - 1), '0');
            out += digits;
        } else {
            auto int_len = static_cast<std::size_t>(exponent) + 1;
            if (digits.size() <= int_len) {
                out += digits;
                out.append(int_len - digits.size(), '0');
            } else {
                out += digits.substr(0, int_len);
                out += '.';
                out += digits.substr(int_len);
            }
        }
        return out;
    }
    out += digits.substr(0, 1);
    if (digits.size() > 1) {
        out += '.';
        out += digits.substr(1);
    }
    out += 'e';
    out += std::to_string(exponent);
    return out;
}

void write_weight_record(std::ostream& out, const WeightRecord& record)
{
    if (record.owner_id.empty()) {
        throw Error("weight record with empty id");
    }
    out << "{\"id\":" << nlohmann::json(record.owner_id).dump() << ",\"weights\":{";
    bool first = true;
    for (const auto& [term, value] : record.weights) {
        if (!first) {
            out << ',';
        }
        first = false;
        out << nlohmann::json(term).dump() << ':' << format_weight(value);
    }
    out << "}}\n";
}

void write_weights(const std::string& path, const std::vector<WeightRecord>& records)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path);
    }
    for (const auto& record : records) {
        write_weight_record(out, record);
    }
}

WeightReader::WeightReader(const std::string& path) : path_(path), in_(path, std::ios::binary)
{
    if (!in_) {
        throw Error("cannot open " + path);
    }
}

std::optional<WeightRecord> WeightReader::next()
{
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        auto where = path_ + ":" + std::to_string(line_no_) + ": ";
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(where + "malformed JSON: " + e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("weights") ||
            !j["weights"].is_object()) {
            throw Error(where + "expected {\"id\": string, \"weights\": object}");
        }
        WeightRecord record;
        record.owner_id = j["id"].get<std::string>();
        if (record.owner_id.empty()) {
            throw Error(where + "empty id");
        }
        for (const auto& [term, value] : j["weights"].items()) {
            if (!value.is_number()) {
                throw Error(where + "weight for '" + term + "' is not a number");
            }
            record.weights[term] = value.get<double>();
        }
        if (!seen_.insert(record.owner_id).second) {
            throw Error(where + "duplicate id '" + record.owner_id + "'");
        }
        return record;
    }
    return std::nullopt;
}

std::vector<WeightRecord> read_weights(const std::string& path)
{
    WeightReader reader(path);
    std::vector<WeightRecord> records;
    while (auto record = reader.next()) {
        records.push_back(std::move(*record));
    }
    return records;
}

WeightMap to_weight_map(std::vector<WeightRecord> records)
{
    WeightMap map;
    map.reserve(records.size());
    for (auto& record : records) {
        std::string id = record.owner_id;
        if (!map.try_emplace(id, std::move(record)).second) {
            throw Error("duplicate weight record id '" + id + "'");
        }
    }
    return map;
}

WeightMap read_weight_map(const std::string& path)
{
    return to_weight_map(read_weights(path));
}

}  // namespace tw

#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace tw {

/// Real-valued term weights for one document or query. Values are stored
/// as read; negative weights are discarded by consumers, not here.
struct WeightRecord {
    std::string owner_id;
    std::map<std::string, double> weights;

    bool operator==(const WeightRecord&) const = default;
};

/// Decimal with 9 significant digits. Plain notation for |x| in
/// [1e-4, 1e9), exponent notation otherwise; trailing zeros trimmed.
std::string format_weight(double value);

/// One JSON object per line: {"id": ..., "weights": {term: number, ...}}.
/// Terms are written in sorted order.
void write_weight_record(std::ostream& out, const WeightRecord& record);
void write_weights(const std::string& path, const std::vector<WeightRecord>& records);

class WeightReader {
public:
    explicit WeightReader(const std::string& path);

    std::optional<WeightRecord> next();

private:
    std::string path_;
    std::ifstream in_;
    std::size_t line_no_ = 0;
    std::unordered_set<std::string> seen_;
};

std::vector<WeightRecord> read_weights(const std::string& path);

using WeightMap = std::unordered_map<std::string, WeightRecord>;
WeightMap read_weight_map(const std::string& path);
WeightMap to_weight_map(std::vector<WeightRecord> records);

}  // namespace tw

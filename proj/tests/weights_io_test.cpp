#include <cmath>
#include <cstdlib>
#include <random>

#include <gtest/gtest.h>

#include "temp_dir.hpp"
#include "tw/weights_io.hpp"

namespace tw {
namespace {

using testing::TempDir;

TEST(WeightFormat, NineSignificantDigits)
{
    EXPECT_EQ(format_weight(0.83), "0.83");
    EXPECT_EQ(format_weight(-0.2), "-0.2");
    EXPECT_EQ(format_weight(1.0), "1");
    EXPECT_EQ(format_weight(0.0), "0");
    EXPECT_EQ(format_weight(1.0 / 3.0), "0.333333333");
    EXPECT_EQ(format_weight(123456789.4), "123456789");
    EXPECT_EQ(format_weight(0.0001), "0.0001");
}

TEST(WeightFormat, ExponentOnlyOutsidePlainRange)
{
    EXPECT_EQ(format_weight(0.00001234), "1.234e-5");
    EXPECT_EQ(format_weight(2e9), "2e9");
    EXPECT_THROW(format_weight(std::nan("")), std::exception);
    EXPECT_THROW(format_weight(INFINITY), std::exception);
}

TEST(WeightFile, RoundTripsRecords)
{
    TempDir dir;
    std::vector<WeightRecord> records{
        {"d1", {{"stomach", 0.83}}},
        {"d2", {{"neg", -0.2}, {"zero", 0.0}}},
        {"d3", {}},
    };
    write_weights(dir.file("w.jsonl"), records);
    EXPECT_EQ(read_weights(dir.file("w.jsonl")), records);
    EXPECT_EQ(testing::read_file(dir.file("w.jsonl")).substr(0, 39), "{\"id\":\"d1\",\"weights\":{\"stomach\":0.83}}\n");
}

TEST(WeightFile, ValuesSurviveAtNineDigits)
{
    TempDir dir;
    std::mt19937_64 rng(5);
    std::vector<WeightRecord> records;
    for (int i = 0; i < 200; ++i) {
        double mantissa = static_cast<double>(rng() % 2000000) / 1000000.0 - 1.0;
        double v = mantissa * std::pow(10.0, static_cast<double>(rng() % 12) - 6.0);
        records.push_back({"o" + std::to_string(i), {{"t", v}}});
    }
    write_weights(dir.file("w.jsonl"), records);
    auto back = read_weights(dir.file("w.jsonl"));
    ASSERT_EQ(back.size(), records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        double a = records[i].weights.at("t");
        double b = back[i].weights.at("t");
        EXPECT_LE(std::abs(a - b), std::abs(a) * 1e-8) << a;
        EXPECT_EQ(format_weight(a), format_weight(b));
    }
}

TEST(WeightFile, MalformedLineNamesLineNumber)
{
    TempDir dir;
    auto path = dir.write("w.jsonl", "{\"id\":\"d1\",\"weights\":{}}\n{\"id\":\"d2\",\"weights\":[1]}\n");
    try {
        read_weights(path);
        FAIL() << "expected an error";
    } catch (const std::exception& e) {
        EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
    }
}

TEST(WeightFile, DuplicateOwnerIsError)
{
    TempDir dir;
    auto path = dir.write("w.jsonl", "{\"id\":\"d1\",\"weights\":{}}\n{\"id\":\"d1\",\"weights\":{}}\n");
    EXPECT_THROW(read_weights(path), std::exception);
}

TEST(WeightFile, EmptyOwnerIsError)
{
    TempDir dir;
    EXPECT_THROW(read_weights(dir.write("w.jsonl", "{\"id\":\"\",\"weights\":{}}\n")), std::exception);
}

TEST(WeightFile, MapIndexesById)
{
    auto map = to_weight_map({{"a", {{"x", 1.0}}}, {"b", {}}});
    EXPECT_EQ(map.size(), 2u);
    EXPECT_DOUBLE_EQ(map.at("a").weights.at("x"), 1.0);
}

}  // namespace
}  // namespace tw

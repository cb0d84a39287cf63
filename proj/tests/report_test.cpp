// Deterministic report serialization: sorted keys, fixed float formatting,
// string escaping, and CSV quoting.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <string>

#include "folicheck/report.hpp"

using namespace folicheck;

TEST(Serialization, KeysComeOutSortedRegardlessOfInsertionOrder) {
    JsonObject o;
    o["zeta"] = 1;
    o["alpha"] = 2;
    o["mid"] = 3;
    EXPECT_EQ(JsonValue(o).dump(), "{\"alpha\":2,\"mid\":3,\"zeta\":1}\n");

    JsonObject reordered;
    reordered["mid"] = 3;
    reordered["zeta"] = 1;
    reordered["alpha"] = 2;
    EXPECT_EQ(JsonValue(o).dump(), JsonValue(reordered).dump());
}

TEST(Serialization, ScalarForms) {
    EXPECT_EQ(JsonValue().dump(), "null\n");
    EXPECT_EQ(JsonValue(nullptr).dump(), "null\n");
    EXPECT_EQ(JsonValue(true).dump(), "true\n");
    EXPECT_EQ(JsonValue(false).dump(), "false\n");
    EXPECT_EQ(JsonValue(-17).dump(), "-17\n");
    EXPECT_EQ(JsonValue(std::size_t{7}).dump(), "7\n");
    EXPECT_EQ(JsonValue("plain").dump(), "\"plain\"\n");
}

TEST(Serialization, NestedStructureHasNoWhitespace) {
    JsonObject inner;
    inner["b"] = JsonArray{JsonValue(1), JsonValue(true), JsonValue(nullptr)};
    JsonObject o;
    o["a"] = inner;
    o["c"] = JsonArray{};
    EXPECT_EQ(JsonValue(o).dump(), "{\"a\":{\"b\":[1,true,null]},\"c\":[]}\n");
}

TEST(Serialization, DumpAppendsExactlyOneNewline) {
    std::string raw;
    JsonValue(42).dump(raw);
    EXPECT_EQ(raw, "42");           // the streaming overload adds nothing
    EXPECT_EQ(JsonValue(42).dump(), "42\n");
}

TEST(Doubles, TwelveSignificantDigits) {
    EXPECT_EQ(JsonValue::format_double(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(JsonValue::format_double(3.0), "3");
    EXPECT_EQ(JsonValue::format_double(0.05), "0.05");
    EXPECT_EQ(JsonValue::format_double(0.1 + 0.2), "0.3");
    EXPECT_EQ(JsonValue::format_double(1e-9), "1e-09");
    EXPECT_EQ(JsonValue::format_double(123456789012345.0), "1.23456789012e+14");
    EXPECT_EQ(JsonValue::format_double(-2.015082876), "-2.015082876");
}

TEST(Doubles, NegativeZeroCollapsesToZero) {
    EXPECT_EQ(JsonValue::format_double(-0.0), "0");
    double computed = -1.0 * 0.0;
    ASSERT_TRUE(std::signbit(computed));
    EXPECT_EQ(JsonValue(computed).dump(), "0\n");
}

TEST(Doubles, NonFiniteValuesRejected) {
    EXPECT_THROW(JsonValue::format_double(std::numeric_limits<double>::quiet_NaN()), DomainError);
    EXPECT_THROW(JsonValue::format_double(std::numeric_limits<double>::infinity()), DomainError);
    EXPECT_THROW(JsonValue::format_double(-std::numeric_limits<double>::infinity()), DomainError);
    JsonObject o;
    o["bad"] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(JsonValue(o).dump(), DomainError);
}

TEST(Strings, QuotesBackslashesAndControlsEscaped) {
    EXPECT_EQ(JsonValue("a\"b").dump(), "\"a\\\"b\"\n");
    EXPECT_EQ(JsonValue("a\\b").dump(), "\"a\\\\b\"\n");
    EXPECT_EQ(JsonValue("line\nbreak\tand\rreturn").dump(), "\"line\\nbreak\\tand\\rreturn\"\n");
    EXPECT_EQ(JsonValue(std::string("nul\x01mid")).dump(), "\"nul\\u0001mid\"\n");
}

TEST(Strings, HighBytesPassThroughUntouched) {
    std::string utf8 = "caf\xc3\xa9";
    EXPECT_EQ(JsonValue(utf8).dump(), "\"" + utf8 + "\"\n");
}

TEST(Determinism, EqualContentGivesEqualBytes) {
    auto build = [](bool reorder) {
        JsonObject o;
        JsonArray zeros;
        JsonObject z0;
        if (reorder) {
            z0["t"] = 0.253520827385;
            z0["det_derivative"] = -2.01508287633;
        } else {
            z0["det_derivative"] = -2.01508287633;
            z0["t"] = 0.253520827385;
        }
        zeros.push_back(z0);
        o["locus"] = zeros;
        o["pass"] = true;
        o["eps"] = 0.05;
        return JsonValue(o).dump();
    };
    EXPECT_EQ(build(false), build(true));
}

TEST(Csv, QuotesOnlyWhereRequired) {
    EXPECT_EQ(csv_row({"a", "b", "c"}), "a,b,c\n");
    EXPECT_EQ(csv_row({"x,y"}), "\"x,y\"\n");
    EXPECT_EQ(csv_row({"he said \"hi\""}), "\"he said \"\"hi\"\"\"\n");
    EXPECT_EQ(csv_row({"line\nbreak"}), "\"line\nbreak\"\n");
    EXPECT_EQ(csv_row({"", "b", ""}), ",b,\n");
    EXPECT_EQ(csv_row({}), "\n");
}

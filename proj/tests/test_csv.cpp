#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <algorithm>
#include <cstdint>
#include <cstring>

#include "piezobeam/csv.hpp"
#include "piezobeam/errors.hpp"
#include "piezobeam/svg.hpp"

namespace piezobeam {
namespace {

TEST(CsvNumber, SeventeenSignificantDigits) {
    EXPECT_EQ(format_csv_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_csv_number(1.0), "1");
    EXPECT_EQ(format_csv_number(1.0 / 3.0), "0.33333333333333331");
    EXPECT_EQ(format_csv_number(-2.5e-300), "-2.5e-300");
    EXPECT_EQ(format_csv_number(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(format_csv_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Csv, RoundTripIsLossless) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> bits;
    CsvTable t;
    t.comments = {"config_hash: 0123", "note"};
    t.header = {"a", "b", "label"};
    for (int i = 0; i < 500; ++i) {
        double x = 0.0;
        do {
            const std::uint64_t b = bits(rng);
            std::memcpy(&x, &b, sizeof x);
        } while (!std::isfinite(x));
        t.rows.push_back({x, static_cast<double>(i) * 1e-3, std::string(i % 2 ? "bending" : "rigid")});
    }
    t.rows.push_back({-0.0, std::numeric_limits<double>::denorm_min(), std::string("x")});
    const CsvTable back = read_csv(write_csv(t));
    ASSERT_EQ(back.rows.size(), t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const double a = std::get<double>(t.rows[i][j]), b = std::get<double>(back.rows[i][j]);
            EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0) << i << "," << j;
        }
    }
    EXPECT_EQ(back, t);
}

TEST(Csv, NonFiniteValuesRoundTrip) {
    CsvTable t;
    t.header = {"x"};
    t.rows = {{std::numeric_limits<double>::infinity()}, {-std::numeric_limits<double>::infinity()}};
    EXPECT_EQ(read_csv(write_csv(t)), t);
    t.rows = {{std::numeric_limits<double>::quiet_NaN()}};
    EXPECT_TRUE(std::isnan(read_csv(write_csv(t)).column("x")[0]));
}

TEST(Csv, ColumnLookup) {
    const CsvTable t = read_csv("t,v\n0,1\n0.5,2\n");
    EXPECT_EQ(t.column("v"), (std::vector<double>{1.0, 2.0}));
    EXPECT_THROW(t.column("w"), Error);
}

TEST(Csv, MalformedInput) {
    EXPECT_THROW(read_csv(""), Error);
    EXPECT_THROW(read_csv("a,b\n1\n"), Error);
    EXPECT_THROW(read_csv("a\n1\n# late comment\n"), Error);
}

TEST(Svg, DeterministicAndWellFormed) {
    PlotSpec spec{"Title <1>", "x", "y"};
    const std::vector<PlotSeries> s{{"one", {0.0, 1.0, 2.0}, {0.0, 1.0, 4.0}}, {"two", {0.0, 2.0}, {1.0, -1.0}}};
    const std::string a = render_svg(spec, s);
    EXPECT_EQ(a, render_svg(spec, s));
    EXPECT_EQ(a.rfind("<svg", 0), 0u);
    EXPECT_NE(a.find("</svg>"), std::string::npos);
    EXPECT_NE(a.find("Title &lt;1&gt;"), std::string::npos);
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n') > 10, true);
    std::size_t polylines = 0;
    for (std::size_t p = a.find("<polyline"); p != std::string::npos; p = a.find("<polyline", p + 1)) ++polylines;
    EXPECT_EQ(polylines, 2u);
}

TEST(Svg, LogAxesSkipNonPositivePoints) {
    PlotSpec spec{"limit", "mu", "d", true, true};
    const std::string out = render_svg(spec, {{"d", {1e-2, 1e-4, 1e-6}, {1e-3, 0.0, 1e-7}}});
    const auto p = out.find("points=\"");
    const auto q = out.find('"', p + 8);
    const std::string points = out.substr(p + 8, q - p - 8);
    EXPECT_EQ(std::count(points.begin(), points.end(), ','), 2);
}

}  // namespace
}  // namespace piezobeam

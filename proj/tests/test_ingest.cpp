#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>

#include "generators.hpp"
#include "melodify/error.hpp"
#include "melodify/ingest.hpp"

using namespace melodify;
using namespace melodify::ingest;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::Io;
}

Dataset csv(std::string_view text) { return parse_table(text, TableFormat::Csv); }

}  // namespace

TEST(ParseTable, CsvExamples) {
    auto d = csv("cat,val\nA,3\nB,5");
    EXPECT_EQ(d.row_count, 2u);
    ASSERT_EQ(d.columns.size(), 2u);
    EXPECT_EQ(d.columns[0].kind, ColumnKind::Categorical);
    EXPECT_EQ(d.columns[1].kind, ColumnKind::Quantitative);
    EXPECT_EQ(d.columns[1].numbers, (std::vector<double>{3, 5}));

    EXPECT_EQ(csv("v\n1\nx\n3").columns[0].kind, ColumnKind::Categorical);
    EXPECT_EQ(code_of([] { csv("v\n"); }), ErrorCode::EmptyDataset);
}

TEST(ParseTable, CsvQuotingAndLineEndings) {
    auto d = csv("\xEF\xBB\xBFname,score\r\n\"Smith, J\",1.5e2\r\n\"say \"\"hi\"\"\", -3\r\n\r\n");
    ASSERT_EQ(d.row_count, 2u);
    EXPECT_EQ(d.columns[0].labels[0], "Smith, J");
    EXPECT_EQ(d.columns[0].labels[1], "say \"hi\"");
    EXPECT_EQ(d.columns[1].numbers, (std::vector<double>{150, -3}));
}

TEST(ParseTable, CsvErrors) {
    EXPECT_EQ(code_of([] { csv("a,b\n1\n"); }), ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] { csv("a\n\"open\n"); }), ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] { csv("a,a\n1,2\n"); }), ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] { csv("a\n\xFF\n"); }), ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] { csv(""); }), ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] { csv("a,b\n,1\nx,2\n"); }), ErrorCode::MalformedInput);
}

TEST(ParseTable, NonFiniteIsCategorical) {
    EXPECT_EQ(csv("v\n1\ninf\n").columns[0].kind, ColumnKind::Categorical);
    EXPECT_EQ(csv("v\n1\nnan\n").columns[0].kind, ColumnKind::Categorical);
}

TEST(ParseTable, JsonRows) {
    auto d = parse_table(R"([{"cat":"A","val":3},{"cat":"B","val":"5"}])", TableFormat::Json);
    EXPECT_EQ(d.row_count, 2u);
    EXPECT_EQ(d.columns[0].name, "cat");
    EXPECT_EQ(d.columns[1].kind, ColumnKind::Quantitative);
    EXPECT_EQ(d.columns[1].numbers, (std::vector<double>{3, 5}));
    EXPECT_EQ(code_of([] { parse_table("[]", TableFormat::Json); }), ErrorCode::EmptyDataset);
    EXPECT_EQ(code_of([] { parse_table("{", TableFormat::Json); }), ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] { parse_table(R"([{"a":1},{"b":2}])", TableFormat::Json); }),
              ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] { parse_table(R"([{"a":[1]}])", TableFormat::Json); }),
              ErrorCode::MalformedInput);
}

TEST(ParseTable, Deterministic) {
    const std::string text = "x,y\n1,2\n3,4\n";
    auto a = csv(text);
    auto b = csv(text);
    EXPECT_EQ(a.columns[1].numbers, b.columns[1].numbers);
}

TEST(ParseTable, DecimalRoundTrip) {
    gen::Rng rng(31);
    std::string text = "v\n";
    std::vector<double> values;
    for (int i = 0; i < 500; ++i) {
        const double v = gen::uniform(rng, -1e6, 1e6) * std::pow(10.0, gen::uniform_int(rng, -8, 8));
        values.push_back(v);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        text += buf;
    }
    const auto d = csv(text);
    for (std::size_t i = 0; i < values.size(); ++i) {
        EXPECT_LE(std::abs(d.columns[0].numbers[i] - values[i]), 1e-12 * std::abs(values[i]));
    }
}

TEST(ParseSpec, Examples) {
    auto s = parse_spec(R"({"idiom":"line","palette":"positive","y":"value"})");
    EXPECT_EQ(s.idiom, Idiom::Line);
    EXPECT_EQ(s.palette, Palette::Positive);
    EXPECT_EQ(s.key_root, 0);
    EXPECT_FALSE(s.x_field);
    EXPECT_FALSE(s.tempo_bpm);
    EXPECT_FALSE(s.time_signature);

    EXPECT_EQ(code_of([] { parse_spec(R"({"idiom":"disco","palette":"positive","y":"v"})"); }),
              ErrorCode::UnknownIdiom);

    auto pie = parse_spec(R"({"idiom":"pie","palette":"positive","x":"cat","y":"val","loop":3})");
    EXPECT_EQ(pie.loop_count, 3);
    EXPECT_EQ(pie.x_field, "cat");
}

TEST(ParseSpec, FullSpecCaseInsensitive) {
    auto s = parse_spec(
        R"({"idiom":"SCATTER","palette":"Calm","key":"f#","x":"t","y":"v","tempo":90,"time_signature":"6/8","histogram":false})");
    EXPECT_EQ(s.idiom, Idiom::Scatter);
    EXPECT_EQ(s.palette, Palette::Calm);
    EXPECT_EQ(s.key_root, 6);
    EXPECT_EQ(s.tempo_bpm, 90);
    ASSERT_TRUE(s.time_signature);
    EXPECT_EQ(s.time_signature->numerator, 6);
    EXPECT_EQ(s.time_signature->denominator, 8);
}

TEST(ParseSpec, Errors) {
    EXPECT_EQ(code_of([] { parse_spec(R"({"idiom":"bar","palette":"mauve","y":"v"})"); }),
              ErrorCode::UnknownPalette);
    EXPECT_EQ(code_of([] { parse_spec(R"({"idiom":"bar","palette":"positive"})"); }),
              ErrorCode::MissingField);
    EXPECT_EQ(code_of([] { parse_spec(R"({"idiom":"bar","y":"v"})"); }), ErrorCode::MissingField);
    EXPECT_EQ(code_of([] { parse_spec(R"({"idiom":"bar","palette":"positive","y":"v","tempo":19})"); }),
              ErrorCode::InvalidValue);
    EXPECT_EQ(code_of([] { parse_spec(R"({"idiom":"bar","palette":"positive","y":"v","tempo":301})"); }),
              ErrorCode::InvalidValue);
    EXPECT_EQ(code_of([] { parse_spec(R"({"idiom":"bar","palette":"positive","y":"v","time_signature":"3/5"})"); }),
              ErrorCode::InvalidValue);
    EXPECT_EQ(code_of([] { parse_spec(R"({"idiom":"bar","palette":"positive","y":"v","key":"H"})"); }),
              ErrorCode::InvalidValue);
    EXPECT_EQ(code_of([] { parse_spec(R"({"idiom":"bar","palette":"positive","y":"v","colour":1})"); }),
              ErrorCode::InvalidValue);
    EXPECT_EQ(code_of([] { parse_spec("[1]"); }), ErrorCode::MalformedInput);
    EXPECT_EQ(code_of([] { parse_spec("not json"); }), ErrorCode::MalformedInput);
    EXPECT_EQ(parse_spec(R"({"idiom":"bar","palette":"positive","y":"v","tempo":20})").tempo_bpm, 20);
    EXPECT_EQ(parse_spec(R"({"idiom":"bar","palette":"positive","y":"v","tempo":300})").tempo_bpm, 300);
}

TEST(ValidateBinding, Examples) {
    auto bar = gen::spec(Idiom::Bar, Palette::Positive);
    EXPECT_NO_THROW(validate_binding(gen::categories({1, 2}), bar));

    auto pie = gen::spec(Idiom::Pie, Palette::Positive);
    EXPECT_EQ(code_of([&] { validate_binding(gen::categories({3, -1}), pie); }),
              ErrorCode::NegativeProportion);
    EXPECT_EQ(code_of([&] { validate_binding(gen::categories({0, 0}), pie); }), ErrorCode::AllZero);

    auto scatter = gen::spec(Idiom::Scatter, Palette::Positive);
    scatter.x_field.reset();
    scatter.y_field = "cat";
    EXPECT_EQ(code_of([&] { validate_binding(gen::categories({1, 2}), scatter); }),
              ErrorCode::KindMismatch);
}

TEST(ValidateBinding, KindAndColumnErrors) {
    auto bar = gen::spec(Idiom::Bar, Palette::Positive);
    bar.x_field = "x";
    bar.y_field = "y";
    EXPECT_EQ(code_of([&] { validate_binding(gen::indexed({1, 2}), bar); }), ErrorCode::KindMismatch);
    bar.histogram = true;
    EXPECT_NO_THROW(validate_binding(gen::indexed({1, 2}), bar));

    auto line = gen::spec(Idiom::Line, Palette::Positive);
    line.y_field = "missing";
    EXPECT_EQ(code_of([&] { validate_binding(gen::indexed({1, 2}), line); }), ErrorCode::UnknownColumn);

    auto pie = gen::spec(Idiom::Pie, Palette::Positive);
    pie.x_field.reset();
    EXPECT_EQ(code_of([&] { validate_binding(gen::categories({1, 2}), pie); }), ErrorCode::MissingField);
}

TEST(ValidateBinding, DoesNotMutate) {
    const auto d = gen::categories({5, 1, 3});
    const auto before = d.columns[1].numbers;
    validate_binding(d, gen::spec(Idiom::Bar, Palette::Positive));
    EXPECT_EQ(d.columns[1].numbers, before);
}

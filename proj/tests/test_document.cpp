#include <gtest/gtest.h>

#include "floerq/cli.hpp"
#include "oracles.hpp"

using namespace floerq;

namespace {

Document synthetic()
{
    Document doc = cli::torus_document(2);
    FloerData shifted(1, 0, 0, {{"q0", 0}, {"q1", 1}, {"q2", 1}, {"q3", 2}});
    doc.data2 = shifted;
    doc.name = "synthetic";
    doc.notes.push_back("relabelled copy in data2");

    CountTable cross;
    cross.key = {0, 1, 1};
    cross.label = "to_copy";
    cross.minus_data = "data";
    cross.plus_data = "data2";
    const char* names[] = {"p00", "p10", "p01", "p11"};
    const char* copies[] = {"q0", "q1", "q2", "q3"};
    for (int k = 0; k < 4; ++k)
        cross.set({names[k]}, {copies[k]}, 1);
    doc.tables.push_back(cross);

    CountTable id = identity_table(doc.data);
    id.label = "identity";
    doc.tables.push_back(id);
    doc.tables.push_back(zero_homotopy("identity", "identity", "flat"));
    doc.tables.back().key = {0, 1, 1};

    doc.gluings.push_back({"diamond", "theta_0_1_2", "theta_0_1_0", "identity", 2, 1});
    return doc;
}

std::string with_field(const std::string& text, const std::string& anchor, const std::string& insert)
{
    std::string out = text;
    auto pos = out.find(anchor);
    EXPECT_NE(pos, std::string::npos);
    out.insert(pos, insert);
    return out;
}

ErrorKind parse_kind(const std::string& text, bool strict)
{
    try {
        parse_document(text, strict);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::validation;
}

const std::string tiny = R"({
  "version": "floerq/1",
  "data": {"n": 1, "N0": 0, "N1": 0,
           "orbits": [{"name": "a", "mu": 1}, {"name": "b", "mu": 0}],
           "m1": [{"from": "a", "to": "b", "count": 2}]},
  "tables": []
})";

} // namespace

TEST(Document, TorusRoundTrip)
{
    for (int d : {2, 4}) {
        Document doc = cli::torus_document(d);
        std::string text = serialize(doc);
        Document back = parse_document(text, true);
        EXPECT_EQ(back, doc);
        EXPECT_EQ(serialize(back), text);
    }
}

TEST(Document, SyntheticRoundTripAndValidation)
{
    Document doc = synthetic();
    std::string text = serialize(doc);
    Document back = parse_document(text, true);
    EXPECT_EQ(back, doc);
    ASSERT_TRUE(back.data2.has_value());
    const CountTable* cross = back.find_table("to_copy");
    ASSERT_NE(cross, nullptr);
    EXPECT_EQ(cross->plus_data, "data2");
    EXPECT_EQ(back.find_table("flat")->faces.size(), 2u);
    EXPECT_EQ(back.gluings.size(), 1u);

    auto result = cli::validate_document(back, true);
    for (const auto& line : result.lines)
        EXPECT_TRUE(line.passed) << line.name;
    EXPECT_EQ(result.exit, 0);
}

TEST(Document, FileRoundTrip)
{
    Document doc = synthetic();
    std::string path = ::testing::TempDir() + "floerq_doc.json";
    save_document(doc, path);
    EXPECT_EQ(load_document(path, true), doc);
    EXPECT_THROW(load_document(path + ".missing"), Error);
}

TEST(Document, MinimalDocumentParses)
{
    Document doc = parse_document(tiny, true);
    EXPECT_EQ(doc.data.orbits().size(), 2u);
    EXPECT_EQ(doc.data.m1("a", "b"), 2);
    EXPECT_TRUE(doc.tables.empty());
}

TEST(Document, UnknownFieldsOnlyRejectedWhenStrict)
{
    std::string extra = with_field(tiny, "\"tables\"", "\"colour\": 3,\n  ");
    EXPECT_NO_THROW(parse_document(extra, false));
    EXPECT_EQ(parse_kind(extra, true), ErrorKind::parse);
    std::string orbit_extra = with_field(tiny, "\"mu\": 1", "\"spin\": 0, ");
    EXPECT_NO_THROW(parse_document(orbit_extra, false));
    EXPECT_EQ(parse_kind(orbit_extra, true), ErrorKind::parse);
}

TEST(Document, MalformedInputs)
{
    EXPECT_EQ(parse_kind("{ not json", false), ErrorKind::parse);
    EXPECT_EQ(parse_kind("[]", false), ErrorKind::parse);
    std::string fractional = tiny;
    fractional.replace(fractional.find("\"count\": 2"), 10, "\"count\": 2.5");
    EXPECT_EQ(parse_kind(fractional, false), ErrorKind::parse);
    std::string foreign = tiny;
    foreign.replace(foreign.find("floerq/1"), 8, "floerq/9");
    EXPECT_EQ(parse_kind(foreign, false), ErrorKind::parse);
    std::string no_data = R"({"version": "floerq/1"})";
    EXPECT_EQ(parse_kind(no_data, false), ErrorKind::parse);
}

TEST(Document, DuplicateLabelsAndEntries)
{
    const std::string table = R"({"g": 0, "kminus": 1, "kplus": 0, "q": 0, "label": "u",
                                  "entries": [{"minus": ["b"], "plus": [], "count": 1}]})";
    std::string twice = tiny;
    twice.replace(twice.find("\"tables\": []"), 12, "\"tables\": [" + table + ", " + table + "]");
    EXPECT_EQ(parse_kind(twice, false), ErrorKind::parse);

    const std::string repeated = R"({"g": 0, "kminus": 1, "kplus": 0, "q": 0, "label": "u",
        "entries": [{"minus": ["b"], "plus": [], "count": 1}, {"minus": ["b"], "plus": [], "count": 1}]})";
    std::string dup = tiny;
    dup.replace(dup.find("\"tables\": []"), 12, "\"tables\": [" + repeated + "]");
    EXPECT_EQ(parse_kind(dup, false), ErrorKind::parse);
}

TEST(Document, ZeroCountsAreDropped)
{
    const std::string table = R"({"g": 0, "kminus": 1, "kplus": 0, "q": 0, "label": "u",
                                  "entries": [{"minus": ["b"], "plus": [], "count": 0}]})";
    std::string text = tiny;
    text.replace(text.find("\"tables\": []"), 12, "\"tables\": [" + table + "]");
    Document doc = parse_document(text, true);
    ASSERT_EQ(doc.tables.size(), 1u);
    EXPECT_TRUE(doc.tables[0].entries.empty());
}

TEST(Document, GluingDeclarations)
{
    const std::string bad_kind = R"(, "gluings": [{"kind": "twist", "first": "a", "result": "b", "i": 1, "j": 1}])";
    std::string text = tiny;
    text.insert(text.rfind('}'), bad_kind);
    EXPECT_EQ(parse_kind(text, false), ErrorKind::parse);
    const std::string zero_index = R"(, "gluings": [{"kind": "box", "first": "a", "result": "b", "i": 0, "j": 1}])";
    text = tiny;
    text.insert(text.rfind('}'), zero_index);
    EXPECT_EQ(parse_kind(text, false), ErrorKind::parse);
}

TEST(Document, DataLookup)
{
    Document doc = parse_document(tiny);
    EXPECT_NO_THROW(doc.data_named("data"));
    EXPECT_THROW(doc.data_named("data2"), Error);
    EXPECT_EQ(doc.find_table("nothing"), nullptr);
}

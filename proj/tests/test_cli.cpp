#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "floerq/floerq.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Outcome {
    int exit = -1;
    std::string out;
};

const fs::path& workdir()
{
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / ("floerq_cli_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

Outcome run(const std::string& args)
{
    std::string cmd = std::string(FLOERQ_CLI_PATH) + " " + args + " 2>&1";
    Outcome r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, n);
    int status = ::pclose(pipe);
    r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string path_of(const std::string& name) { return (workdir() / name).string(); }

ordered_json torus_json()
{
    static const ordered_json j = [] {
        Outcome r = run("gen-torus --dim 2");
        return ordered_json::parse(r.out);
    }();
    return j;
}

std::string write_json(const std::string& name, const ordered_json& j)
{
    std::string p = path_of(name);
    std::ofstream(p) << j.dump(1);
    return p;
}

std::string write_text(const std::string& name, const std::string& text)
{
    std::string p = path_of(name);
    std::ofstream(p) << text;
    return p;
}

std::string with_m1(const std::string& name, std::vector<ordered_json> extra)
{
    ordered_json j = torus_json();
    for (auto& e : extra)
        j["data"]["m1"].push_back(e);
    return write_json(name, j);
}

ordered_json identity_json(const std::string& label, int sign_of_p10 = 1)
{
    ordered_json t;
    t["g"] = 0;
    t["kminus"] = 1;
    t["kplus"] = 1;
    t["q"] = 0;
    t["label"] = label;
    t["entries"] = ordered_json::array();
    for (const char* p : {"p00", "p10", "p01", "p11"})
        t["entries"].push_back(
            {{"minus", {p}}, {"plus", {p}}, {"count", std::string(p) == "p10" ? sign_of_p10 : 1}});
    return t;
}

} // namespace

TEST(Cli, GenTorusIsDeterministicAndValid)
{
    std::string a = path_of("t2_a.json"), b = path_of("t2_b.json");
    ASSERT_EQ(run("gen-torus --dim 2 -o " + a).exit, 0);
    ASSERT_EQ(run("gen-torus --dim 2 -o " + b).exit, 0);
    EXPECT_EQ(read_file(a), read_file(b));
    EXPECT_EQ(run("gen-torus --dim 2").out, read_file(a));

    Outcome v = run("validate --strict " + a);
    EXPECT_EQ(v.exit, 0) << v.out;
    EXPECT_EQ(v.out.find("FAIL"), std::string::npos);
    EXPECT_NE(v.out.find("exit 0"), std::string::npos);
}

TEST(Cli, GenTorusRejectsOddDimension)
{
    EXPECT_NE(run("gen-torus --dim 3").exit, 0);
}

TEST(Cli, FlippedFlowLineIsAValidationFailure)
{
    std::string p = with_m1("flip.json", {{{"from", "p01"}, {"to", "p00"}, {"count", 2}}});
    Outcome r = run("validate " + p);
    EXPECT_EQ(r.exit, 3);
    EXPECT_NE(r.out.find("FAIL cycle:theta_0_1_2"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("vs 0]"), std::string::npos);
}

TEST(Cli, DegreeViolationNamesTheEntry)
{
    std::string p = with_m1("degree.json", {{{"from", "p11"}, {"to", "p00"}, {"count", 1}}});
    Outcome r = run("validate --strict " + p);
    EXPECT_EQ(r.exit, 3);
    EXPECT_NE(r.out.find("FAIL data"), std::string::npos);
    EXPECT_NE(r.out.find("p11 -> p00"), std::string::npos) << r.out;
}

TEST(Cli, BrokenConvolutionGivesWitnessPair)
{
    std::string p = with_m1("conv.json", {{{"from", "p11"}, {"to", "p10"}, {"count", 1}},
                                          {{"from", "p10"}, {"to", "p00"}, {"count", 1}}});
    Outcome r = run("validate " + p);
    EXPECT_EQ(r.exit, 3);
    EXPECT_NE(r.out.find("FAIL data"), std::string::npos);
    auto line = r.out.find("error:");
    ASSERT_NE(line, std::string::npos);
    std::string err = r.out.substr(line, r.out.find('\n', line) - line);
    EXPECT_NE(err.find("p11"), std::string::npos) << err;
    EXPECT_NE(err.find("p00"), std::string::npos) << err;
}

TEST(Cli, ParseErrors)
{
    EXPECT_EQ(run("validate " + write_text("broken.json", "{\"version\": ")).exit, 2);
    EXPECT_EQ(run("validate " + path_of("does_not_exist.json")).exit, 2);
    ordered_json j = torus_json();
    j["extra"] = true;
    std::string p = write_json("extra.json", j);
    EXPECT_EQ(run("validate " + p).exit, 0);
    EXPECT_EQ(run("validate --strict " + p).exit, 2);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run("").exit, 1);
    EXPECT_EQ(run("frobnicate").exit, 1);
    EXPECT_EQ(run("massey " + path_of("t2_a.json")).exit, 1);
}

TEST(Cli, GluingMismatchExitsFour)
{
    ordered_json good = torus_json();
    good["tables"].push_back(identity_json("identity"));
    std::string gp = write_json("identity.json", good);
    Outcome ok = run("glue " + gp + " --first theta_0_1_2 --second theta_0_1_0 -i 2 -j 1 --compare identity");
    EXPECT_EQ(ok.exit, 0) << ok.out;
    EXPECT_NE(ok.out.find("matches identity"), std::string::npos);
    EXPECT_EQ(run("validate --strict " + gp).exit, 0);

    ordered_json bad = torus_json();
    bad["tables"].push_back(identity_json("identity", -1));
    std::string bp = write_json("bad_identity.json", bad);
    Outcome r = run("glue " + bp + " --first theta_0_1_2 --second theta_0_1_0 -i 2 -j 1 --compare identity");
    EXPECT_EQ(r.exit, 4);
    EXPECT_NE(r.out.find("differs from identity ["), std::string::npos) << r.out;
    Outcome v = run("validate " + bp);
    EXPECT_EQ(v.exit, 4);
    EXPECT_NE(v.out.find("FAIL gluing:"), std::string::npos);
}

TEST(Cli, FlippedTableCountIsAGluingFailure)
{
    ordered_json j = torus_json();
    for (auto& t : j["tables"])
        if (t["label"] == "theta_0_1_2")
            t["entries"][0]["count"] = -t["entries"][0]["count"].get<int>();
    Outcome r = run("validate " + write_json("flip_table.json", j));
    EXPECT_EQ(r.exit, 4);
    EXPECT_NE(r.out.find("FAIL gluing:"), std::string::npos);
}

TEST(Cli, HomologyOfSmallComplexes)
{
    const char* point = R"({"version": "floerq/1", "data": {"n": 1, "N0": 0, "N1": 0,
        "orbits": [{"name": "z", "mu": 0}], "m1": []}, "tables": []})";
    Outcome p = run("homology " + write_text("point.json", point));
    EXPECT_EQ(p.exit, 0);
    EXPECT_NE(p.out.find("degree 0: rank 1"), std::string::npos) << p.out;

    const char* torsion = R"({"version": "floerq/1", "data": {"n": 1, "N0": 0, "N1": 0,
        "orbits": [{"name": "a", "mu": 1}, {"name": "b", "mu": 0}],
        "m1": [{"from": "a", "to": "b", "count": 2}]}, "tables": []})";
    Outcome t = run("homology --json " + write_text("torsion.json", torsion));
    ASSERT_EQ(t.exit, 0);
    ordered_json j = ordered_json::parse(t.out);
    EXPECT_EQ(j["HF_*"][0]["degree"], 0);
    EXPECT_EQ(j["HF_*"][0]["rank"], 0);
    EXPECT_EQ(j["HF_*"][0]["torsion"], ordered_json::array({2}));
    EXPECT_EQ(j["HF^*"][1]["torsion"], ordered_json::array({2}));
}

TEST(Cli, JsonOutputsParse)
{
    std::string p = path_of("t2_a.json");
    run("gen-torus --dim 2 -o " + p);
    for (const std::string cmd : {"validate --json ", "homology --json ", "products --json ",
                                  "massey --json --a p01 --b p01 --c p01 "}) {
        Outcome r = run(cmd + p);
        EXPECT_EQ(r.exit, 0) << cmd << r.out;
        EXPECT_TRUE(ordered_json::accept(r.out)) << cmd;
    }
    Outcome bad = run("validate --json " + path_of("flip.json"));
    ordered_json j = ordered_json::parse(bad.out);
    EXPECT_EQ(j["exit"], 3);
}

TEST(Cli, ProductsOnTheTorus)
{
    std::string p = path_of("t2_a.json");
    run("gen-torus --dim 2 -o " + p);
    Outcome r = run("products " + p);
    ASSERT_EQ(r.exit, 0);
    EXPECT_NE(r.out.find("e1 ∪ e2 = e3"), std::string::npos);
    EXPECT_NE(r.out.find("e2 ∪ e1 = -e3"), std::string::npos);
    EXPECT_NE(r.out.find("e1 ∪ e1 = 0"), std::string::npos);
}

TEST(Cli, MasseyTrivialOnTheTorus)
{
    std::string p = path_of("t2_a.json");
    run("gen-torus --dim 2 -o " + p);
    Outcome r = run("massey " + p + " --a p01 --b p01 --c p01");
    EXPECT_EQ(r.exit, 0) << r.out;
    EXPECT_NE(r.out.find("trivial modulo indeterminacy: yes"), std::string::npos);
    Outcome h = run("massey " + p + " --a p01 --b p10 --c p01");
    EXPECT_EQ(h.exit, 3) << h.out;
}

#include <algorithm>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace floerq;

namespace {

bool has_error(const Report& r, const std::string& check)
{
    for (const auto& f : r.findings)
        if (f.severity == Severity::error && f.check == check)
            return true;
    return false;
}

const Finding* finding(const Report& r, const std::string& check)
{
    for (const auto& f : r.findings)
        if (f.check == check)
            return &f;
    return nullptr;
}

Int d_entry(const ChainComplex& c, const std::string& from, const std::string& to)
{
    return c.differential().get(c.basis().index_of(to), c.basis().index_of(from));
}

} // namespace

TEST(BuildCF, SignFromTargetDegree)
{
    FloerData even(1, 0, 0, {{"a", 1}, {"b", 0}}, {{"a", "b", 2}});
    EXPECT_EQ(d_entry(build_cf(even), "a", "b"), 2);
    FloerData odd(1, 0, 0, {{"a", 2}, {"b", 1}}, {{"a", "b", 1}});
    EXPECT_EQ(d_entry(build_cf(odd), "a", "b"), -1);
    FloerData none(1, 0, 0, {{"a", 2}, {"b", 1}});
    EXPECT_TRUE(build_cf(none).differential().is_zero());
}

TEST(BuildCFDual, TransposedCounts)
{
    FloerData d(1, 0, 0, {{"a", 1}, {"b", 0}}, {{"a", "b", 2}});
    ChainComplex c = build_cf_dual(d);
    EXPECT_EQ(d_entry(c, "b^", "a^"), 2);
    EXPECT_EQ(c.basis().degree(c.basis().index_of("a^")).lift, -1);
    FloerData zero(1, 0, 0, {{"a", 1}, {"b", 0}});
    EXPECT_TRUE(build_cf_dual(zero).differential().is_zero());
}

TEST(BuildCFDual, EqualsDualOfChainComplex)
{
    for (const auto& data : {oracle::diamond_data(), generate_data(TorusModel::standard(2)),
                             FloerData(1, 2, 1, {{"x", 3}, {"y", 2}, {"z", 0}}, {{"x", "y", 3}})}) {
        ChainComplex a = build_cf_dual(data);
        ChainComplex b = dual(build_cf(data));
        ASSERT_EQ(a.basis(), b.basis());
        EXPECT_EQ(oracle::dense(a.differential()), oracle::dense(b.differential()));
    }
}

TEST(Pairing, Diagonal)
{
    FloerData d(1, 0, 0, {{"a", 0}, {"b", 1}, {"c", 2}});
    EXPECT_EQ(pairing(d, "a", "a"), 1);
    EXPECT_EQ(pairing(d, "a", "b"), 0);
    Int trace = 0;
    for (const auto& o : d.orbits())
        trace += pairing(d, o.name, o.name);
    EXPECT_EQ(trace, 3);
    EXPECT_THROW(pairing(d, "a", "zz"), Error);
}

TEST(Pairing, ChainMapDefectOnFullBases)
{
    FloerData data = oracle::diamond_data();
    ChainComplex c = build_cf(data);
    ChainComplex cd = build_cf_dual(data);
    for (std::size_t x = 0; x < c.size(); ++x)
        for (std::size_t f = 0; f < c.size(); ++f) {
            Chain xc{{x, 1}}, fc{{f, 1}};
            Int defect = contract(c, c.d(xc), cd, fc) +
                         sign_power(c.basis().degree(x).lift) * contract(c, xc, cd, cd.d(fc));
            EXPECT_EQ(defect, 0);
        }
}

TEST(ValidateData, ConvolutionCancels)
{
    Report r = validate_data(oracle::diamond_data(), true);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(build_cf(oracle::diamond_data()).square_zero_witness(), std::nullopt);
}

TEST(ValidateData, ConvolutionViolationWitness)
{
    FloerData bad(1, 0, 0, {{"a", 2}, {"b", 1}, {"c", 1}, {"e", 0}},
                  {{"a", "b", 1}, {"a", "c", 1}, {"b", "e", 1}, {"c", "e", 1}});
    Report r = validate_data(bad);
    ASSERT_FALSE(r.ok());
    const Finding* f = finding(r, "data.convolution");
    ASSERT_NE(f, nullptr);
    EXPECT_NE(f->witness.find("a"), std::string::npos);
    EXPECT_NE(f->witness.find("e"), std::string::npos);
    EXPECT_THROW(build_cf(bad), Error);
}

TEST(ValidateData, DegreeCongruenceStrictness)
{
    FloerData d(1, 0, 0, {{"a", 2}, {"b", 0}}, {{"a", "b", 1}});
    Report lax = validate_data(d, false);
    EXPECT_TRUE(lax.ok());
    bool warned = false;
    for (const auto& f : lax.findings)
        warned |= f.severity == Severity::warning;
    EXPECT_TRUE(warned);
    EXPECT_FALSE(validate_data(d, true).ok());
    // mod 2N0 = 4: 5 − 0 ≡ 1
    FloerData periodic(1, 2, 2, {{"a", 5}, {"b", 0}}, {{"a", "b", 1}});
    EXPECT_TRUE(validate_data(periodic, true).ok());
}

TEST(ValidateData, ShapeAndNames)
{
    EXPECT_TRUE(has_error(validate_data(FloerData(0, 0, 0, {{"a", 0}})), "data.shape"));
    EXPECT_TRUE(has_error(validate_data(FloerData(1, 4, 3, {{"a", 0}})), "data.shape"));
    EXPECT_TRUE(has_error(validate_data(FloerData(1, 0, 2, {{"a", 0}})), "data.shape"));
    EXPECT_FALSE(validate_data(FloerData(1, 0, 0, {{"a", 0}, {"a", 1}})).ok());
    EXPECT_FALSE(validate_data(FloerData(1, 0, 0, {{"a", 1}}, {{"a", "zz", 1}})).ok());
}

TEST(ValidateData, ContractibilityNote)
{
    Report r = validate_data(oracle::diamond_data());
    bool note = false;
    for (const auto& f : r.findings)
        note |= f.severity == Severity::note;
    EXPECT_TRUE(note);
}

TEST(ValidateData, TorusOracleIsValid)
{
    for (int d : {2, 4})
        EXPECT_TRUE(validate_data(generate_data(TorusModel::standard(d)), true).ok());
}

TEST(BuildCF, HomologyIndependentOfOrbitOrder)
{
    FloerData base = oracle::diamond_data();
    auto orbits = base.orbits();
    std::vector<std::size_t> order(orbits.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto reference = homology(build_cf(base));
    do {
        std::vector<Orbit> shuffled;
        for (auto i : order)
            shuffled.push_back(orbits[i]);
        FloerData d(base.n(), base.N0(), base.N1(), shuffled, base.m1_entries());
        EXPECT_EQ(homology(build_cf(d)), reference);
    } while (std::next_permutation(order.begin(), order.end()));
}

TEST(BuildCF, DegreeDropsByOneAndSquaresToZero)
{
    FloerData data = oracle::diamond_data();
    ChainComplex c = build_cf(data);
    auto d = oracle::dense(c.differential());
    EXPECT_TRUE(oracle::all_zero(oracle::multiply(d, d)));
    for (std::size_t a = 0; a < c.size(); ++a)
        for (const auto& [b, v] : c.differential().column(a))
            EXPECT_EQ(c.basis().degree(b).lift, c.basis().degree(a).lift - 1);
}

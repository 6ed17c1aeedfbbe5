#include <algorithm>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace floerq;

namespace {

std::vector<Degree> degrees_of(const std::vector<std::int64_t>& lifts, std::int64_t modulus = 0)
{
    std::vector<Degree> out;
    for (auto l : lifts)
        out.push_back(Degree{l, modulus});
    return out;
}

std::vector<std::vector<std::size_t>> all_permutations(std::size_t k)
{
    std::vector<std::size_t> v(k);
    std::iota(v.begin(), v.end(), std::size_t{0});
    std::vector<std::vector<std::size_t>> out;
    do
        out.push_back(v);
    while (std::next_permutation(v.begin(), v.end()));
    return out;
}

} // namespace

TEST(Degree, EqualityIsCongruence)
{
    EXPECT_EQ((Degree{1, 4}), (Degree{5, 4}));
    EXPECT_EQ((Degree{-1, 4}), (Degree{3, 4}));
    EXPECT_NE((Degree{1, 4}), (Degree{2, 4}));
    EXPECT_NE((Degree{1, 0}), (Degree{5, 0}));
    EXPECT_EQ((Degree{-3, 4}).value(), 1);
}

TEST(Degree, ParityNeedsEvenModulus)
{
    EXPECT_EQ((Degree{3, 4}).parity(), 1);
    EXPECT_EQ((Degree{-2, 0}).parity(), 0);
    EXPECT_THROW((void)(Degree{1, 3}).parity(), Error);
    try {
        (void)(Degree{1, 3}).parity();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_grading);
    }
}

TEST(Permutation, RejectsNonPermutations)
{
    EXPECT_THROW(Permutation({0, 0}), Error);
    EXPECT_THROW(Permutation({1, 2}), Error);
    EXPECT_THROW(Permutation::from_one_based({0, 1}), Error);
    EXPECT_EQ(Permutation::from_one_based({2, 1}).images(), (std::vector<std::size_t>{1, 0}));
}

TEST(Permutation, ApplyAndInverse)
{
    Permutation rho({2, 0, 1});
    std::vector<char> seq = {'a', 'b', 'c'};
    EXPECT_EQ(rho.apply(seq), (std::vector<char>{'c', 'a', 'b'}));
    EXPECT_EQ(rho.inverse().apply(rho.apply(seq)), seq);
    EXPECT_EQ(rho.sign(), 1);
    EXPECT_EQ(Permutation({1, 0, 2}).sign(), -1);
}

TEST(GradedSign, IdentityIsPlus)
{
    auto d = degrees_of({1, 2, 1});
    EXPECT_EQ(graded_sign(Permutation::identity(3), d), 1);
}

TEST(GradedSign, OddOddSwapIsMinus)
{
    auto d = degrees_of({1, 1});
    EXPECT_EQ(graded_sign(Permutation::from_one_based({2, 1}), d), -1);
}

TEST(GradedSign, EvenEntriesAreRemoved)
{
    auto d = degrees_of({2, 1});
    EXPECT_EQ(graded_sign(Permutation::from_one_based({2, 1}), d), 1);
}

TEST(GradedSign, ThreeCycleOnOddDegreesIsPlus)
{
    auto d = degrees_of({1, 1, 1});
    EXPECT_EQ(graded_sign(Permutation::from_one_based({2, 3, 1}), d), 1);
}

TEST(GradedSign, OddModulusIsAnError)
{
    auto d = degrees_of({1, 1}, 3);
    EXPECT_THROW(graded_sign(Permutation::identity(2), d), Error);
}

TEST(GradedSign, MatchesAdjacentSwapOracle)
{
    for (std::size_t k = 0; k <= 5; ++k)
        for (const auto& images : all_permutations(k))
            for (unsigned mask = 0; mask < (1u << k); ++mask) {
                std::vector<int> par(k);
                for (std::size_t i = 0; i < k; ++i)
                    par[i] = (mask >> i) & 1;
                ASSERT_EQ(graded_sign_parities(Permutation(images), par), oracle::brute_graded_sign(images, par));
            }
}

// graded_sign(ρ∘σ, D) = graded_sign(ρ, σ·D) · graded_sign(σ, D), with ρ∘σ the
// permutation "σ first, then ρ".
TEST(GradedSign, MultiplicativeExhaustivelyUpToSix)
{
    std::size_t checked = 0;
    for (std::size_t k = 0; k <= 6; ++k) {
        auto perms = all_permutations(k);
        std::vector<Permutation> ps;
        for (const auto& p : perms)
            ps.emplace_back(p);
        for (unsigned mask = 0; mask < (1u << k); ++mask) {
            std::vector<int> par(k);
            for (std::size_t i = 0; i < k; ++i)
                par[i] = (mask >> i) & 1;
            std::vector<int> sign_sigma(ps.size());
            std::vector<std::vector<int>> moved(ps.size());
            for (std::size_t s = 0; s < ps.size(); ++s) {
                sign_sigma[s] = graded_sign_parities(ps[s], par);
                moved[s] = ps[s].apply(par);
            }
            for (std::size_t s = 0; s < ps.size(); ++s)
                for (std::size_t r = 0; r < ps.size(); ++r) {
                    int lhs = graded_sign_parities(compose(ps[r], ps[s]), par);
                    int rhs = graded_sign_parities(ps[r], moved[s]) * sign_sigma[s];
                    ASSERT_EQ(lhs, rhs);
                    ++checked;
                }
        }
    }
    EXPECT_GT(checked, 0u);
}

TEST(GradedSign, CompositionActsInOrder)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::size_t> a(5), b(5);
        std::iota(a.begin(), a.end(), std::size_t{0});
        std::iota(b.begin(), b.end(), std::size_t{0});
        std::shuffle(a.begin(), a.end(), rng);
        std::shuffle(b.begin(), b.end(), rng);
        Permutation rho(a), sigma(b);
        std::vector<int> seq = {10, 11, 12, 13, 14};
        EXPECT_EQ(compose(rho, sigma).apply(seq), rho.apply(sigma.apply(seq)));
    }
}

TEST(GradedSign, ReorderingByIds)
{
    std::vector<std::size_t> source = {7, 8, 9};
    std::vector<std::size_t> target = {9, 7, 8};
    auto parity = [](std::size_t id) { return id == 8 ? 0 : 1; };
    // odd items 7, 9 swap order
    EXPECT_EQ(graded_sign_of_reordering(std::span<const std::size_t>(source), std::span<const std::size_t>(target),
                                        parity),
              -1);
}

TEST(Arithmetic, CheckedOverflow)
{
    EXPECT_THROW(checked_add(std::numeric_limits<Int>::max(), 1), Error);
    EXPECT_THROW(checked_mul(std::numeric_limits<Int>::max(), 2), Error);
    EXPECT_EQ(checked_mul(-3, 4), -12);
    EXPECT_EQ(sign_power(3), -1);
    EXPECT_EQ(sign_power(-2), 1);
    EXPECT_EQ(mod_floor(-1, 4), 3);
}

#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the routine it is meant to check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "floerq/floerq.hpp"

namespace oracle {

using floerq::Int;
using Rational = boost::multiprecision::cpp_rational;

/// Sign of sorting `order` (a list of item ids) into increasing order by
/// adjacent swaps, counting only swaps of two odd items.
inline int bubble_sign(std::vector<std::size_t> order, const std::vector<int>& parity_of_item)
{
    int s = 1;
    for (std::size_t pass = 0; pass < order.size(); ++pass)
        for (std::size_t i = 0; i + 1 < order.size(); ++i)
            if (order[i] > order[i + 1]) {
                if (parity_of_item[order[i]] % 2 != 0 && parity_of_item[order[i + 1]] % 2 != 0)
                    s = -s;
                std::swap(order[i], order[i + 1]);
            }
    return s;
}

/// graded sign of x_0..x_{k-1} -> x_{rho(0)}..x_{rho(k-1)}: the target
/// sequence lists item ids rho(0..k-1); sorting it back undoes the move.
inline int brute_graded_sign(const std::vector<std::size_t>& images, const std::vector<int>& parities)
{
    return bubble_sign(images, parities);
}

/// Rank over Q by fraction arithmetic.
inline std::size_t rational_rank(std::vector<std::vector<Rational>> m)
{
    std::size_t rank = 0;
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && m[p][c] == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(m[p], m[rank]);
        for (std::size_t r = 0; r < rows; ++r)
            if (r != rank && m[r][c] != 0) {
                Rational f = m[r][c] / m[rank][c];
                for (std::size_t k = c; k < cols; ++k)
                    m[r][k] -= f * m[rank][k];
            }
        ++rank;
    }
    return rank;
}

/// Dense copy of a differential.
inline std::vector<std::vector<Int>> dense(const floerq::SparseMatrix& s)
{
    std::vector<std::vector<Int>> m(s.rows(), std::vector<Int>(s.cols(), 0));
    for (std::size_t c = 0; c < s.cols(); ++c)
        for (const auto& [r, v] : s.column(c))
            m[r][c] = v;
    return m;
}

inline std::vector<std::vector<Int>> multiply(const std::vector<std::vector<Int>>& a,
                                              const std::vector<std::vector<Int>>& b)
{
    std::vector<std::vector<Int>> out(a.size(), std::vector<Int>(b.empty() ? 0 : b[0].size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            if (a[i][k] != 0)
                for (std::size_t j = 0; j < b[k].size(); ++j)
                    out[i][j] += a[i][k] * b[k][j];
    return out;
}

inline bool all_zero(const std::vector<std::vector<Int>>& m)
{
    for (const auto& r : m)
        for (auto v : r)
            if (v != 0)
                return false;
    return true;
}

/// Betti numbers by rank-nullity over Q, keyed by degree.
inline std::map<std::int64_t, std::size_t> rational_betti(const floerq::ChainComplex& c)
{
    auto d = dense(c.differential());
    std::map<std::int64_t, std::vector<std::size_t>> gens;
    for (std::size_t i = 0; i < c.size(); ++i)
        gens[c.basis().degree(i).value()].push_back(i);
    auto block_rank = [&](std::int64_t from) -> std::size_t {
        auto src = gens.find(from);
        auto dst = gens.find(from - 1);
        if (src == gens.end() || dst == gens.end())
            return 0;
        std::vector<std::vector<Rational>> m;
        for (auto r : dst->second) {
            std::vector<Rational> row;
            for (auto col : src->second)
                row.emplace_back(d[r][col]);
            m.push_back(row);
        }
        return rational_rank(m);
    };
    std::map<std::int64_t, std::size_t> out;
    for (const auto& [q, g] : gens)
        out[q] = g.size() - block_rank(q) - block_rank(q + 1);
    return out;
}

/// A random complex assembled from elementary pieces (isolated generators
/// and pairs a -> k b) and then scrambled by unimodular base changes and a
/// shuffle; its homology is known from the pieces.
struct RandomComplex {
    floerq::ChainComplex complex;
    std::map<std::int64_t, std::size_t> betti;
    std::map<std::int64_t, std::vector<Int>> torsion; // invariant factors
};

inline RandomComplex random_complex(std::mt19937& rng, std::size_t max_gens = 8, std::int64_t max_degree = 3)
{
    std::uniform_int_distribution<int> coin(0, 2);
    std::uniform_int_distribution<std::int64_t> deg(0, max_degree);
    std::uniform_int_distribution<std::size_t> count(1, max_gens);
    const std::vector<Int> coefficients = {1, -1, 2, -2, 4, 0};
    std::uniform_int_distribution<std::size_t> pick(0, coefficients.size() - 1);

    const std::size_t target = count(rng);
    std::vector<std::int64_t> degrees;
    std::vector<std::tuple<std::size_t, std::size_t, Int>> entries; // (row, col, v)
    RandomComplex out;
    while (degrees.size() < target) {
        if (coin(rng) == 0 || degrees.size() + 2 > target) {
            std::int64_t q = deg(rng);
            degrees.push_back(q);
            ++out.betti[q];
        } else {
            std::int64_t q = std::uniform_int_distribution<std::int64_t>(0, max_degree - 1)(rng);
            Int k = coefficients[pick(rng)];
            degrees.push_back(q + 1);
            degrees.push_back(q);
            entries.emplace_back(degrees.size() - 1, degrees.size() - 2, k);
            if (k == 0) {
                ++out.betti[q];
                ++out.betti[q + 1];
            } else {
                out.betti[q] += 0;
                out.betti[q + 1] += 0;
                if (k != 1 && k != -1)
                    out.torsion[q].push_back(k < 0 ? -k : k);
            }
        }
    }
    const std::size_t n = degrees.size();
    std::vector<std::vector<Int>> d(n, std::vector<Int>(n, 0));
    for (auto [r, c, v] : entries)
        d[r][c] = v;

    // u' = u + t v within one degree: column u += t column v, row v -= t row u.
    std::uniform_int_distribution<std::size_t> gen(0, n - 1);
    std::uniform_int_distribution<Int> tdist(-1, 1);
    for (int step = 0; step < 12; ++step) {
        std::size_t u = gen(rng), v = gen(rng);
        Int t = tdist(rng);
        if (u == v || t == 0 || degrees[u] != degrees[v])
            continue;
        for (std::size_t r = 0; r < n; ++r)
            d[r][u] += t * d[r][v];
        for (std::size_t c = 0; c < n; ++c)
            d[v][c] -= t * d[u][c];
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i)
        perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);

    floerq::GradedBasis basis(0);
    for (std::size_t i = 0; i < n; ++i)
        basis.add("g" + std::to_string(i), degrees[perm[i]]);
    floerq::SparseMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (d[perm[r]][perm[c]] != 0)
                m.set(r, c, d[perm[r]][perm[c]]);
    out.complex = floerq::ChainComplex(std::move(basis), std::move(m));
    for (auto& [q, t] : out.torsion)
        std::sort(t.begin(), t.end());
    for (auto it = out.betti.begin(); it != out.betti.end();)
        it = it->second == 0 ? out.betti.erase(it) : std::next(it);
    return out;
}

/// Two-orbit-degree datum with a nonzero differential that squares to zero:
/// a(2) -> b(1), c(1) -> e(0) with the counts of the valid convolution example.
inline floerq::FloerData diamond_data()
{
    return floerq::FloerData(1, 0, 0, {{"a", 2}, {"b", 1}, {"c", 1}, {"e", 0}},
                             {{"a", "b", 1}, {"a", "c", 1}, {"b", "e", 1}, {"c", "e", -1}});
}

/// All basis keys of a tensor shape (slot-major, as in TensorElement keys).
inline std::vector<floerq::TensorElement::Key> all_keys(const floerq::TensorElement& shape)
{
    std::vector<floerq::TensorElement::Key> out{{}};
    for (std::size_t p = 0; p < shape.arity(); ++p) {
        std::vector<floerq::TensorElement::Key> next;
        for (const auto& k : out)
            for (std::uint32_t a = 0; a < shape.slot_data(p).size(); ++a) {
                auto k2 = k;
                k2.push_back(a);
                next.push_back(k2);
            }
        out = std::move(next);
    }
    return out;
}

inline floerq::TensorElement basis_element(const floerq::TensorElement& shape, const floerq::TensorElement::Key& k)
{
    floerq::TensorElement x(shape.minus_slots(), shape.plus_slots());
    x.add(k, 1);
    return x;
}

} // namespace oracle

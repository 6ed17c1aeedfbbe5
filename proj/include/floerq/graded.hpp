#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "floerq/error.hpp"

namespace floerq {

/// An integer grading lift taken modulo `modulus` (0 = no reduction).
///
/// Floer complexes are graded by Z/2N; the lift is kept so that congruences
/// modulo different even moduli can be checked from the same value.
struct Degree {
    std::int64_t lift = 0;
    std::int64_t modulus = 0;

    /// Canonical representative: the lift itself when unreduced, otherwise
    /// the residue in [0, modulus).
    std::int64_t value() const { return modulus == 0 ? lift : mod_floor(lift, modulus); }

    bool parity_defined() const { return modulus % 2 == 0; }

    int parity() const
    {
        if (!parity_defined())
            throw Error(ErrorKind::invalid_grading,
                        "parity undefined for odd modulus " + std::to_string(modulus));
        return static_cast<int>(mod_floor(lift, 2));
    }

    Degree shifted(std::int64_t by) const { return Degree{lift + by, modulus}; }

    friend bool operator==(const Degree& a, const Degree& b)
    {
        if (a.modulus != b.modulus)
            return false;
        return a.value() == b.value();
    }
};

/// True iff a ≡ b modulo m (m = 0 means equality).
inline bool congruent(std::int64_t a, std::int64_t b, std::int64_t m)
{
    return m == 0 ? a == b : mod_floor(a - b, m) == 0;
}

/// A bijection of {0..k-1}, stored as its image list.
///
/// Acting on a sequence (x_0..x_{k-1}) produces (x_{p(0)}..x_{p(k-1)}).
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<std::size_t> images) : images_(std::move(images))
    {
        std::vector<bool> seen(images_.size(), false);
        for (auto v : images_) {
            if (v >= images_.size() || seen[v])
                throw Error(ErrorKind::shape, "index list is not a permutation");
            seen[v] = true;
        }
    }

    /// Build from a 1-based image list, as written in the literature.
    static Permutation from_one_based(const std::vector<std::size_t>& one_based)
    {
        std::vector<std::size_t> v;
        v.reserve(one_based.size());
        for (auto x : one_based) {
            if (x == 0)
                throw Error(ErrorKind::shape, "1-based permutation contains 0");
            v.push_back(x - 1);
        }
        return Permutation(std::move(v));
    }

    static Permutation identity(std::size_t k)
    {
        std::vector<std::size_t> v(k);
        std::iota(v.begin(), v.end(), std::size_t{0});
        return Permutation(std::move(v));
    }

    std::size_t size() const { return images_.size(); }
    std::size_t operator[](std::size_t i) const { return images_[i]; }
    const std::vector<std::size_t>& images() const { return images_; }

    Permutation inverse() const
    {
        std::vector<std::size_t> v(images_.size());
        for (std::size_t i = 0; i < images_.size(); ++i)
            v[images_[i]] = i;
        return Permutation(std::move(v));
    }

    /// Ordinary sign, by inversion count.
    int sign() const
    {
        std::size_t inv = 0;
        for (std::size_t i = 0; i < images_.size(); ++i)
            for (std::size_t j = i + 1; j < images_.size(); ++j)
                if (images_[i] > images_[j])
                    ++inv;
        return inv % 2 == 0 ? 1 : -1;
    }

    template <typename T>
    std::vector<T> apply(std::span<const T> seq) const
    {
        if (seq.size() != images_.size())
            throw Error(ErrorKind::shape, "permutation arity mismatch");
        std::vector<T> out;
        out.reserve(seq.size());
        for (auto p : images_)
            out.push_back(seq[p]);
        return out;
    }

    template <typename T>
    std::vector<T> apply(const std::vector<T>& seq) const
    {
        return apply(std::span<const T>(seq));
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::size_t> images_;
};

/// The permutation whose action equals acting by `second` after `first`:
/// act(compose(second, first), x) == act(second, act(first, x)).
inline Permutation compose(const Permutation& second, const Permutation& first)
{
    if (second.size() != first.size())
        throw Error(ErrorKind::shape, "composing permutations of different size");
    std::vector<std::size_t> v(first.size());
    for (std::size_t p = 0; p < v.size(); ++p)
        v[p] = first[second[p]];
    return Permutation(std::move(v));
}

/// Sign of the reordering (x_0..x_{k-1}) -> (x_{rho(0)}..x_{rho(k-1)}) after
/// deleting every entry of even parity.
inline int graded_sign_parities(const Permutation& rho, std::span<const int> parities)
{
    if (parities.size() != rho.size())
        throw Error(ErrorKind::shape, "graded_sign: degree list does not match permutation size");
    std::size_t inv = 0;
    const std::size_t k = rho.size();
    for (std::size_t i = 0; i < k; ++i) {
        if ((parities[rho[i]] & 1) == 0)
            continue;
        for (std::size_t j = i + 1; j < k; ++j)
            if ((parities[rho[j]] & 1) != 0 && rho[i] > rho[j])
                ++inv;
    }
    return inv % 2 == 0 ? 1 : -1;
}

inline int graded_sign(const Permutation& rho, std::span<const Degree> degrees)
{
    std::vector<int> parities;
    parities.reserve(degrees.size());
    for (const auto& d : degrees)
        parities.push_back(d.parity());
    return graded_sign_parities(rho, parities);
}

/// Graded sign of the permutation that takes `source` to `target`, where both
/// are orderings of the same distinct item ids and `parity_of(id)` gives the
/// degree parity of each item.
template <typename ParityOf>
int graded_sign_of_reordering(std::span<const std::size_t> source,
                              std::span<const std::size_t> target, ParityOf parity_of)
{
    if (source.size() != target.size())
        throw Error(ErrorKind::shape, "reordering of different lengths");
    std::vector<std::size_t> images;
    images.reserve(target.size());
    for (auto id : target) {
        auto it = std::find(source.begin(), source.end(), id);
        if (it == source.end())
            throw Error(ErrorKind::shape, "reordering target item missing from source");
        images.push_back(static_cast<std::size_t>(it - source.begin()));
    }
    std::vector<int> parities;
    parities.reserve(source.size());
    for (auto id : source)
        parities.push_back(parity_of(id));
    return graded_sign_parities(Permutation(std::move(images)), parities);
}

} // namespace floerq

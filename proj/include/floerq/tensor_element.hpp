#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "floerq/chain_complex.hpp"
#include "floerq/error.hpp"
#include "floerq/floer.hpp"
#include "floerq/graded.hpp"

namespace floerq {

using DataRef = std::shared_ptr<const FloerData>;

inline DataRef share(FloerData data) { return std::make_shared<const FloerData>(std::move(data)); }

inline bool same_data(const DataRef& a, const DataRef& b)
{
    return a == b || (a && b && *a == *b);
}

/// Integer combination of orbit tuples in CF^*⊗k⁻ ⊗ CF_*⊗k⁺.
///
/// Each slot remembers which FloerData its orbits come from, so elements that
/// mix two data sets (continuation maps) are representable. A key lists the
/// minus-slot orbit indices followed by the plus-slot indices.
class TensorElement {
public:
    using Key = std::vector<std::uint32_t>;

    TensorElement() = default;

    TensorElement(std::vector<DataRef> minus, std::vector<DataRef> plus)
        : minus_(std::move(minus)), plus_(std::move(plus))
    {
        for (const auto& d : minus_)
            if (!d)
                throw Error(ErrorKind::shape, "tensor slot without data");
        for (const auto& d : plus_)
            if (!d)
                throw Error(ErrorKind::shape, "tensor slot without data");
    }

    /// Element whose slots all draw from one data set.
    static TensorElement over(const DataRef& data, std::size_t k_minus, std::size_t k_plus)
    {
        return TensorElement(std::vector<DataRef>(k_minus, data), std::vector<DataRef>(k_plus, data));
    }

    std::size_t k_minus() const { return minus_.size(); }
    std::size_t k_plus() const { return plus_.size(); }
    std::size_t arity() const { return minus_.size() + plus_.size(); }
    const std::vector<DataRef>& minus_slots() const { return minus_; }
    const std::vector<DataRef>& plus_slots() const { return plus_; }
    const std::map<Key, Int>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Data of slot p in key order (minus slots first).
    const FloerData& slot_data(std::size_t p) const
    {
        return p < minus_.size() ? *minus_[p] : *plus_.at(p - minus_.size());
    }

    int parity(std::size_t p, std::uint32_t orbit) const { return slot_data(p).parity(orbit); }

    /// Degree of a term: plus orbits count +μ, minus orbits -μ.
    std::int64_t degree(const Key& key) const
    {
        std::int64_t deg = 0;
        for (std::size_t p = 0; p < key.size(); ++p)
            deg += p < minus_.size() ? -slot_data(p).mu(key[p]) : slot_data(p).mu(key[p]);
        return deg;
    }

    void add(const Key& key, Int coeff)
    {
        if (key.size() != arity())
            throw Error(ErrorKind::shape, "tensor key has wrong arity");
        for (std::size_t p = 0; p < key.size(); ++p)
            if (key[p] >= slot_data(p).size())
                throw Error(ErrorKind::lookup, "orbit index out of range");
        if (coeff == 0)
            return;
        Int& slot = terms_[key];
        slot = checked_add(slot, coeff);
        if (slot == 0)
            terms_.erase(key);
    }

    void add(const std::vector<std::string>& minus, const std::vector<std::string>& plus, Int coeff)
    {
        if (minus.size() != k_minus() || plus.size() != k_plus())
            throw Error(ErrorKind::shape, "tuple lengths do not match the slot arity");
        Key key;
        key.reserve(arity());
        for (std::size_t p = 0; p < minus.size(); ++p)
            key.push_back(static_cast<std::uint32_t>(minus_[p]->index_of(minus[p])));
        for (std::size_t p = 0; p < plus.size(); ++p)
            key.push_back(static_cast<std::uint32_t>(plus_[p]->index_of(plus[p])));
        add(key, coeff);
    }

    Int coefficient(const Key& key) const
    {
        auto it = terms_.find(key);
        return it == terms_.end() ? 0 : it->second;
    }

    Int coefficient(const std::vector<std::string>& minus, const std::vector<std::string>& plus) const
    {
        TensorElement probe(minus_, plus_);
        probe.add(minus, plus, 1);
        return coefficient(probe.terms_.begin()->first);
    }

    /// Same arity and slot data.
    bool same_shape(const TensorElement& o) const
    {
        if (minus_.size() != o.minus_.size() || plus_.size() != o.plus_.size())
            return false;
        for (std::size_t p = 0; p < minus_.size(); ++p)
            if (!same_data(minus_[p], o.minus_[p]))
                return false;
        for (std::size_t p = 0; p < plus_.size(); ++p)
            if (!same_data(plus_[p], o.plus_[p]))
                return false;
        return true;
    }

    TensorElement& operator+=(const TensorElement& o)
    {
        require_same_shape(o);
        for (const auto& [k, v] : o.terms_)
            add(k, v);
        return *this;
    }

    TensorElement& operator-=(const TensorElement& o)
    {
        require_same_shape(o);
        for (const auto& [k, v] : o.terms_)
            add(k, checked_mul(-1, v));
        return *this;
    }

    TensorElement& operator*=(Int s)
    {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, v] : terms_)
            v = checked_mul(v, s);
        return *this;
    }

    friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
    friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
    friend TensorElement operator*(Int s, TensorElement a) { return a *= s; }
    friend TensorElement operator-(TensorElement a) { return a *= -1; }

    friend bool operator==(const TensorElement& a, const TensorElement& b)
    {
        return a.same_shape(b) && a.terms_ == b.terms_;
    }

    /// Human-readable rendering, e.g. "2 a^⊗b - c^⊗c".
    std::string to_string() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        bool first = true;
        for (const auto& [k, v] : terms_) {
            if (!first)
                out += v < 0 ? " - " : " + ";
            else if (v < 0)
                out += "-";
            first = false;
            Int mag = v < 0 ? -v : v;
            if (mag != 1 || k.empty())
                out += std::to_string(mag) + (k.empty() ? "" : " ");
            for (std::size_t p = 0; p < k.size(); ++p) {
                if (p > 0)
                    out += tensor_separator;
                out += slot_data(p).orbit(k[p]).name;
                if (p < k_minus())
                    out += dual_suffix;
            }
        }
        return out;
    }

private:
    void require_same_shape(const TensorElement& o) const
    {
        if (!same_shape(o))
            throw Error(ErrorKind::shape, "tensor elements have different slot structure");
    }

    std::vector<DataRef> minus_;
    std::vector<DataRef> plus_;
    std::map<Key, Int> terms_;
};

namespace detail {

/// Sparse images of single orbits under d (chain) or d* (cochain).
struct SlotDifferential {
    std::vector<std::vector<std::pair<std::uint32_t, Int>>> image;
};

inline SlotDifferential slot_differential(const FloerData& data, bool cochain)
{
    SlotDifferential out;
    out.image.resize(data.size());
    for (const auto& [ab, v] : data.m1()) {
        if (cochain)
            out.image[ab.second].push_back({static_cast<std::uint32_t>(ab.first), v});
        else
            out.image[ab.first].push_back(
                {static_cast<std::uint32_t>(ab.second), checked_mul(sign_power(data.mu(ab.second)), v)});
    }
    return out;
}

} // namespace detail

/// Differential of the tensor complex: d* on minus slots, d on plus slots,
/// with the Koszul sign (-1)^{parity of the factors passed}.
inline TensorElement differential(const TensorElement& x)
{
    std::vector<detail::SlotDifferential> slots;
    for (std::size_t p = 0; p < x.arity(); ++p)
        slots.push_back(detail::slot_differential(x.slot_data(p), p < x.k_minus()));
    TensorElement out(x.minus_slots(), x.plus_slots());
    for (const auto& [key, coeff] : x.terms()) {
        int passed = 0;
        for (std::size_t p = 0; p < key.size(); ++p) {
            const Int s = sign_power(passed);
            for (const auto& [target, v] : slots[p].image[key[p]]) {
                TensorElement::Key k2 = key;
                k2[p] = target;
                out.add(k2, checked_mul(checked_mul(s, v), coeff));
            }
            passed += x.parity(p, key[p]);
        }
    }
    return out;
}

/// Acts on keys by a permutation of all slots, with the graded sign; the
/// result has its slots reordered the same way.
inline TensorElement reorder_slots(const Permutation& rho, std::size_t new_k_minus, const TensorElement& x)
{
    if (rho.size() != x.arity())
        throw Error(ErrorKind::shape, "permutation size does not match tensor arity");
    std::vector<DataRef> all;
    for (const auto& d : x.minus_slots())
        all.push_back(d);
    for (const auto& d : x.plus_slots())
        all.push_back(d);
    auto permuted = rho.apply(all);
    TensorElement out(std::vector<DataRef>(permuted.begin(), permuted.begin() + static_cast<std::ptrdiff_t>(new_k_minus)),
                      std::vector<DataRef>(permuted.begin() + static_cast<std::ptrdiff_t>(new_k_minus), permuted.end()));
    std::vector<int> parities(x.arity());
    for (const auto& [key, coeff] : x.terms()) {
        for (std::size_t p = 0; p < key.size(); ++p)
            parities[p] = x.parity(p, key[p]);
        out.add(rho.apply(key), graded_sign_parities(rho, parities) * coeff);
    }
    return out;
}

/// ρ ∈ S_{k⁻} × S_{k⁺} acting on minus and plus factors independently.
inline TensorElement act_permutation(const Permutation& rho_minus, const Permutation& rho_plus,
                                     const TensorElement& x)
{
    if (rho_minus.size() != x.k_minus() || rho_plus.size() != x.k_plus())
        throw Error(ErrorKind::shape, "permutation arity does not match tensor element");
    std::vector<std::size_t> images(rho_minus.images());
    for (auto v : rho_plus.images())
        images.push_back(v + x.k_minus());
    return reorder_slots(Permutation(std::move(images)), x.k_minus(), x);
}

namespace detail {

/// Contracts positions `pc` (a chain slot) and `mc` (a cochain slot) of the
/// concatenated key after reordering by `rho`, whose last two images are pc, mc.
inline void contract_into(TensorElement& out, const Permutation& rho, const std::vector<int>& parities,
                          const TensorElement::Key& key, Int coeff)
{
    auto permuted = rho.apply(key);
    if (permuted[permuted.size() - 2] != permuted[permuted.size() - 1])
        return;
    permuted.resize(permuted.size() - 2);
    out.add(permuted, checked_mul(graded_sign_parities(rho, parities), coeff));
}

} // namespace detail

/// x ◊_ij y: pairs the i-th plus factor of x with the j-th minus factor of y
/// (1-based). Survivors are ordered
///   y⁻_{<j}, x⁻, y⁻_{>j}, x⁺_{<i}, y⁺, x⁺_{>i}
/// and the sign is the graded sign of moving the source (x⁻, x⁺, y⁻, y⁺) into
/// that order followed by the contracted pair x⁺_i, y⁻_j.
inline TensorElement diamond(const TensorElement& x, const TensorElement& y, std::size_t i, std::size_t j)
{
    const std::size_t xm = x.k_minus(), xp = x.k_plus(), ym = y.k_minus(), yp = y.k_plus();
    if (i < 1 || i > xp)
        throw Error(ErrorKind::shape, "diamond: plus index " + std::to_string(i) + " out of range 1.." + std::to_string(xp));
    if (j < 1 || j > ym)
        throw Error(ErrorKind::shape, "diamond: minus index " + std::to_string(j) + " out of range 1.." + std::to_string(ym));
    if (!same_data(x.plus_slots()[i - 1], y.minus_slots()[j - 1]))
        throw Error(ErrorKind::composition, "diamond: contracted slots come from different data");

    const std::size_t x0 = 0, xplus0 = xm, y0 = xm + xp, yplus0 = xm + xp + ym;
    std::vector<std::size_t> images;
    std::vector<DataRef> minus, plus;
    for (std::size_t t = 0; t + 1 < j; ++t) {
        images.push_back(y0 + t);
        minus.push_back(y.minus_slots()[t]);
    }
    for (std::size_t t = 0; t < xm; ++t) {
        images.push_back(x0 + t);
        minus.push_back(x.minus_slots()[t]);
    }
    for (std::size_t t = j; t < ym; ++t) {
        images.push_back(y0 + t);
        minus.push_back(y.minus_slots()[t]);
    }
    for (std::size_t t = 0; t + 1 < i; ++t) {
        images.push_back(xplus0 + t);
        plus.push_back(x.plus_slots()[t]);
    }
    for (std::size_t t = 0; t < yp; ++t) {
        images.push_back(yplus0 + t);
        plus.push_back(y.plus_slots()[t]);
    }
    for (std::size_t t = i; t < xp; ++t) {
        images.push_back(xplus0 + t);
        plus.push_back(x.plus_slots()[t]);
    }
    images.push_back(xplus0 + i - 1);
    images.push_back(y0 + j - 1);
    const Permutation rho(std::move(images));

    std::multimap<std::uint32_t, const std::pair<const TensorElement::Key, Int>*> y_by_orbit;
    for (const auto& term : y.terms())
        y_by_orbit.emplace(term.first[j - 1], &term);

    TensorElement out(std::move(minus), std::move(plus));
    TensorElement::Key key(xm + xp + ym + yp);
    std::vector<int> parities(key.size());
    for (const auto& [kx, cx] : x.terms()) {
        auto [lo, hi] = y_by_orbit.equal_range(kx[xm + i - 1]);
        for (auto it = lo; it != hi; ++it) {
            const auto& [ky, cy] = *it->second;
            std::copy(kx.begin(), kx.end(), key.begin());
            std::copy(ky.begin(), ky.end(), key.begin() + static_cast<std::ptrdiff_t>(kx.size()));
            for (std::size_t p = 0; p < kx.size(); ++p)
                parities[p] = x.parity(p, kx[p]);
            for (std::size_t p = 0; p < ky.size(); ++p)
                parities[kx.size() + p] = y.parity(p, ky[p]);
            detail::contract_into(out, rho, parities, key, checked_mul(cx, cy));
        }
    }
    return out;
}

/// Default contraction x ◊ y = x ◊_{k⁺,1} y (last output of x into first input of y).
inline TensorElement diamond(const TensorElement& x, const TensorElement& y)
{
    return diamond(x, y, x.k_plus(), 1);
}

/// ¤_ij x: self-contraction of the i-th plus factor against the j-th minus
/// factor; survivors keep their order, the contracted pair goes last.
inline TensorElement box(const TensorElement& x, std::size_t i, std::size_t j)
{
    const std::size_t km = x.k_minus(), kp = x.k_plus();
    if (i < 1 || i > kp)
        throw Error(ErrorKind::shape, "box: plus index " + std::to_string(i) + " out of range 1.." + std::to_string(kp));
    if (j < 1 || j > km)
        throw Error(ErrorKind::shape, "box: minus index " + std::to_string(j) + " out of range 1.." + std::to_string(km));
    if (!same_data(x.plus_slots()[i - 1], x.minus_slots()[j - 1]))
        throw Error(ErrorKind::composition, "box: contracted slots come from different data");

    std::vector<std::size_t> images;
    std::vector<DataRef> minus, plus;
    for (std::size_t t = 0; t < km; ++t)
        if (t + 1 != j) {
            images.push_back(t);
            minus.push_back(x.minus_slots()[t]);
        }
    for (std::size_t t = 0; t < kp; ++t)
        if (t + 1 != i) {
            images.push_back(km + t);
            plus.push_back(x.plus_slots()[t]);
        }
    images.push_back(km + i - 1);
    images.push_back(j - 1);
    const Permutation rho(std::move(images));

    TensorElement out(std::move(minus), std::move(plus));
    std::vector<int> parities(x.arity());
    for (const auto& [key, coeff] : x.terms()) {
        for (std::size_t p = 0; p < key.size(); ++p)
            parities[p] = x.parity(p, key[p]);
        detail::contract_into(out, rho, parities, key, coeff);
    }
    return out;
}

/// Full tensor complex CF^*⊗k⁻ ⊗ CF_*⊗k⁺ matching the slots of x; keys map
/// to flat_index of the factor list.
inline std::vector<ChainComplex> slot_complexes(const TensorElement& x)
{
    std::vector<ChainComplex> out;
    for (const auto& d : x.minus_slots())
        out.push_back(build_cf_dual(*d));
    for (const auto& d : x.plus_slots())
        out.push_back(build_cf(*d));
    return out;
}

inline Chain to_chain(const TensorElement& x)
{
    auto factors = slot_complexes(x);
    Chain out;
    std::vector<std::size_t> tuple(x.arity());
    for (const auto& [key, coeff] : x.terms()) {
        std::copy(key.begin(), key.end(), tuple.begin());
        accumulate(out, flat_index(factors, tuple), coeff);
    }
    return out;
}

inline TensorElement from_chain(const TensorElement& shape, const Chain& c)
{
    auto factors = slot_complexes(shape);
    TensorElement out(shape.minus_slots(), shape.plus_slots());
    for (const auto& [idx, v] : c) {
        auto tuple = unflatten_index(factors, idx);
        out.add(TensorElement::Key(tuple.begin(), tuple.end()), v);
    }
    return out;
}

} // namespace floerq

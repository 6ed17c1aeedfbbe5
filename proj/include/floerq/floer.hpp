#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "floerq/chain_complex.hpp"
#include "floerq/error.hpp"
#include "floerq/report.hpp"

namespace floerq {

struct Orbit {
    std::string name;
    std::int64_t mu = 0;

    friend bool operator==(const Orbit&, const Orbit&) = default;
};

/// One moduli count #M¹(from, to).
struct M1Entry {
    std::string from;
    std::string to;
    Int count = 0;

    friend bool operator==(const M1Entry&, const M1Entry&) = default;
};

/// Orbits with grading lifts and the index-one counts between them.
///
/// Construction only records the data; consistency is the business of
/// validate_data so that malformed inputs can be reported rather than thrown.
class FloerData {
public:
    FloerData() = default;

    FloerData(int n, std::int64_t N0, std::int64_t N1, std::vector<Orbit> orbits, std::vector<M1Entry> m1 = {})
        : n_(n), N0_(N0), N1_(N1), orbits_(std::move(orbits)), m1_(std::move(m1))
    {
        for (std::size_t i = 0; i < orbits_.size(); ++i)
            index_.emplace(orbits_[i].name, i);
    }

    int n() const { return n_; }
    std::int64_t N0() const { return N0_; }
    std::int64_t N1() const { return N1_; }
    const std::vector<Orbit>& orbits() const { return orbits_; }
    const std::vector<M1Entry>& m1_entries() const { return m1_; }
    std::size_t size() const { return orbits_.size(); }
    const Orbit& orbit(std::size_t i) const { return orbits_.at(i); }
    std::int64_t mu(std::size_t i) const { return orbits_.at(i).mu; }
    int parity(std::size_t i) const { return static_cast<int>(mod_floor(orbits_.at(i).mu, 2)); }

    /// Grading modulus 2N₀ of the Floer complex (0: integer grading).
    std::int64_t modulus() const { return 2 * N0_; }

    std::optional<std::size_t> find(const std::string& name) const
    {
        auto it = index_.find(name);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t index_of(const std::string& name) const
    {
        auto i = find(name);
        if (!i)
            throw Error(ErrorKind::lookup, "unknown orbit '" + name + "'");
        return *i;
    }

    /// m1 counts by orbit index; unknown names are skipped (validate_data reports them).
    std::map<std::pair<std::size_t, std::size_t>, Int> m1() const
    {
        std::map<std::pair<std::size_t, std::size_t>, Int> out;
        for (const auto& e : m1_) {
            auto a = find(e.from);
            auto b = find(e.to);
            if (!a || !b || e.count == 0)
                continue;
            Int& slot = out[{*a, *b}];
            slot = checked_add(slot, e.count);
            if (slot == 0)
                out.erase({*a, *b});
        }
        return out;
    }

    Int m1(const std::string& from, const std::string& to) const
    {
        auto all = m1();
        auto it = all.find({index_of(from), index_of(to)});
        return it == all.end() ? 0 : it->second;
    }

    friend bool operator==(const FloerData& a, const FloerData& b)
    {
        return a.n_ == b.n_ && a.N0_ == b.N0_ && a.N1_ == b.N1_ && a.orbits_ == b.orbits_ && a.m1_ == b.m1_;
    }

private:
    int n_ = 1;
    std::int64_t N0_ = 0;
    std::int64_t N1_ = 0;
    std::vector<Orbit> orbits_;
    std::vector<M1Entry> m1_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Checks on FloerData: shape, degree congruence of counts, vanishing of the
/// count convolution, and the contractibility hypothesis (as a note).
inline Report validate_data(const FloerData& data, bool strict = false)
{
    Report r;
    r.ran("data.shape");
    if (data.n() <= 0)
        r.add("data.shape", Severity::error, "half-dimension n must be positive", "n=" + std::to_string(data.n()));
    if (data.N0() < 0 || data.N1() < 0)
        r.add("data.shape", Severity::error, "minimal Chern numbers must be non-negative");
    if (data.N0() > 0 && data.N1() > 0 && data.N0() % data.N1() != 0)
        r.add("data.shape", Severity::error, "N1 must divide N0",
              "N0=" + std::to_string(data.N0()) + " N1=" + std::to_string(data.N1()));
    if (data.N0() == 0 && data.N1() != 0)
        r.add("data.shape", Severity::error, "N0 = 0 requires N1 = 0", "N1=" + std::to_string(data.N1()));

    r.ran("data.unique-names");
    std::set<std::string> seen;
    for (const auto& o : data.orbits())
        if (!seen.insert(o.name).second)
            r.add("data.unique-names", Severity::error, "duplicate orbit name", o.name);

    r.ran("data.m1-references");
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& e : data.m1_entries()) {
        if (!data.find(e.from))
            r.add("data.m1-references", Severity::error, "m1 entry names an unknown orbit", e.from);
        if (!data.find(e.to))
            r.add("data.m1-references", Severity::error, "m1 entry names an unknown orbit", e.to);
        if (!pairs.insert({e.from, e.to}).second)
            r.add("data.m1-references", Severity::error, "duplicate m1 entry", e.from + " -> " + e.to);
    }

    r.ran("data.degree-congruence");
    const auto m1 = data.m1();
    for (const auto& [ab, v] : m1) {
        const auto& a = data.orbit(ab.first);
        const auto& b = data.orbit(ab.second);
        if (!congruent(a.mu - b.mu, 1, data.modulus()))
            r.add("data.degree-congruence", strict ? Severity::error : Severity::warning,
                  "count between orbits whose degrees do not differ by 1 mod 2N0",
                  a.name + " -> " + b.name + " (mu " + std::to_string(a.mu) + ", " + std::to_string(b.mu) +
                      ", count " + std::to_string(v) + ")");
    }

    r.ran("data.convolution");
    std::map<std::pair<std::size_t, std::size_t>, Int> conv;
    for (const auto& [ab, v] : m1)
        for (const auto& [bc, w] : m1)
            if (ab.second == bc.first) {
                Int& slot = conv[{ab.first, bc.second}];
                slot = checked_add(slot, checked_mul(v, w));
            }
    for (const auto& [ac, v] : conv)
        if (v != 0)
            r.add("data.convolution", Severity::error, "sum over intermediate orbits of m1*m1 is " + std::to_string(v),
                  data.orbit(ac.first).name + " -> " + data.orbit(ac.second).name);

    r.ran("data.contractible");
    r.add("data.contractible", Severity::note,
          "orbits are assumed contractible; genus-raising identities rely on it");
    return r;
}

namespace detail {

inline void require_valid(const FloerData& data)
{
    Report r = validate_data(data, true);
    if (const Finding* f = r.first_error())
        throw Error(ErrorKind::validation, f->check + ": " + f->message + (f->witness.empty() ? "" : " [" + f->witness + "]"));
}

inline GradedBasis orbit_basis(const FloerData& data, bool cochain)
{
    GradedBasis basis(data.modulus());
    for (const auto& o : data.orbits())
        basis.add(cochain ? o.name + dual_suffix : o.name, cochain ? -o.mu : o.mu);
    return basis;
}

} // namespace detail

/// CF_*: dα = Σ_β (-1)^{μ(β)} m1(α,β) β.
inline ChainComplex build_cf(const FloerData& data)
{
    detail::require_valid(data);
    SparseMatrix d(data.size(), data.size());
    for (const auto& [ab, v] : data.m1())
        d.add(ab.second, ab.first, checked_mul(sign_power(data.mu(ab.second)), v));
    return ChainComplex(detail::orbit_basis(data, false), std::move(d));
}

/// CF^*: generator α^ in degree -μ(α), d*α = Σ_β m1(β,α) β.
inline ChainComplex build_cf_dual(const FloerData& data)
{
    detail::require_valid(data);
    SparseMatrix d(data.size(), data.size());
    for (const auto& [ba, v] : data.m1())
        d.add(ba.first, ba.second, v);
    return ChainComplex(detail::orbit_basis(data, true), std::move(d));
}

/// <α, β> = 1 if α = β, else 0.
inline Int pairing(const FloerData& data, const std::string& alpha, const std::string& beta)
{
    return data.index_of(alpha) == data.index_of(beta) ? 1 : 0;
}

} // namespace floerq

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "floerq/error.hpp"
#include "floerq/floer.hpp"
#include "floerq/report.hpp"
#include "floerq/tensor_element.hpp"

namespace floerq {

/// Surface type Σ_{g,k⁻,k⁺}.
struct SlotKey {
    int g = 0;
    int k_minus = 0;
    int k_plus = 0;

    friend auto operator<=>(const SlotKey&, const SlotKey&) = default;

    std::string to_string() const
    {
        return "(" + std::to_string(g) + "," + std::to_string(k_minus) + "," + std::to_string(k_plus) + ")";
    }
};

/// Orbit names of one table entry: minus tuple, then plus tuple.
using OrbitTuple = std::pair<std::vector<std::string>, std::vector<std::string>>;

/// Face ∂^side_ν of a q-simplex, ν in 1..q, side in {0,1}.
using FaceKey = std::pair<int, int>;

/// Counts #M⁰_σ for one parameter simplex σ of dimension q.
///
/// `minus_data` / `plus_data` name the data sets the slots draw from inside a
/// document; both are "data" except for continuation tables.
struct CountTable {
    SlotKey key;
    int q = 0;
    std::string label;
    std::map<OrbitTuple, Int> entries;
    std::map<FaceKey, std::string> faces;
    std::string minus_data = "data";
    std::string plus_data = "data";

    void set(const std::vector<std::string>& minus, const std::vector<std::string>& plus, Int count)
    {
        if (count == 0)
            entries.erase({minus, plus});
        else
            entries[{minus, plus}] = count;
    }

    Int count(const std::vector<std::string>& minus, const std::vector<std::string>& plus) const
    {
        auto it = entries.find({minus, plus});
        return it == entries.end() ? 0 : it->second;
    }

    friend bool operator==(const CountTable&, const CountTable&) = default;
};

/// Tables addressed by label.
using TableSet = std::map<std::string, CountTable>;

inline std::string describe(const OrbitTuple& t)
{
    std::string out = "(";
    for (std::size_t i = 0; i < t.first.size(); ++i)
        out += (i ? "," : "") + t.first[i];
    out += ";";
    for (std::size_t i = 0; i < t.second.size(); ++i)
        out += (i ? "," : "") + t.second[i];
    return out + ")";
}

/// Sign (-1)^{q(q-1)/2} of Q on a q-simplex.
constexpr int q_sign(int q) { return sign_power(static_cast<std::int64_t>(q) * (q - 1) / 2); }

/// Degree congruence, orbit references, and face structure of a table.
/// `all` supplies the face tables; without it face targets are not inspected.
inline Report check_table(const CountTable& t, const FloerData& minus_data, const FloerData& plus_data,
                          bool strict = false, const TableSet* all = nullptr)
{
    Report r;
    const std::string where = "table '" + t.label + "'";
    r.ran("table.shape");
    if (t.key.g < 0 || t.key.k_minus < 0 || t.key.k_plus < 0 || t.q < 0)
        r.add("table.shape", Severity::error, where + ": negative slot key or dimension");
    bool names_ok = true;
    for (const auto& [tuple, count] : t.entries) {
        if (tuple.first.size() != static_cast<std::size_t>(t.key.k_minus) ||
            tuple.second.size() != static_cast<std::size_t>(t.key.k_plus)) {
            r.add("table.shape", Severity::error, where + ": entry arity does not match " + t.key.to_string(),
                  describe(tuple));
            names_ok = false;
            continue;
        }
        for (const auto& name : tuple.first)
            if (!minus_data.find(name)) {
                r.add("table.shape", Severity::error, where + ": unknown orbit '" + name + "'", describe(tuple));
                names_ok = false;
            }
        for (const auto& name : tuple.second)
            if (!plus_data.find(name)) {
                r.add("table.shape", Severity::error, where + ": unknown orbit '" + name + "'", describe(tuple));
                names_ok = false;
            }
    }

    r.ran("table.degree-congruence");
    if (names_ok) {
        const std::int64_t modulus = t.key.g == 0 ? 2 * minus_data.N0() : 2 * minus_data.N1();
        const std::int64_t expected =
            t.q + 2 * static_cast<std::int64_t>(minus_data.n()) * (1 - t.key.g - t.key.k_minus);
        for (const auto& [tuple, count] : t.entries) {
            std::int64_t deg = 0;
            for (const auto& name : tuple.first)
                deg -= minus_data.mu(minus_data.index_of(name));
            for (const auto& name : tuple.second)
                deg += plus_data.mu(plus_data.index_of(name));
            if (!congruent(deg, expected, modulus))
                r.add("table.degree-congruence", strict ? Severity::error : Severity::warning,
                      where + ": entry degree " + std::to_string(deg) + " is not congruent to " +
                          std::to_string(expected) + " mod " + std::to_string(modulus),
                      describe(tuple) + " count " + std::to_string(count));
        }
    }

    r.ran("table.faces");
    if (t.q == 0 && !t.faces.empty())
        r.add("table.faces", Severity::error, where + ": a q=0 table has no faces");
    for (int nu = 1; nu <= t.q; ++nu)
        for (int side = 0; side <= 1; ++side) {
            auto it = t.faces.find({nu, side});
            const std::string face = std::to_string(nu) + "," + std::to_string(side);
            if (it == t.faces.end()) {
                r.add("table.faces", Severity::error, where + ": missing face", face);
                continue;
            }
            if (!all)
                continue;
            auto ft = all->find(it->second);
            if (ft == all->end())
                r.add("table.faces", Severity::error, where + ": face refers to unknown table '" + it->second + "'", face);
            else if (ft->second.key != t.key || ft->second.q != t.q - 1)
                r.add("table.faces", Severity::error,
                      where + ": face table '" + it->second + "' has the wrong slot key or dimension", face);
        }
    for (const auto& [fk, label] : t.faces)
        if (fk.first < 1 || fk.first > t.q || fk.second < 0 || fk.second > 1)
            r.add("table.faces", Severity::error, where + ": face index out of range",
                  std::to_string(fk.first) + "," + std::to_string(fk.second));
    return r;
}

inline Report check_table(const CountTable& t, const FloerData& data, bool strict = false, const TableSet* all = nullptr)
{
    return check_table(t, data, data, strict, all);
}

/// Qσ = (-1)^{q(q-1)/2} Σ #M⁰_σ(α⁻; α⁺) α⁻₁⊗…⊗α⁻_{k⁻}⊗α⁺₁⊗…⊗α⁺_{k⁺}.
/// In strict mode a table failing check_table is rejected before evaluation.
inline TensorElement q_of_table(const CountTable& t, const DataRef& minus_data, const DataRef& plus_data,
                                bool strict = false)
{
    if (strict) {
        Report r = check_table(t, *minus_data, *plus_data, true);
        if (const Finding* f = r.first_error())
            throw Error(ErrorKind::validation, f->message + (f->witness.empty() ? "" : " [" + f->witness + "]"));
    }
    TensorElement out(std::vector<DataRef>(static_cast<std::size_t>(t.key.k_minus), minus_data),
                      std::vector<DataRef>(static_cast<std::size_t>(t.key.k_plus), plus_data));
    const int s = q_sign(t.q);
    for (const auto& [tuple, count] : t.entries)
        out.add(tuple.first, tuple.second, checked_mul(s, count));
    return out;
}

inline TensorElement q_of_table(const CountTable& t, const DataRef& data, bool strict = false)
{
    return q_of_table(t, data, data, strict);
}

/// Inverse of q_of_table for an element with uniform slot data.
inline CountTable table_of_q(const TensorElement& x, SlotKey key, int q, std::string label)
{
    if (x.k_minus() != static_cast<std::size_t>(key.k_minus) || x.k_plus() != static_cast<std::size_t>(key.k_plus))
        throw Error(ErrorKind::shape, "tensor arity does not match slot key " + key.to_string());
    CountTable t;
    t.key = key;
    t.q = q;
    t.label = std::move(label);
    const int s = q_sign(q);
    for (const auto& [k, v] : x.terms()) {
        OrbitTuple tuple;
        for (std::size_t p = 0; p < k.size(); ++p)
            (p < x.k_minus() ? tuple.first : tuple.second).push_back(x.slot_data(p).orbit(k[p]).name);
        t.entries[tuple] = checked_mul(s, v);
    }
    return t;
}

namespace detail {

inline std::string first_difference(const TensorElement& a, const TensorElement& b)
{
    TensorElement diff = a - b;
    if (diff.is_zero())
        return {};
    const auto& [k, v] = *diff.terms().begin();
    TensorElement single(diff.minus_slots(), diff.plus_slots());
    single.add(k, 1);
    return single.to_string() + ": " + std::to_string(a.coefficient(k)) + " vs " + std::to_string(b.coefficient(k));
}

inline const CountTable& face_table(const CountTable& t, int nu, int side, const TableSet& all)
{
    auto f = t.faces.find({nu, side});
    if (f == t.faces.end())
        throw Error(ErrorKind::missing_table, "table '" + t.label + "' lacks face " + std::to_string(nu) + "," +
                                                  std::to_string(side));
    auto it = all.find(f->second);
    if (it == all.end())
        throw Error(ErrorKind::missing_table, "face table '" + f->second + "' not found");
    return it->second;
}

} // namespace detail

/// Q(dσ) for a table with faces: Σ_ν (-1)^{ν+1} (Q∂¹_νσ - Q∂⁰_νσ).
inline TensorElement q_of_boundary(const CountTable& t, const DataRef& data, const TableSet& all)
{
    TensorElement out = TensorElement::over(data, static_cast<std::size_t>(t.key.k_minus),
                                            static_cast<std::size_t>(t.key.k_plus));
    for (int nu = 1; nu <= t.q; ++nu) {
        TensorElement face = q_of_table(detail::face_table(t, nu, 1, all), data) -
                             q_of_table(detail::face_table(t, nu, 0, all), data);
        out += sign_power(nu + 1) * face;
    }
    return out;
}

/// dQσ = Q(dσ); for q = 0 this says Qσ is a cycle.
inline Report check_cycle(const CountTable& t, const DataRef& data, const TableSet* all = nullptr)
{
    Report r;
    r.ran("cycle:" + t.label);
    TensorElement dq = differential(q_of_table(t, data));
    TensorElement expected = TensorElement::over(data, static_cast<std::size_t>(t.key.k_minus),
                                                 static_cast<std::size_t>(t.key.k_plus));
    if (t.q > 0) {
        if (!all)
            throw Error(ErrorKind::missing_table, "check_cycle on a q>0 table needs its face tables");
        expected = q_of_boundary(t, data, *all);
    }
    if (!(dq == expected))
        r.add("cycle:" + t.label, Severity::error,
              t.q == 0 ? "Q of table '" + t.label + "' is not a cycle"
                       : "dQ of table '" + t.label + "' differs from Q of its boundary",
              detail::first_difference(dq, expected));
    return r;
}

/// Key of σ₁ ◊_ij σ₂, validating that the keys compose.
inline SlotKey glued_key(const CountTable& t1, const CountTable& t2, std::size_t i, std::size_t j)
{
    if (t1.key.k_plus < 1 || t2.key.k_minus < 1)
        throw Error(ErrorKind::composition, "gluing needs an output of '" + t1.label + "' and an input of '" +
                                                t2.label + "'");
    if (i < 1 || i > static_cast<std::size_t>(t1.key.k_plus) || j < 1 || j > static_cast<std::size_t>(t2.key.k_minus))
        throw Error(ErrorKind::composition, "gluing indices out of range");
    return {t1.key.g + t2.key.g, t1.key.k_minus + t2.key.k_minus - 1, t1.key.k_plus - 1 + t2.key.k_plus};
}

/// Counts of the glued simplex, determined by Q(σ₁◊σ₂) = Qσ₁ ◊_ij Qσ₂.
inline CountTable glue_tables(const CountTable& t1, const CountTable& t2, std::size_t i, std::size_t j,
                              const DataRef& data, std::string label)
{
    SlotKey key = glued_key(t1, t2, i, j);
    return table_of_q(diamond(q_of_table(t1, data), q_of_table(t2, data), i, j), key, t1.q + t2.q, std::move(label));
}

/// Q(t3) = Q(t1) ◊_ij Q(t2): the counts of t3 equal the α₀-convolution of the
/// counts of t1 and t2 with the permutation signs and (-1)^{q₁q₂}.
inline Report check_gluing(const CountTable& t1, const CountTable& t2, const CountTable& t3, std::size_t i,
                           std::size_t j, const DataRef& data)
{
    const std::string name = "gluing:" + t1.label + "◊" + std::to_string(i) + std::to_string(j) + t2.label + "=" + t3.label;
    Report r;
    r.ran(name);
    SlotKey key = glued_key(t1, t2, i, j);
    if (key != t3.key)
        throw Error(ErrorKind::composition, "table '" + t3.label + "' has key " + t3.key.to_string() +
                                                ", gluing produces " + key.to_string());
    if (t3.q != t1.q + t2.q)
        throw Error(ErrorKind::composition, "table '" + t3.label + "' has the wrong simplex dimension");
    TensorElement glued = diamond(q_of_table(t1, data), q_of_table(t2, data), i, j);
    TensorElement supplied = q_of_table(t3, data);
    if (!(glued == supplied))
        r.add(name, Severity::error, "glued counts differ from table '" + t3.label + "'",
              detail::first_difference(supplied, glued));
    return r;
}

/// Q(t_out) = ¤_ij Q(t_in), raising the genus by one.
inline Report check_self_gluing(const CountTable& t_in, const CountTable& t_out, std::size_t i, std::size_t j,
                                const DataRef& data)
{
    const std::string name = "self-gluing:" + t_in.label + "=" + t_out.label;
    Report r;
    r.ran(name);
    SlotKey expected{t_in.key.g + 1, t_in.key.k_minus - 1, t_in.key.k_plus - 1};
    if (t_in.key.k_minus < 1 || t_in.key.k_plus < 1 || t_out.key != expected || t_out.q != t_in.q)
        throw Error(ErrorKind::composition, "table '" + t_out.label + "' is not the self-gluing of '" + t_in.label + "'");
    TensorElement traced = box(q_of_table(t_in, data), i, j);
    TensorElement supplied = q_of_table(t_out, data);
    if (!(traced == supplied))
        r.add(name, Severity::error, "traced counts differ from table '" + t_out.label + "'",
              detail::first_difference(supplied, traced));
    return r;
}

} // namespace floerq

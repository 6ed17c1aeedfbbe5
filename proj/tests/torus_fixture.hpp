#pragma once

// Torus data shared by the product tests and the acceptance run.

#include <bit>
#include <optional>
#include <string>

#include "floerq/floerq.hpp"

namespace fixture {

using namespace floerq;

struct Torus {
    DataRef data;
    ThetaBundle theta;

    explicit Torus(int d)
    {
        TorusModel model = TorusModel::standard(d);
        data = share(generate_data(model));
        theta = ThetaBundle(data, generate_theta_tables(model));
    }

    std::string name(std::uint32_t mask) const
    {
        const int d = static_cast<int>(data->n()) * 2;
        std::string s = "p";
        for (int f = 0; f < d; ++f)
            s += ((mask >> f) & 1u) ? '1' : '0';
        return s;
    }
};

inline const Torus& t2()
{
    static const Torus t(2);
    return t;
}

inline const Torus& t4()
{
    static const Torus t(4);
    return t;
}

inline std::vector<TensorElement> cochains(const Torus& t)
{
    std::vector<TensorElement> out;
    for (const auto& o : t.data->orbits())
        out.push_back(basis_cochain(t.data, o.name));
    return out;
}

inline std::vector<TensorElement> chains(const Torus& t)
{
    std::vector<TensorElement> out;
    for (const auto& o : t.data->orbits())
        out.push_back(basis_chain(t.data, o.name));
    return out;
}

inline std::int64_t deg(const TensorElement& x) { return floer_degree(x).value(); }

/// Relabeling of ψ_S to ±[p_S^]: ε(single) = +1, and ε(S) is forced by
/// ψ_{min S} ∪ ψ_{S∖min} = ψ_S in the oracle.
inline std::map<std::uint32_t, Int> derive_relabeling(const Torus& t, const SimplicialOracle& o)
{
    std::map<std::uint32_t, Int> eps;
    eps[0] = 1;
    const std::uint32_t full = (1u << o.d) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        if (std::popcount(mask) == 1) {
            eps[mask] = 1;
            continue;
        }
        int low = std::countr_zero(mask);
        std::uint32_t s = 1u << low, rest = mask & ~s;
        Int oracle_coeff = o.product.at({s, rest}).at(mask);
        TensorElement prod = cup(basis_cochain(t.data, t.name(s)), basis_cochain(t.data, t.name(rest)), t.theta).element;
        Int floer_coeff = prod.coefficient({t.name(mask)}, {});
        eps[mask] = floer_coeff * eps[s] * eps[rest] * oracle_coeff;
    }
    return eps;
}

/// First pair (S, T) where ε_S ψ_S ∪ ε_T ψ_T differs between the Floer cup
/// product and the simplicial oracle.
inline std::optional<std::string> oracle_mismatch(const Torus& t, int d)
{
    SimplicialOracle o = simplicial_oracle(d);
    if (!o.psi_basis)
        return "oracle classes are not a basis";
    auto eps = derive_relabeling(t, o);
    const std::uint32_t full = (1u << d) - 1;
    for (std::uint32_t s = 0; s <= full; ++s)
        for (std::uint32_t u = 0; u <= full; ++u) {
            TensorElement lhs = cup(eps[s] * basis_cochain(t.data, t.name(s)),
                                    eps[u] * basis_cochain(t.data, t.name(u)), t.theta)
                                    .element;
            TensorElement rhs = TensorElement::over(t.data, 1, 0);
            auto it = o.product.find({s, u});
            if (it != o.product.end())
                for (const auto& [w, c] : it->second)
                    rhs.add({t.name(w)}, {}, c * eps[w]);
            if (!(lhs == rhs))
                return "S=" + std::to_string(s) + " T=" + std::to_string(u) + ": " + lhs.to_string() + " vs " +
                       rhs.to_string();
        }
    return std::nullopt;
}

inline FloerData relabeled(const FloerData& d, const std::string& prefix)
{
    std::vector<Orbit> orbits;
    for (auto it = d.orbits().rbegin(); it != d.orbits().rend(); ++it)
        orbits.push_back({prefix + it->name, it->mu});
    return FloerData(d.n(), d.N0(), d.N1(), orbits);
}

inline CountTable relabel_table(const FloerData& from, const std::string& from_prefix, const std::string& to_prefix)
{
    CountTable t;
    t.key = theta_identity;
    t.label = "L";
    for (const auto& o : from.orbits()) {
        std::string base = o.name.substr(from_prefix.size());
        t.set({o.name}, {to_prefix + base}, 1);
    }
    return t;
}

} // namespace fixture

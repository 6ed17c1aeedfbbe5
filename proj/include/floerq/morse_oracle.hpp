#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "floerq/chain_complex.hpp"
#include "floerq/error.hpp"
#include "floerq/floer.hpp"
#include "floerq/graded.hpp"
#include "floerq/homology.hpp"
#include "floerq/smith.hpp"
#include "floerq/tables.hpp"

namespace floerq {

/// f(θ) = Σ a_f cos θ_f on the flat torus T^d.
struct TorusModel {
    int d = 2;
    std::vector<double> amplitudes;

    static TorusModel standard(int d)
    {
        TorusModel m;
        m.d = d;
        for (int f = 0; f < d; ++f)
            m.amplitudes.push_back(1.0 + 0.25 * f);
        return m;
    }

    void validate() const
    {
        if (d <= 0 || d % 2 != 0)
            throw Error(ErrorKind::shape, "torus dimension must be even and positive");
        if (amplitudes.size() != static_cast<std::size_t>(d))
            throw Error(ErrorKind::shape, "need one amplitude per circle factor");
        for (std::size_t i = 0; i < amplitudes.size(); ++i) {
            if (!(amplitudes[i] > 0))
                throw Error(ErrorKind::shape, "amplitudes must be positive");
            for (std::size_t j = 0; j < i; ++j)
                if (amplitudes[i] == amplitudes[j])
                    throw Error(ErrorKind::genericity, "amplitudes must be distinct; perturb the amplitudes");
        }
    }
};

/// Critical point with s_f = 1 where θ_f = 0 (the maximum of the factor).
using SignPattern = std::vector<int>;

inline std::string orbit_name(const SignPattern& s)
{
    std::string name = "p";
    for (int bit : s)
        name += bit ? '1' : '0';
    return name;
}

inline int morse_index(const SignPattern& s) { return static_cast<int>(std::count(s.begin(), s.end(), 1)); }

/// All 2^d critical points, by index and then lexicographically.
inline std::vector<SignPattern> critical_points(int d)
{
    std::vector<SignPattern> out;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        SignPattern s(static_cast<std::size_t>(d));
        for (int f = 0; f < d; ++f)
            s[static_cast<std::size_t>(f)] = (mask >> (d - 1 - f)) & 1u;
        out.push_back(std::move(s));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const SignPattern& a, const SignPattern& b) { return morse_index(a) < morse_index(b); });
    return out;
}

inline SignPattern parse_orbit_name(const std::string& name, int d)
{
    if (name.size() != static_cast<std::size_t>(d) + 1 || name[0] != 'p')
        throw Error(ErrorKind::lookup, "not a torus critical point name: '" + name + "'");
    SignPattern s;
    for (std::size_t i = 1; i < name.size(); ++i) {
        if (name[i] != '0' && name[i] != '1')
            throw Error(ErrorKind::lookup, "not a torus critical point name: '" + name + "'");
        s.push_back(name[i] - '0');
    }
    return s;
}

/// Signed gradient lines on one circle from the maximum to the minimum: the
/// two arcs, with opposite orientation signs.
inline std::vector<Int> circle_flow_lines() { return {+1, -1}; }

/// Orbits with μ = Morse index; m1 from the factorwise flow lines (all
/// signed counts cancel, so no entries are emitted).
inline FloerData generate_data(const TorusModel& model)
{
    model.validate();
    std::vector<Orbit> orbits;
    for (const auto& s : critical_points(model.d))
        orbits.push_back({orbit_name(s), morse_index(s)});
    std::vector<M1Entry> m1;
    const auto points = critical_points(model.d);
    for (const auto& a : points)
        for (const auto& b : points) {
            int differing = -1, count = 0;
            for (int f = 0; f < model.d; ++f)
                if (a[static_cast<std::size_t>(f)] != b[static_cast<std::size_t>(f)]) {
                    differing = f;
                    ++count;
                }
            if (count != 1 || a[static_cast<std::size_t>(differing)] != 1)
                continue;
            Int total = 0;
            for (Int line : circle_flow_lines())
                total += line;
            if (total != 0)
                m1.push_back({orbit_name(a), orbit_name(b), total});
        }
    return FloerData(model.d / 2, 0, 0, std::move(orbits), std::move(m1));
}

inline constexpr std::size_t default_samples = std::size_t{1} << 12;

namespace detail {

/// Slot s of factor f uses a cos(θ - φ), φ a small slot-dependent shift.
inline double slot_shift(double amplitude, std::size_t slot)
{
    return 0.05 * static_cast<double>(slot + 1) + 0.01 * amplitude / (1.0 + amplitude);
}

/// Position of the critical point of a cos(θ - φ): the maximum sits at φ, the minimum at φ + π.
struct SlotConstraint {
    double shift;
    bool at_max;   // which critical point is involved
    bool is_point; // vertex must sit at it (true) or must avoid it (false)
};

/// Derivative of a cos(θ - φ).
inline double slope(double amplitude, double shift, double theta) { return -amplitude * std::sin(theta - shift); }

/// Whether [ta, tb] is certified to contain the maximum (or minimum) of
/// a cos(θ - φ): the derivative changes sign in the right direction.
inline bool brackets(double amplitude, const SlotConstraint& c, double ta, double tb)
{
    const double fa = slope(amplitude, c.shift, ta);
    const double fb = slope(amplitude, c.shift, tb);
    return c.at_max ? (fa > 0 && fb <= 0) : (fa < 0 && fb >= 0);
}

} // namespace detail

/// Number of star trees on one circle factor: a vertex θ joined by gradient
/// half-lines to the slots' critical points. Slot states are 1 (max) or 0
/// (min), minus slots first. A minus slot at its minimum pins the vertex
/// there (otherwise the vertex must avoid that minimum); a plus slot at its
/// maximum pins the vertex (otherwise it must avoid that maximum).
///
/// The vertex is located by scanning `samples` intervals for certified sign
/// changes; a bracket that also contains an avoided point is a genericity
/// failure. Returns the signed count.
inline Int circle_tree_count(double amplitude, std::size_t k_minus, const std::vector<int>& states,
                             std::size_t samples = default_samples)
{
    std::vector<detail::SlotConstraint> slots;
    std::vector<std::size_t> pinned;
    for (std::size_t s = 0; s < states.size(); ++s) {
        const bool minus = s < k_minus;
        const bool at_max = !minus;
        const bool is_point = minus ? states[s] == 0 : states[s] == 1;
        slots.push_back({detail::slot_shift(amplitude, s), at_max, is_point});
        if (is_point)
            pinned.push_back(s);
    }
    if (pinned.size() != 1)
        return 0;
    const std::size_t star = pinned[0];
    const double two_pi = 2.0 * std::numbers::pi;
    Int count = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double ta = two_pi * static_cast<double>(i) / static_cast<double>(samples);
        const double tb = two_pi * static_cast<double>(i + 1) / static_cast<double>(samples);
        if (!detail::brackets(amplitude, slots[star], ta, tb))
            continue;
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (s != star && detail::brackets(amplitude, slots[s], ta, tb))
                throw Error(ErrorKind::genericity,
                            "tree vertex cannot be separated from an excluded critical point at " +
                                std::to_string(samples) + " samples; perturb the amplitudes");
        ++count;
    }
    // Orientation comparison of the pinned vertex: a pinned minimum carries
    // its coorientation past the odd slots after it.
    int passed = 0;
    for (std::size_t s = star + 1; s < states.size(); ++s)
        passed += states[s];
    const int orientation = sign_power((1 - states[star]) * passed);
    return orientation * count;
}

/// Global sign normalization of the generated Θ-classes.
inline int theta_normalization(SlotKey key, int d)
{
    if (key.k_minus == 0)
        return sign_power(static_cast<std::int64_t>(d) * (d - 1) / 2);
    return 1;
}

/// κ(α) = (-1)^{C(|α|,2)}: identification of the dual of a tensor product of
/// circle complexes with the tensor product of the duals.
inline int dual_tensor_sign(const SignPattern& s)
{
    const std::int64_t m = morse_index(s);
    return sign_power(m * (m - 1) / 2);
}

/// Θ_{0,k⁻,k⁺} counts on T^d as the Koszul product of circle star-tree counts.
inline CountTable generate_table(const TorusModel& model, SlotKey key, std::string label,
                                 std::size_t samples = default_samples)
{
    model.validate();
    if (key.g != 0)
        throw Error(ErrorKind::shape, "only genus-zero tables are generated");
    const std::size_t km = static_cast<std::size_t>(key.k_minus);
    const std::size_t k = km + static_cast<std::size_t>(key.k_plus);
    const std::size_t d = static_cast<std::size_t>(model.d);

    // Nonzero circle configurations per factor.
    struct CircleTerm {
        std::vector<int> states;
        Int count;
    };
    std::vector<std::vector<CircleTerm>> per_factor(d);
    for (std::size_t f = 0; f < d; ++f)
        for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
            std::vector<int> states(k);
            for (std::size_t s = 0; s < k; ++s)
                states[s] = (mask >> s) & 1u;
            Int c = circle_tree_count(model.amplitudes[f], km, states, samples);
            if (c != 0)
                per_factor[f].push_back({std::move(states), c});
        }

    // Factor-major item (f, s) sits at position f*k + s; slot-major order lists (f, s) by s then f.
    std::vector<std::size_t> images;
    for (std::size_t s = 0; s < k; ++s)
        for (std::size_t f = 0; f < d; ++f)
            images.push_back(f * k + s);
    const Permutation to_slot_major(std::move(images));

    CountTable t;
    t.key = key;
    t.label = std::move(label);
    const int eps = theta_normalization(key, model.d);
    std::vector<std::size_t> choice(d, 0);
    std::vector<int> parities(d * k);
    while (true) {
        Int value = eps;
        std::vector<SignPattern> slots(k, SignPattern(d));
        bool empty = false;
        for (std::size_t f = 0; f < d; ++f) {
            if (per_factor[f].empty()) {
                empty = true;
                break;
            }
            const auto& term = per_factor[f][choice[f]];
            value *= term.count;
            for (std::size_t s = 0; s < k; ++s) {
                slots[s][f] = term.states[s];
                parities[f * k + s] = term.states[s];
            }
        }
        if (empty)
            break;
        value *= graded_sign_parities(to_slot_major, parities);
        OrbitTuple tuple;
        for (std::size_t s = 0; s < k; ++s) {
            if (s < km) {
                value *= dual_tensor_sign(slots[s]);
                tuple.first.push_back(orbit_name(slots[s]));
            } else {
                tuple.second.push_back(orbit_name(slots[s]));
            }
        }
        t.entries[tuple] = checked_add(t.count(tuple.first, tuple.second), value);
        if (t.entries[tuple] == 0)
            t.entries.erase(tuple);

        std::size_t f = 0;
        while (f < d && ++choice[f] == per_factor[f].size()) {
            choice[f] = 0;
            ++f;
        }
        if (f == d)
            break;
    }
    return t;
}

inline std::string theta_label(SlotKey key)
{
    return "theta_" + std::to_string(key.g) + "_" + std::to_string(key.k_minus) + "_" + std::to_string(key.k_plus);
}

/// The generated Θ-classes: pants, copants, both dualities, unit, top, and the
/// four-punctured sphere.
inline const std::vector<SlotKey>& generated_keys()
{
    static const std::vector<SlotKey> keys = {{0, 1, 2}, {0, 2, 1}, {0, 2, 0}, {0, 0, 2},
                                              {0, 1, 0}, {0, 0, 1}, {0, 1, 3}};
    return keys;
}

inline std::vector<CountTable> generate_theta_tables(const TorusModel& model, std::size_t samples = default_samples)
{
    std::vector<CountTable> out;
    for (const auto& key : generated_keys())
        out.push_back(generate_table(model, key, theta_label(key), samples));
    return out;
}

/// Cohomology ring of T^d computed from the product simplicial set
/// (S¹ = Δ¹/∂Δ¹)^d with the Alexander–Whitney cup product.
struct SimplicialOracle {
    int d = 0;
    std::vector<std::size_t> betti;
    /// ψ_S = ψ_{s1} ∪ … ∪ ψ_{sk} for sorted S (as a bitmask over factors, bit f
    /// for factor f), ψ_f the pullback of the circle's fundamental cocycle.
    /// product[{S,T}] = coordinates of ψ_S ∪ ψ_T on the basis {ψ_U : |U| = |S|+|T|}.
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::map<std::uint32_t, Int>> product;
    bool psi_basis = false; // {ψ_S} is a Z-basis of H^*

    Int euler() const
    {
        Int chi = 0;
        for (std::size_t k = 0; k < betti.size(); ++k)
            chi += sign_power(static_cast<std::int64_t>(k)) * static_cast<Int>(betti[k]);
        return chi;
    }
};

namespace detail {

/// An n-simplex of (S¹)^d: per factor the number z of leading zeros of the
/// vertex sequence 0..0 1..1, with z = n+1 the constant (base point) simplex.
using Simplex = std::vector<int>;

struct SimplicialTorus {
    int d;
    std::vector<std::vector<Simplex>> simplices; // by dimension, nondegenerate only
    std::vector<std::map<Simplex, std::size_t>> index;

    static bool nondegenerate(const Simplex& z, int n)
    {
        for (int j = 1; j <= n; ++j)
            if (std::find(z.begin(), z.end(), j) == z.end())
                return false;
        return true;
    }

    explicit SimplicialTorus(int d_) : d(d_)
    {
        simplices.resize(static_cast<std::size_t>(d) + 1);
        index.resize(static_cast<std::size_t>(d) + 1);
        for (int n = 0; n <= d; ++n) {
            Simplex z(static_cast<std::size_t>(d), 1);
            while (true) {
                if (nondegenerate(z, n)) {
                    index[static_cast<std::size_t>(n)][z] = simplices[static_cast<std::size_t>(n)].size();
                    simplices[static_cast<std::size_t>(n)].push_back(z);
                }
                std::size_t f = 0;
                while (f < z.size() && ++z[f] > n + 1) {
                    z[f] = 1;
                    ++f;
                }
                if (f == z.size())
                    break;
            }
        }
    }

    /// Face d_i of an n-simplex (vertex i deleted).
    static Simplex face(const Simplex& z, int n, int i)
    {
        Simplex out = z;
        for (auto& zf : out) {
            zf -= (i < zf) ? 1 : 0;
            if (zf == 0 || zf > n)
                zf = n; // constant simplex of dimension n-1
        }
        return out;
    }

    /// Front face on vertices 0..p.
    static Simplex front(const Simplex& z, int p)
    {
        Simplex out = z;
        for (auto& zf : out)
            zf = std::min(zf, p + 1);
        return out;
    }

    /// Back face on vertices p..n.
    static Simplex back(const Simplex& z, int n, int p)
    {
        Simplex out = z;
        for (auto& zf : out) {
            zf = zf - p;
            if (zf <= 0 || zf > n - p)
                zf = n - p + 1;
        }
        return out;
    }

    std::optional<std::size_t> find(const Simplex& z, int n) const
    {
        auto it = index[static_cast<std::size_t>(n)].find(z);
        if (it == index[static_cast<std::size_t>(n)].end())
            return std::nullopt;
        return it->second;
    }

    /// Normalized chain complex, generators of all dimensions in one basis.
    ChainComplex chain_complex(std::vector<std::size_t>& offset) const
    {
        GradedBasis basis(0);
        offset.assign(static_cast<std::size_t>(d) + 2, 0);
        for (int n = 0; n <= d; ++n) {
            offset[static_cast<std::size_t>(n) + 1] = offset[static_cast<std::size_t>(n)] + simplices[static_cast<std::size_t>(n)].size();
            for (const auto& z : simplices[static_cast<std::size_t>(n)]) {
                std::string label = "s" + std::to_string(n) + ":";
                for (int zf : z)
                    label += std::to_string(zf) + ".";
                basis.add(label, n);
            }
        }
        SparseMatrix m(basis.size(), basis.size());
        for (int n = 1; n <= d; ++n)
            for (std::size_t a = 0; a < simplices[static_cast<std::size_t>(n)].size(); ++a)
                for (int i = 0; i <= n; ++i) {
                    auto b = find(face(simplices[static_cast<std::size_t>(n)][a], n, i), n - 1);
                    if (b)
                        m.add(offset[static_cast<std::size_t>(n) - 1] + *b, offset[static_cast<std::size_t>(n)] + a, sign_power(i));
                }
        return ChainComplex(std::move(basis), std::move(m));
    }

    /// Alexander–Whitney cup of a p-cochain and a q-cochain.
    std::vector<Int> cup(const std::vector<Int>& phi, int p, const std::vector<Int>& psi, int q) const
    {
        const int n = p + q;
        std::vector<Int> out(simplices[static_cast<std::size_t>(n)].size(), 0);
        for (std::size_t a = 0; a < out.size(); ++a) {
            const auto& z = simplices[static_cast<std::size_t>(n)][a];
            auto fi = find(front(z, p), p);
            auto bi = find(back(z, n, p), q);
            if (fi && bi)
                out[a] = checked_mul(phi[*fi], psi[*bi]);
        }
        return out;
    }
};

} // namespace detail

inline SimplicialOracle simplicial_oracle(int d)
{
    if (d < 1 || d > 6)
        throw Error(ErrorKind::shape, "simplicial oracle supports 1 <= d <= 6");
    detail::SimplicialTorus torus(d);
    std::vector<std::size_t> offset;
    ChainComplex chains = torus.chain_complex(offset);
    ChainComplex cochains = dual(chains);

    SimplicialOracle out;
    out.d = d;
    out.betti.assign(static_cast<std::size_t>(d) + 1, 0);
    for (const auto& h : homology(cochains))
        out.betti[static_cast<std::size_t>(-h.degree)] = h.rank;

    // ψ_f(σ) = 1 iff σ is the edge along factor f.
    std::map<std::uint32_t, std::vector<Int>> psi;
    psi[0] = std::vector<Int>(torus.simplices[0].size(), 1);
    for (int f = 0; f < d; ++f) {
        std::vector<Int> v(torus.simplices[1].size(), 0);
        for (std::size_t a = 0; a < v.size(); ++a)
            v[a] = torus.simplices[1][a][static_cast<std::size_t>(f)] == 1 ? 1 : 0;
        psi[1u << f] = std::move(v);
    }
    for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
        if (psi.count(mask))
            continue;
        int low = 0;
        while (!((mask >> low) & 1u))
            ++low;
        std::uint32_t rest = mask & ~(1u << low);
        psi[mask] = torus.cup(psi[1u << low], 1, psi[rest], std::popcount(rest));
    }

    HomologyDecomposition h(cochains);
    auto as_chain = [&](const std::vector<Int>& v, int n) {
        Chain c;
        for (std::size_t a = 0; a < v.size(); ++a)
            if (v[a] != 0)
                c[offset[static_cast<std::size_t>(n)] + a] = v[a];
        return c;
    };
    // Coordinates of every ψ_S in the free basis of H^{|S|}.
    std::map<int, std::vector<std::uint32_t>> masks_by_degree;
    std::map<std::uint32_t, std::vector<BigInt>> coords;
    for (const auto& [mask, v] : psi) {
        const int n = std::popcount(mask);
        masks_by_degree[n].push_back(mask);
        coords[mask] = h.free_coordinates(-n, as_chain(v, n));
    }
    out.psi_basis = true;
    std::map<int, BigMatrix> basis_matrix;
    for (const auto& [n, masks] : masks_by_degree) {
        BigMatrix m(out.betti[static_cast<std::size_t>(n)], masks.size());
        if (m.rows() != masks.size())
            out.psi_basis = false;
        for (std::size_t j = 0; j < masks.size(); ++j)
            for (std::size_t i = 0; i < m.rows() && i < coords[masks[j]].size(); ++i)
                m(i, j) = coords[masks[j]][i];
        if (m.rows() == m.cols()) {
            SmithForm s = smith_normal_form(m);
            if (s.rank() != m.rows() || std::any_of(s.diagonal.begin(), s.diagonal.end(), [](const BigInt& x) { return x != 1; }))
                out.psi_basis = false;
        }
        basis_matrix[n] = std::move(m);
    }
    if (!out.psi_basis)
        return out;

    for (const auto& [s, vs] : psi)
        for (const auto& [t, vt] : psi) {
            const int p = std::popcount(s), q = std::popcount(t);
            if (p + q > d)
                continue;
            auto prod = torus.cup(vs, p, vt, q);
            auto c = h.free_coordinates(-(p + q), as_chain(prod, p + q));
            auto sol = solve_integer(basis_matrix[p + q], c);
            if (!sol)
                throw Error(ErrorKind::validation, "simplicial cup product outside the ψ lattice");
            std::map<std::uint32_t, Int> entry;
            const auto& masks = masks_by_degree[p + q];
            for (std::size_t j = 0; j < masks.size(); ++j)
                if ((*sol)[j] != 0)
                    entry[masks[j]] = detail::to_int((*sol)[j]);
            out.product[{s, t}] = std::move(entry);
        }
    return out;
}

} // namespace floerq

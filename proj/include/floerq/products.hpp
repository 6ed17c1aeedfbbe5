#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "floerq/error.hpp"
#include "floerq/floer.hpp"
#include "floerq/homology.hpp"
#include "floerq/report.hpp"
#include "floerq/smith.hpp"
#include "floerq/tables.hpp"
#include "floerq/tensor_element.hpp"

namespace floerq {

inline constexpr SlotKey theta_identity{0, 1, 1};
inline constexpr SlotKey theta_pants{0, 1, 2};
inline constexpr SlotKey theta_copants{0, 2, 1};
inline constexpr SlotKey theta_sharp{0, 2, 0};
inline constexpr SlotKey theta_flat{0, 0, 2};
inline constexpr SlotKey theta_unit{0, 1, 0};
inline constexpr SlotKey theta_top{0, 0, 1};
inline constexpr SlotKey theta_four{0, 1, 3};
inline constexpr SlotKey theta_torus{1, 0, 0};

/// Σ_α α^ ⊗ α.
inline TensorElement identity_element(const DataRef& data)
{
    TensorElement out = TensorElement::over(data, 1, 1);
    for (std::uint32_t a = 0; a < data->size(); ++a)
        out.add({a, a}, 1);
    return out;
}

/// The diagonal count table of Σ_{0,1,1}.
inline CountTable identity_table(const FloerData& data, std::string label = "theta_0_1_1")
{
    CountTable t;
    t.key = theta_identity;
    t.label = std::move(label);
    for (const auto& o : data.orbits())
        t.set({o.name}, {o.name}, 1);
    return t;
}

/// Θ-tables over one data set, one q=0 table per slot key, plus any further
/// tables (homotopies, their faces) by label.
class ThetaBundle {
public:
    ThetaBundle() = default;

    /// Tables with cross-data slots are skipped; the first q=0 table of each
    /// key becomes the canonical Θ of that key. A missing Θ_{0,1,1} is
    /// filled with the diagonal.
    ThetaBundle(DataRef data, const std::vector<CountTable>& tables) : data_(std::move(data))
    {
        for (const auto& t : tables) {
            if (t.minus_data != "data" || t.plus_data != "data")
                continue;
            by_label_.emplace(t.label, t);
            if (t.q == 0 && theta_.count(t.key) == 0)
                theta_.emplace(t.key, t);
        }
        if (theta_.count(theta_identity) == 0) {
            CountTable id = identity_table(*data_);
            synthesized_identity_ = true;
            by_label_.emplace(id.label, id);
            theta_.emplace(theta_identity, std::move(id));
        }
    }

    const DataRef& data() const { return data_; }
    bool has(SlotKey key) const { return theta_.count(key) != 0; }
    bool identity_synthesized() const { return synthesized_identity_; }

    const CountTable& table(SlotKey key) const
    {
        auto it = theta_.find(key);
        if (it == theta_.end())
            throw Error(ErrorKind::missing_table, "no table for slot " + key.to_string());
        return it->second;
    }

    const CountTable& table(const std::string& label) const
    {
        auto it = by_label_.find(label);
        if (it == by_label_.end())
            throw Error(ErrorKind::missing_table, "no table labelled '" + label + "'");
        return it->second;
    }

    TensorElement q(SlotKey key) const { return q_of_table(table(key), data_); }

    const std::map<SlotKey, CountTable>& thetas() const { return theta_; }
    const TableSet& all() const { return by_label_; }

    void insert(const CountTable& t)
    {
        by_label_[t.label] = t;
        if (t.q == 0)
            theta_[t.key] = t;
    }

private:
    DataRef data_;
    std::map<SlotKey, CountTable> theta_;
    TableSet by_label_;
    bool synthesized_identity_ = false;
};

/// A Floer cochain (arity (1,0)) or chain (arity (0,1)) with its grading μ.
struct CocycleElement {
    TensorElement element;
    std::optional<std::int64_t> degree; // unset when the element is zero or inhomogeneous
    bool closed = false;

    operator const TensorElement&() const { return element; }
};

inline bool is_cochain(const TensorElement& x) { return x.k_minus() == 1 && x.k_plus() == 0; }
inline bool is_chain(const TensorElement& x) { return x.k_minus() == 0 && x.k_plus() == 1; }

/// Grading μ of a homogeneous cochain or chain.
inline std::optional<std::int64_t> floer_degree(const TensorElement& x)
{
    std::optional<std::int64_t> deg;
    const std::int64_t m = x.slot_data(0).modulus();
    for (const auto& [k, v] : x.terms()) {
        std::int64_t d = x.slot_data(0).mu(k[0]);
        if (!deg)
            deg = d;
        else if (!congruent(*deg, d, m))
            return std::nullopt;
    }
    return deg;
}

inline CocycleElement annotate(TensorElement x)
{
    if (!is_cochain(x) && !is_chain(x))
        throw Error(ErrorKind::shape, "expected a Floer chain or cochain, got arity (" + std::to_string(x.k_minus()) +
                                          "," + std::to_string(x.k_plus()) + ")");
    CocycleElement c;
    c.degree = floer_degree(x);
    c.closed = differential(x).is_zero();
    c.element = std::move(x);
    return c;
}

/// Basis cochain α^ or chain α.
inline TensorElement basis_cochain(const DataRef& data, const std::string& name)
{
    TensorElement x = TensorElement::over(data, 1, 0);
    x.add({name}, {}, 1);
    return x;
}

inline TensorElement basis_chain(const DataRef& data, const std::string& name)
{
    TensorElement x = TensorElement::over(data, 0, 1);
    x.add({}, {name}, 1);
    return x;
}

namespace detail {

inline void require_cochain(const TensorElement& a, const char* what)
{
    if (!is_cochain(a))
        throw Error(ErrorKind::shape, std::string(what) + " must be a Floer cochain");
}

inline void require_chain(const TensorElement& x, const char* what)
{
    if (!is_chain(x))
        throw Error(ErrorKind::shape, std::string(what) + " must be a Floer chain");
}

} // namespace detail

/// 1 = Q(Θ_{0,1,0}).
inline CocycleElement unit(const ThetaBundle& theta) { return annotate(theta.q(theta_unit)); }

/// [M] = Q(Θ_{0,0,1}).
inline CocycleElement top_class(const ThetaBundle& theta) { return annotate(theta.q(theta_top)); }

/// a ∪ b = (Q(Θ_{0,1,2}) ◊ a) ◊ b.
inline CocycleElement cup(const TensorElement& a, const TensorElement& b, const ThetaBundle& theta)
{
    detail::require_cochain(a, "cup: a");
    detail::require_cochain(b, "cup: b");
    return annotate(diamond(diamond(theta.q(theta_pants), a), b));
}

/// x · y = x ◊ (y ◊ Q(Θ_{0,2,1})).
inline CocycleElement intersection(const TensorElement& x, const TensorElement& y, const ThetaBundle& theta)
{
    detail::require_chain(x, "intersection: x");
    detail::require_chain(y, "intersection: y");
    return annotate(diamond(x, diamond(y, theta.q(theta_copants))));
}

/// x ∩ a = (x ◊ Q(Θ_{0,1,2})) ◊ a.
inline CocycleElement cap(const TensorElement& x, const TensorElement& a, const ThetaBundle& theta)
{
    detail::require_chain(x, "cap: x");
    detail::require_cochain(a, "cap: a");
    return annotate(diamond(diamond(x, theta.q(theta_pants)), a));
}

/// x♯ = x ◊ Q(Θ_{0,2,0}).
inline CocycleElement pd_sharp(const TensorElement& x, const ThetaBundle& theta)
{
    detail::require_chain(x, "pd_sharp: x");
    return annotate(diamond(x, theta.q(theta_sharp)));
}

/// a♭ = Q(Θ_{0,0,2}) ◊ a.
inline CocycleElement pd_flat(const TensorElement& a, const ThetaBundle& theta)
{
    detail::require_cochain(a, "pd_flat: a");
    return annotate(diamond(theta.q(theta_flat), a));
}

/// Σ_α (-1)^{μ(α)}.
inline Int euler(const FloerData& data)
{
    Int chi = 0;
    for (std::size_t a = 0; a < data.size(); ++a)
        chi += sign_power(data.mu(a));
    return chi;
}

/// Scalar value of an arity (0,0) element.
inline Int scalar(const TensorElement& x)
{
    if (x.arity() != 0)
        throw Error(ErrorKind::shape, "element is not a scalar");
    return x.is_zero() ? 0 : x.terms().begin()->second;
}

/// Complex carrying x: CF^* for cochains, CF_* for chains.
inline ChainComplex carrier(const TensorElement& x)
{
    if (is_cochain(x))
        return build_cf_dual(*x.minus_slots()[0]);
    if (is_chain(x))
        return build_cf(*x.plus_slots()[0]);
    throw Error(ErrorKind::shape, "expected a Floer chain or cochain");
}

/// Whether x is d of something (x must be closed).
inline bool is_exact(const TensorElement& x)
{
    if (!differential(x).is_zero())
        throw Error(ErrorKind::hypothesis, "element is not closed: " + x.to_string());
    return is_boundary(carrier(x), to_chain(x));
}

/// Whether x and y are closed and represent the same (co)homology class.
inline bool same_class(const TensorElement& x, const TensorElement& y) { return is_exact(x - y); }

/// How two elements agree.
enum class Agreement { chain_exact, up_to_boundary, different };

inline const char* to_string(Agreement a)
{
    switch (a) {
    case Agreement::chain_exact: return "chain-exact";
    case Agreement::up_to_boundary: return "up-to-coboundary";
    case Agreement::different: return "different";
    }
    return "different";
}

inline Agreement compare(const TensorElement& x, const TensorElement& y)
{
    if (x == y)
        return Agreement::chain_exact;
    if (differential(x).is_zero() && differential(y).is_zero() && same_class(x, y))
        return Agreement::up_to_boundary;
    return Agreement::different;
}

/// Free generators of HF^* (cochains) or HF_* (chains), all degrees, with
/// coordinates of closed homogeneous elements in that basis.
class ClassBasis {
public:
    ClassBasis(const DataRef& data, bool cochains)
        : data_(data), cochains_(cochains), h_(cochains ? build_cf_dual(*data) : build_cf(*data))
    {
        for (const auto& block : h_.degrees())
            for (const auto& rep : block.free) {
                TensorElement x = cochains ? TensorElement::over(data, 1, 0) : TensorElement::over(data, 0, 1);
                for (const auto& [idx, v] : rep)
                    x.add({static_cast<std::uint32_t>(idx)}, v);
                reps_.push_back(std::move(x));
                degrees_.push_back(cochains ? -block.degree : block.degree);
            }
        std::vector<std::size_t> order(reps_.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return mod_degree(degrees_[a]) < mod_degree(degrees_[b]);
        });
        std::vector<TensorElement> reps;
        std::vector<std::int64_t> degrees;
        for (auto i : order) {
            reps.push_back(reps_[i]);
            degrees.push_back(degrees_[i]);
        }
        reps_ = std::move(reps);
        degrees_ = std::move(degrees);
    }

    std::size_t size() const { return reps_.size(); }
    const TensorElement& representative(std::size_t i) const { return reps_.at(i); }
    std::int64_t degree(std::size_t i) const { return degrees_.at(i); }
    bool cochains() const { return cochains_; }

    /// Coordinates of x over the whole basis (torsion ignored).
    std::vector<BigInt> coordinates(const TensorElement& x) const
    {
        std::vector<BigInt> out(reps_.size());
        if (x.is_zero())
            return out;
        auto deg = floer_degree(x);
        if (!deg)
            throw Error(ErrorKind::invalid_grading, "element is not homogeneous: " + x.to_string());
        const std::int64_t complex_degree = cochains_ ? -*deg : *deg;
        auto local = h_.free_coordinates(complex_degree, to_chain(x));
        std::size_t k = 0;
        for (std::size_t i = 0; i < reps_.size() && k < local.size(); ++i)
            if (mod_degree(degrees_[i]) == mod_degree(*deg))
                out[i] = local[k++];
        return out;
    }

private:
    std::int64_t mod_degree(std::int64_t d) const { return Degree{d, data_->modulus()}.value(); }

    DataRef data_;
    bool cochains_;
    HomologyDecomposition h_;
    std::vector<TensorElement> reps_;
    std::vector<std::int64_t> degrees_;
};

/// L_{AA'}(x) = x ◊ Q(Θ_{0,1,1}(A,A')): the table's minus slot reads data,
/// its plus slot data2.
inline CocycleElement continuation(const TensorElement& x, const CountTable& theta_pair, const DataRef& data,
                                   const DataRef& data2)
{
    detail::require_chain(x, "continuation: x");
    if (theta_pair.key != theta_identity || theta_pair.q != 0)
        throw Error(ErrorKind::composition, "continuation needs a q=0 table of slot (0,1,1)");
    if (!same_data(x.plus_slots()[0], data))
        throw Error(ErrorKind::lookup, "continuation: chain does not live over the source data");
    for (const auto& [tuple, count] : theta_pair.entries) {
        if (!data->find(tuple.first.at(0)))
            throw Error(ErrorKind::lookup, "continuation table input '" + tuple.first[0] + "' is not a source orbit");
        if (!data2->find(tuple.second.at(0)))
            throw Error(ErrorKind::lookup, "continuation table output '" + tuple.second[0] + "' is not a target orbit");
    }
    TensorElement q = q_of_table(theta_pair, data, data2);
    if (!differential(q).is_zero())
        throw Error(ErrorKind::hypothesis, "continuation table '" + theta_pair.label + "' does not give a chain map");
    return annotate(diamond(x, q));
}

/// Result of the Massey construction.
struct MasseyResult {
    Report hypotheses;
    TensorElement representative;
    bool closed = false;
    std::vector<TensorElement> indeterminacy; // cocycles spanning (a∪HF + HF∪c) modulo torsion
    bool trivial = false;                     // representative lies in a∪HF + HF∪c + im d*
};

namespace detail {

/// Cocycles of CF^* (saturated kernel basis of d*).
inline std::vector<TensorElement> cocycle_basis(const DataRef& data)
{
    ChainComplex c = build_cf_dual(*data);
    SparseMatrix d = c.differential();
    BigMatrix m(c.size(), c.size());
    for (std::size_t a = 0; a < c.size(); ++a)
        for (const auto& [b, v] : d.column(a))
            m(b, a) = v;
    BigMatrix k = kernel_basis(m);
    std::vector<TensorElement> out;
    for (std::size_t col = 0; col < k.cols(); ++col) {
        TensorElement z = TensorElement::over(data, 1, 0);
        for (std::uint32_t r = 0; r < k.rows(); ++r)
            if (k(r, col) != 0)
                z.add({r}, to_int(k(r, col)));
        out.push_back(std::move(z));
    }
    return out;
}

inline std::vector<BigInt> coordinates(const TensorElement& x)
{
    std::vector<BigInt> v(x.slot_data(0).size());
    for (const auto& [k, c] : x.terms())
        v[k[0]] += c;
    return v;
}

/// Basis of the lattice spanned by `gens` inside H^*, modulo torsion, as
/// cocycles; boundaries are quotiented out.
inline std::vector<TensorElement> lattice_basis_in_cohomology(const DataRef& data, const std::vector<TensorElement>& gens)
{
    if (gens.empty())
        return {};
    HomologyDecomposition h(build_cf_dual(*data));
    std::map<std::int64_t, std::vector<std::vector<BigInt>>> by_degree;
    for (const auto& g : gens) {
        if (g.is_zero())
            continue;
        auto deg = floer_degree(g);
        if (!deg)
            throw Error(ErrorKind::invalid_grading, "indeterminacy generator is not homogeneous");
        by_degree[-*deg].push_back(h.free_coordinates(-*deg, to_chain(g)));
    }
    std::vector<TensorElement> out;
    for (const auto& [deg, cols] : by_degree) {
        const auto* block = h.find(deg);
        if (!block || block->free.empty())
            continue;
        const std::size_t rows = block->free.size();
        BigMatrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows; ++i)
                m(i, j) = cols[j][i];
        SmithForm s = smith_normal_form(m);
        for (std::size_t i = 0; i < s.rank(); ++i) {
            TensorElement z = TensorElement::over(data, 1, 0);
            for (std::size_t r = 0; r < rows; ++r) {
                BigInt coeff = s.U_inverse(r, i) * s.diagonal[i];
                if (coeff == 0)
                    continue;
                for (const auto& [idx, v] : block->free[r])
                    z.add({static_cast<std::uint32_t>(idx)}, checked_mul(to_int(coeff), v));
            }
            out.push_back(std::move(z));
        }
    }
    return out;
}

} // namespace detail

/// The zero q=1 table of slot (0,1,3) whose two faces are the glued pants
/// tables; admissible exactly when the two gluings agree.
inline CountTable zero_homotopy(const std::string& face1, const std::string& face0, std::string label = "lambda")
{
    CountTable t;
    t.key = theta_four;
    t.q = 1;
    t.label = std::move(label);
    t.faces[{1, 1}] = face1;
    t.faces[{1, 0}] = face0;
    return t;
}

/// M(a,b,c) = ((Qλ◊a)◊b)◊c + (Qθ◊ζ)◊c - (-1)^{μ(a)} (Qθ◊a)◊ξ, where θ is
/// the pants table and dQλ = Q(θ◊₁₁θ) - Q(θ◊₂₁θ).
inline MasseyResult massey(const TensorElement& a, const TensorElement& b, const TensorElement& c,
                           const ThetaBundle& theta, const TensorElement& zeta, const TensorElement& xi,
                           const CountTable& lambda)
{
    detail::require_cochain(a, "massey: a");
    detail::require_cochain(b, "massey: b");
    detail::require_cochain(c, "massey: c");
    detail::require_cochain(zeta, "massey: zeta");
    detail::require_cochain(xi, "massey: xi");
    const DataRef& data = theta.data();
    MasseyResult out;
    Report& r = out.hypotheses;

    auto check_closed = [&](const TensorElement& x, const char* name) {
        r.ran(std::string("massey.closed-") + name);
        if (!differential(x).is_zero())
            r.add(std::string("massey.closed-") + name, Severity::error, std::string(name) + " is not closed",
                  x.to_string());
    };
    check_closed(a, "a");
    check_closed(b, "b");
    check_closed(c, "c");

    r.ran("massey.zeta");
    TensorElement ab = cup(a, b, theta).element;
    TensorElement dzeta = differential(zeta);
    if (!(ab == dzeta))
        r.add("massey.zeta", Severity::error, "a∪b differs from dζ", detail::first_difference(ab, dzeta));
    r.ran("massey.xi");
    TensorElement bc = cup(b, c, theta).element;
    TensorElement dxi = differential(xi);
    if (!(bc == dxi))
        r.add("massey.xi", Severity::error, "b∪c differs from dξ", detail::first_difference(bc, dxi));

    r.ran("massey.lambda");
    if (lambda.key != theta_four || lambda.q != 1) {
        r.add("massey.lambda", Severity::error, "λ must be a q=1 table of slot (0,1,3)", lambda.label);
    } else {
        const CountTable& pants = theta.table(theta_pants);
        TensorElement q_pants = q_of_table(pants, data);
        TensorElement d_lambda = differential(q_of_table(lambda, data));
        TensorElement glued = diamond(q_pants, q_pants, 1, 1) - diamond(q_pants, q_pants, 2, 1);
        if (!(d_lambda == glued))
            r.add("massey.lambda", Severity::error, "dQλ differs from Q(θ◊₁₁θ) - Q(θ◊₂₁θ)",
                  detail::first_difference(d_lambda, glued));
        TableSet faces = theta.all();
        faces.emplace(lambda.label, lambda);
        Report structure = check_table(lambda, *data, true, &faces);
        r.merge(structure);
        if (structure.ok()) {
            Report boundary = check_cycle(lambda, data, &faces);
            r.merge(boundary);
        }
    }
    if (!r.ok())
        return out;

    auto deg_a = floer_degree(a);
    const int sign_a = sign_power(deg_a.value_or(0));
    TensorElement qtheta = theta.q(theta_pants);
    TensorElement qlambda = q_of_table(lambda, data);
    out.representative = diamond(diamond(diamond(qlambda, a), b), c) + diamond(diamond(qtheta, zeta), c) -
                         sign_a * diamond(diamond(qtheta, a), xi);
    out.closed = differential(out.representative).is_zero();
    if (!out.closed)
        throw Error(ErrorKind::hypothesis, "Massey cochain is not closed: " + differential(out.representative).to_string());

    std::vector<TensorElement> gens;
    for (const auto& z : detail::cocycle_basis(data)) {
        gens.push_back(cup(a, z, theta).element);
        gens.push_back(cup(z, c, theta).element);
    }
    out.indeterminacy = detail::lattice_basis_in_cohomology(data, gens);

    ChainComplex cf = build_cf_dual(*data);
    std::vector<TensorElement> span = gens;
    for (std::size_t col = 0; col < cf.size(); ++col) {
        TensorElement bdry = TensorElement::over(data, 1, 0);
        for (const auto& [row, v] : cf.differential().column(col))
            bdry.add({static_cast<std::uint32_t>(row)}, v);
        span.push_back(std::move(bdry));
    }
    BigMatrix m(data->size(), span.size());
    for (std::size_t j = 0; j < span.size(); ++j) {
        auto v = detail::coordinates(span[j]);
        for (std::size_t i = 0; i < v.size(); ++i)
            m(i, j) = v[i];
    }
    out.trivial = solve_integer(m, detail::coordinates(out.representative)).has_value();
    return out;
}

/// Checks of a bundle: tables, cycles, and the standard gluing relations
/// among whichever tables are present.
struct GluingConfig {
    SlotKey first;
    SlotKey second;
    SlotKey result;
    std::size_t i;
    std::size_t j;
};

inline const std::vector<GluingConfig>& standard_gluings()
{
    static const std::vector<GluingConfig> configs = {
        {theta_pants, theta_unit, theta_identity, 2, 1},
        {theta_pants, theta_unit, theta_identity, 1, 1},
        {theta_top, theta_copants, theta_identity, 1, 1},
        {theta_top, theta_copants, theta_identity, 1, 2},
        {theta_flat, theta_sharp, theta_identity, 2, 1},
        {theta_identity, theta_identity, theta_identity, 1, 1},
        {theta_pants, theta_pants, theta_four, 1, 1},
        {theta_pants, theta_pants, theta_four, 2, 1},
    };
    return configs;
}

inline Report check_bundle(const ThetaBundle& theta, bool strict = false)
{
    Report r;
    for (const auto& [key, t] : theta.thetas()) {
        r.merge(check_table(t, *theta.data(), strict, &theta.all()));
        Report shape = check_table(t, *theta.data(), false, &theta.all());
        if (shape.ok())
            r.merge(check_cycle(t, theta.data(), &theta.all()));
    }
    for (const auto& g : standard_gluings())
        if (theta.has(g.first) && theta.has(g.second) && theta.has(g.result))
            r.merge(check_gluing(theta.table(g.first), theta.table(g.second), theta.table(g.result), g.i, g.j,
                                 theta.data()));
    if (theta.has(theta_torus))
        r.merge(check_self_gluing(theta.table(theta_identity), theta.table(theta_torus), 1, 1, theta.data()));
    return r;
}

} // namespace floerq

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "floerq/error.hpp"
#include "floerq/graded.hpp"

namespace floerq {

/// Ordered list of labelled generators sharing one grading modulus.
class GradedBasis {
public:
    struct Generator {
        std::string label;
        Degree degree;
    };

    GradedBasis() = default;

    explicit GradedBasis(std::int64_t modulus) : modulus_(modulus) {}

    GradedBasis(std::int64_t modulus, const std::vector<std::pair<std::string, std::int64_t>>& gens)
        : modulus_(modulus)
    {
        for (const auto& [label, lift] : gens)
            add(label, lift);
    }

    std::size_t add(const std::string& label, std::int64_t lift)
    {
        if (index_.count(label) != 0)
            throw Error(ErrorKind::shape, "duplicate basis label '" + label + "'");
        index_.emplace(label, gens_.size());
        gens_.push_back({label, Degree{lift, modulus_}});
        return gens_.size() - 1;
    }

    std::size_t size() const { return gens_.size(); }
    std::int64_t modulus() const { return modulus_; }
    const Generator& operator[](std::size_t i) const { return gens_[i]; }
    const Degree& degree(std::size_t i) const { return gens_[i].degree; }
    const std::string& label(std::size_t i) const { return gens_[i].label; }
    const std::vector<Generator>& generators() const { return gens_; }

    std::optional<std::size_t> find(const std::string& label) const
    {
        auto it = index_.find(label);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t index_of(const std::string& label) const
    {
        auto i = find(label);
        if (!i)
            throw Error(ErrorKind::lookup, "unknown basis label '" + label + "'");
        return *i;
    }

    friend bool operator==(const GradedBasis& a, const GradedBasis& b)
    {
        if (a.modulus_ != b.modulus_ || a.gens_.size() != b.gens_.size())
            return false;
        for (std::size_t i = 0; i < a.gens_.size(); ++i)
            if (a.gens_[i].label != b.gens_[i].label ||
                a.gens_[i].degree.lift != b.gens_[i].degree.lift)
                return false;
        return true;
    }

private:
    std::int64_t modulus_ = 0;
    std::vector<Generator> gens_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Sparse vector over a basis; absent entries are zero.
using Chain = std::map<std::size_t, Int>;

inline void accumulate(Chain& c, std::size_t i, Int v)
{
    if (v == 0)
        return;
    Int& slot = c[i];
    slot = checked_add(slot, v);
    if (slot == 0)
        c.erase(i);
}

/// Sparse integer matrix stored by columns: column j is the image of basis j.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }

    Int get(std::size_t r, std::size_t c) const
    {
        auto it = columns_.at(c).find(r);
        return it == columns_[c].end() ? 0 : it->second;
    }

    void set(std::size_t r, std::size_t c, Int v)
    {
        if (r >= rows_ || c >= columns_.size())
            throw Error(ErrorKind::shape, "sparse matrix index out of range");
        if (v == 0)
            columns_[c].erase(r);
        else
            columns_[c][r] = v;
    }

    void add(std::size_t r, std::size_t c, Int v)
    {
        if (r >= rows_ || c >= columns_.size())
            throw Error(ErrorKind::shape, "sparse matrix index out of range");
        accumulate(columns_[c], r, v);
    }

    const Chain& column(std::size_t c) const { return columns_.at(c); }

    Chain apply(const Chain& x) const
    {
        Chain out;
        for (const auto& [j, xj] : x)
            for (const auto& [i, aij] : column(j))
                accumulate(out, i, checked_mul(aij, xj));
        return out;
    }

    /// this ∘ other
    SparseMatrix compose(const SparseMatrix& other) const
    {
        if (other.rows() != cols())
            throw Error(ErrorKind::shape, "sparse matrix composition dimension mismatch");
        SparseMatrix out(rows_, other.cols());
        for (std::size_t c = 0; c < other.cols(); ++c)
            out.columns_[c] = apply(other.column(c));
        return out;
    }

    bool is_zero() const
    {
        for (const auto& c : columns_)
            if (!c.empty())
                return false;
        return true;
    }

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::vector<Chain> columns_;
};

/// Free graded Z-module with a degree -1 differential.
class ChainComplex {
public:
    ChainComplex() = default;

    /// Checks that every nonzero entry lowers degree by one; d² = 0 is
    /// checked separately (see square_zero_witness).
    ChainComplex(GradedBasis basis, SparseMatrix differential)
        : basis_(std::move(basis)), d_(std::move(differential))
    {
        if (d_.rows() != basis_.size() || d_.cols() != basis_.size())
            throw Error(ErrorKind::shape, "differential does not match basis size");
        for (std::size_t a = 0; a < basis_.size(); ++a)
            for (const auto& [b, v] : d_.column(a))
                if (!(basis_.degree(b) == basis_.degree(a).shifted(-1)))
                    throw Error(ErrorKind::invalid_grading,
                                "differential entry " + basis_.label(a) + " -> " +
                                    basis_.label(b) + " does not lower degree by one");
    }

    /// Complex with zero differential.
    explicit ChainComplex(GradedBasis basis)
        : basis_(std::move(basis)), d_(basis_.size(), basis_.size())
    {
    }

    const GradedBasis& basis() const { return basis_; }
    const SparseMatrix& differential() const { return d_; }
    std::size_t size() const { return basis_.size(); }
    std::int64_t modulus() const { return basis_.modulus(); }

    Chain d(const Chain& x) const { return d_.apply(x); }

    /// A generator whose image under d² is nonzero, if any.
    std::optional<std::size_t> square_zero_witness() const
    {
        for (std::size_t a = 0; a < size(); ++a)
            if (!d(d_.column(a)).empty())
                return a;
        return std::nullopt;
    }

    /// Reduce all coefficients modulo 2 (debugging aid; never the default).
    ChainComplex reduced_mod2() const
    {
        SparseMatrix m(size(), size());
        for (std::size_t a = 0; a < size(); ++a)
            for (const auto& [b, v] : d_.column(a))
                if (mod_floor(v, 2) != 0)
                    m.set(b, a, 1);
        return ChainComplex(basis_, std::move(m));
    }

    friend bool operator==(const ChainComplex&, const ChainComplex&) = default;

private:
    GradedBasis basis_;
    SparseMatrix d_;
};

/// The complex Z concentrated in degree 0.
inline ChainComplex point_complex(std::int64_t modulus = 0)
{
    return ChainComplex(GradedBasis(modulus, {{"1", 0}}));
}

inline constexpr const char* tensor_separator = "⊗";

/// C ⊗ C' with d(x ⊗ x') = dx ⊗ x' + (-1)^{|x|} x ⊗ dx'.
/// Basis order is lexicographic with the left factor outermost.
inline ChainComplex tensor(const ChainComplex& c, const ChainComplex& c2)
{
    if (c.modulus() != c2.modulus())
        throw Error(ErrorKind::grading_mismatch, "tensor of complexes with different moduli");
    GradedBasis basis(c.modulus());
    const std::size_t n2 = c2.size();
    for (std::size_t a = 0; a < c.size(); ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            std::string label = c.basis().label(a) + tensor_separator + c2.basis().label(b);
            basis.add(label, c.basis().degree(a).lift + c2.basis().degree(b).lift);
        }
    SparseMatrix d(basis.size(), basis.size());
    for (std::size_t a = 0; a < c.size(); ++a) {
        const int sign_a = sign_power(c.basis().degree(a).parity());
        for (std::size_t b = 0; b < n2; ++b) {
            const std::size_t col = a * n2 + b;
            for (const auto& [a2, v] : c.differential().column(a))
                d.add(a2 * n2 + b, col, v);
            for (const auto& [b2, v] : c2.differential().column(b))
                d.add(a * n2 + b2, col, sign_a * v);
        }
    }
    return ChainComplex(std::move(basis), std::move(d));
}

/// Left-nested tensor product of a non-empty list of complexes.
inline ChainComplex tensor_all(std::span<const ChainComplex> factors)
{
    if (factors.empty())
        throw Error(ErrorKind::shape, "tensor_all of an empty list");
    ChainComplex out = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i)
        out = tensor(out, factors[i]);
    return out;
}

inline constexpr const char* dual_suffix = "^";

/// Dual complex: generator a^ in degree -|a|, d* a^ = (-1)^{|a|} d†a^.
inline ChainComplex dual(const ChainComplex& c)
{
    GradedBasis basis(c.modulus());
    for (std::size_t a = 0; a < c.size(); ++a)
        basis.add(c.basis().label(a) + dual_suffix, -c.basis().degree(a).lift);
    SparseMatrix d(c.size(), c.size());
    // d b = Σ v a  contributes v·(-1)^{|a|} to d* a^ along b^.
    for (std::size_t b = 0; b < c.size(); ++b)
        for (const auto& [a, v] : c.differential().column(b))
            d.add(b, a, sign_power(c.basis().degree(a).parity()) * v);
    return ChainComplex(std::move(basis), std::move(d));
}

/// Sign of the Koszul evaluation isomorphism C -> C**, a ↦ (-1)^{|a|} a^^.
/// Under it the double dual carries exactly the differential of C.
inline int double_dual_sign(const Degree& d) { return sign_power(d.parity()); }

/// Element of a k-fold tensor product, keyed by multi-indices into the factors.
struct TensorChain {
    std::vector<ChainComplex> factors;
    std::map<std::vector<std::size_t>, Int> terms;
};

/// Reorder every tuple by rho with its graded sign; the result lives in the
/// tensor product of the permuted factors.
inline TensorChain permute_factors(const Permutation& rho, const TensorChain& x)
{
    if (rho.size() != x.factors.size())
        throw Error(ErrorKind::shape, "permute_factors: permutation size does not match arity");
    for (const auto& f : x.factors)
        if (f.modulus() != x.factors.front().modulus())
            throw Error(ErrorKind::grading_mismatch, "tensor factors have different moduli");
    TensorChain out;
    out.factors = rho.apply(x.factors);
    std::vector<int> parities(rho.size());
    for (const auto& [tuple, coeff] : x.terms) {
        if (tuple.size() != rho.size())
            throw Error(ErrorKind::shape, "permute_factors: tuple arity mismatch");
        for (std::size_t p = 0; p < tuple.size(); ++p)
            parities[p] = x.factors[p].basis().degree(tuple[p]).parity();
        const int s = graded_sign_parities(rho, parities);
        auto& slot = out.terms[rho.apply(tuple)];
        slot = checked_add(slot, s * coeff);
        if (slot == 0)
            out.terms.erase(rho.apply(tuple));
    }
    return out;
}

/// Index of a tuple in tensor_all(factors).
inline std::size_t flat_index(std::span<const ChainComplex> factors, std::span<const std::size_t> tuple)
{
    std::size_t idx = 0;
    for (std::size_t p = 0; p < factors.size(); ++p)
        idx = idx * factors[p].size() + tuple[p];
    return idx;
}

inline std::vector<std::size_t> unflatten_index(std::span<const ChainComplex> factors, std::size_t idx)
{
    std::vector<std::size_t> tuple(factors.size());
    for (std::size_t p = factors.size(); p-- > 0;) {
        tuple[p] = idx % factors[p].size();
        idx /= factors[p].size();
    }
    return tuple;
}

/// Matrix of permute_factors(rho, ·) from tensor_all(factors) to tensor_all(rho·factors).
inline SparseMatrix permutation_matrix(const Permutation& rho, std::span<const ChainComplex> factors)
{
    std::vector<ChainComplex> permuted = rho.apply(factors);
    std::size_t total = 1;
    for (const auto& f : factors)
        total *= f.size();
    SparseMatrix m(total, total);
    std::vector<int> parities(factors.size());
    for (std::size_t idx = 0; idx < total; ++idx) {
        auto tuple = unflatten_index(factors, idx);
        for (std::size_t p = 0; p < tuple.size(); ++p)
            parities[p] = factors[p].basis().degree(tuple[p]).parity();
        auto target = rho.apply(tuple);
        m.add(flat_index(permuted, target), idx, graded_sign_parities(rho, parities));
    }
    return m;
}

/// Pairing <x, f> of a chain with a cochain on the same underlying basis.
inline Int contract(const ChainComplex& c, const Chain& x, const ChainComplex& c_dual, const Chain& f)
{
    if (c_dual.size() != c.size())
        throw Error(ErrorKind::shape, "contract: basis mismatch");
    for (std::size_t a = 0; a < c.size(); ++a)
        if (c_dual.basis().label(a) != c.basis().label(a) + dual_suffix)
            throw Error(ErrorKind::shape, "contract: dual basis does not match");
    Int total = 0;
    for (const auto& [i, xi] : x) {
        if (i >= c.size())
            throw Error(ErrorKind::shape, "contract: chain index out of range");
        auto it = f.find(i);
        if (it != f.end())
            total = checked_add(total, checked_mul(xi, it->second));
    }
    return total;
}

struct ChainMapCheck {
    bool ok = true;
    std::optional<std::size_t> witness; // a generator of the source where it fails
    explicit operator bool() const { return ok; }
};

/// Whether f: C -> C2 (homogeneous of degree p) satisfies d₂ f = (-1)^p f d₁.
/// The degree is inferred from the first nonzero entry when not given.
inline ChainMapCheck is_chain_map(const SparseMatrix& f, const ChainComplex& c, const ChainComplex& c2,
                                  std::optional<std::int64_t> degree = std::nullopt)
{
    if (f.cols() != c.size() || f.rows() != c2.size())
        throw Error(ErrorKind::shape, "is_chain_map: matrix shape does not match complexes");
    if (!degree) {
        for (std::size_t a = 0; a < c.size() && !degree; ++a)
            for (const auto& [b, v] : f.column(a)) {
                degree = c2.basis().degree(b).lift - c.basis().degree(a).lift;
                break;
            }
    }
    const int s = sign_power(degree.value_or(0));
    for (std::size_t a = 0; a < c.size(); ++a) {
        Chain lhs = c2.d(f.column(a));
        Chain rhs = f.apply(c.differential().column(a));
        for (const auto& [i, v] : rhs)
            accumulate(lhs, i, -s * v);
        if (!lhs.empty())
            return {false, a};
    }
    return {};
}

} // namespace floerq

#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "floerq/chain_complex.hpp"
#include "floerq/error.hpp"
#include "floerq/smith.hpp"

namespace floerq {

/// H_q as Z^rank ⊕ ⊕ Z/t_i, torsion in divisibility order.
struct DegreeHomology {
    std::int64_t degree = 0;
    std::size_t rank = 0;
    std::vector<BigInt> torsion;

    friend bool operator==(const DegreeHomology&, const DegreeHomology&) = default;
};

namespace detail {

inline void require_complex(const ChainComplex& c)
{
    if (auto w = c.square_zero_witness())
        throw Error(ErrorKind::not_a_complex,
                    "d² is nonzero on generator '" + c.basis().label(*w) + "'");
}

/// Populated degree classes in increasing order.
inline std::vector<std::int64_t> degree_classes(const ChainComplex& c)
{
    std::vector<std::int64_t> out;
    for (std::size_t a = 0; a < c.size(); ++a)
        out.push_back(c.basis().degree(a).value());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::vector<std::size_t> generators_in(const ChainComplex& c, std::int64_t q)
{
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < c.size(); ++a)
        if (c.basis().degree(a).value() == q)
            out.push_back(a);
    return out;
}

inline std::int64_t class_shift(const ChainComplex& c, std::int64_t q, std::int64_t by)
{
    return Degree{q + by, c.modulus()}.value();
}

/// Block of d from the generators `cols` to the generators `rows`.
inline BigMatrix block(const ChainComplex& c, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& cols)
{
    BigMatrix m(rows.size(), cols.size());
    std::map<std::size_t, std::size_t> row_pos;
    for (std::size_t i = 0; i < rows.size(); ++i)
        row_pos[rows[i]] = i;
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [b, v] : c.differential().column(cols[j])) {
            auto it = row_pos.find(b);
            if (it != row_pos.end())
                m(it->second, j) = v;
        }
    return m;
}

inline Int to_int(const BigInt& v)
{
    if (v > std::numeric_limits<Int>::max() || v < std::numeric_limits<Int>::min())
        throw Error(ErrorKind::overflow, "value does not fit in a 64-bit coefficient");
    return static_cast<Int>(v);
}

} // namespace detail

/// Homology of a finitely generated complex, one entry per populated degree class.
inline std::vector<DegreeHomology> homology(const ChainComplex& c)
{
    detail::require_complex(c);
    std::vector<DegreeHomology> out;
    for (std::int64_t q : detail::degree_classes(c)) {
        auto gens = detail::generators_in(c, q);
        auto below = detail::generators_in(c, detail::class_shift(c, q, -1));
        auto above = detail::generators_in(c, detail::class_shift(c, q, 1));
        const std::size_t rank_out = integer_rank(detail::block(c, below, gens));
        SmithForm in = smith_normal_form(detail::block(c, gens, above));
        DegreeHomology h;
        h.degree = q;
        h.rank = gens.size() - rank_out - in.rank();
        for (const auto& t : in.diagonal)
            if (t != 1)
                h.torsion.push_back(t);
        out.push_back(std::move(h));
    }
    return out;
}

/// Explicit generators of the free part of H_q and coordinates of cycles.
class HomologyDecomposition {
public:
    struct DegreeBlock {
        std::int64_t degree = 0;
        std::vector<std::size_t> generators;
        BigMatrix kernel;         // columns: saturated basis of cycles, in generator coordinates
        SmithForm relation;       // SNF of the boundaries written in the kernel basis
        std::vector<Chain> free;  // representatives of a basis of H_q / torsion
        std::vector<BigInt> torsion;
    };

    explicit HomologyDecomposition(const ChainComplex& c) : complex_(c)
    {
        detail::require_complex(c);
        for (std::int64_t q : detail::degree_classes(c)) {
            DegreeBlock dg;
            dg.degree = q;
            dg.generators = detail::generators_in(c, q);
            auto below = detail::generators_in(c, detail::class_shift(c, q, -1));
            auto above = detail::generators_in(c, detail::class_shift(c, q, 1));
            dg.kernel = kernel_basis(detail::block(c, below, dg.generators));
            BigMatrix bnd = detail::block(c, dg.generators, above);
            BigMatrix y(dg.kernel.cols(), bnd.cols());
            for (std::size_t j = 0; j < bnd.cols(); ++j) {
                auto sol = solve_integer(dg.kernel, bnd.column(j));
                if (!sol)
                    throw Error(ErrorKind::not_a_complex, "boundary is not a cycle");
                for (std::size_t i = 0; i < sol->size(); ++i)
                    y(i, j) = (*sol)[i];
            }
            dg.relation = smith_normal_form(y);
            BigMatrix reps = dg.kernel * dg.relation.U_inverse;
            const std::size_t r = dg.relation.rank();
            for (std::size_t i = 0; i < r; ++i)
                if (dg.relation.diagonal[i] != 1)
                    dg.torsion.push_back(dg.relation.diagonal[i]);
            for (std::size_t col = r; col < reps.cols(); ++col) {
                Chain z;
                for (std::size_t i = 0; i < reps.rows(); ++i)
                    if (reps(i, col) != 0)
                        z[dg.generators[i]] = detail::to_int(reps(i, col));
                dg.free.push_back(std::move(z));
            }
            index_[q] = degrees_.size();
            degrees_.push_back(std::move(dg));
        }
    }

    const std::vector<DegreeBlock>& degrees() const { return degrees_; }

    const DegreeBlock* find(std::int64_t degree) const
    {
        auto it = index_.find(Degree{degree, complex_.modulus()}.value());
        return it == index_.end() ? nullptr : &degrees_[it->second];
    }

    /// Coordinates of a homogeneous cycle of degree q on the free generators.
    /// Throws when z is not a cycle.
    std::vector<BigInt> free_coordinates(std::int64_t q, const Chain& z) const
    {
        if (!complex_.d(z).empty())
            throw Error(ErrorKind::hypothesis, "element is not closed");
        const DegreeBlock* dg = find(q);
        if (!dg)
            return {};
        std::vector<BigInt> rhs(dg->generators.size());
        for (const auto& [i, v] : z) {
            auto it = std::find(dg->generators.begin(), dg->generators.end(), i);
            if (it == dg->generators.end())
                throw Error(ErrorKind::invalid_grading, "cycle is not homogeneous of the requested degree");
            rhs[static_cast<std::size_t>(it - dg->generators.begin())] = v;
        }
        auto c = solve_integer(dg->kernel, rhs);
        if (!c)
            throw Error(ErrorKind::hypothesis, "element is not closed");
        std::vector<BigInt> uc = dg->relation.U * *c;
        return std::vector<BigInt>(uc.begin() + static_cast<std::ptrdiff_t>(dg->relation.rank()), uc.end());
    }

    const ChainComplex& complex() const { return complex_; }

private:
    ChainComplex complex_;
    std::vector<DegreeBlock> degrees_;
    std::map<std::int64_t, std::size_t> index_;
};

/// Whether z is d of some integer chain.
inline bool is_boundary(const ChainComplex& c, const Chain& z)
{
    BigMatrix d(c.size(), c.size());
    for (std::size_t a = 0; a < c.size(); ++a)
        for (const auto& [b, v] : c.differential().column(a))
            d(b, a) = v;
    std::vector<BigInt> rhs(c.size());
    for (const auto& [i, v] : z)
        rhs.at(i) = v;
    return solve_integer(d, rhs).has_value();
}

/// A preimage of z under d, if one exists.
inline std::optional<Chain> boundary_preimage(const ChainComplex& c, const Chain& z)
{
    BigMatrix d(c.size(), c.size());
    for (std::size_t a = 0; a < c.size(); ++a)
        for (const auto& [b, v] : c.differential().column(a))
            d(b, a) = v;
    std::vector<BigInt> rhs(c.size());
    for (const auto& [i, v] : z)
        rhs.at(i) = v;
    auto sol = solve_integer(d, rhs);
    if (!sol)
        return std::nullopt;
    Chain out;
    for (std::size_t i = 0; i < sol->size(); ++i)
        if ((*sol)[i] != 0)
            out[i] = detail::to_int((*sol)[i]);
    return out;
}

} // namespace floerq

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace floerq {

enum class ErrorKind {
    invalid_grading,
    grading_mismatch,
    shape,
    not_a_complex,
    lookup,
    validation,
    composition,
    genericity,
    missing_table,
    hypothesis,
    parse,
    overflow,
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_grading: return "invalid-grading";
    case ErrorKind::grading_mismatch: return "grading-mismatch";
    case ErrorKind::shape: return "shape";
    case ErrorKind::not_a_complex: return "not-a-complex";
    case ErrorKind::lookup: return "lookup";
    case ErrorKind::validation: return "validation";
    case ErrorKind::composition: return "composition";
    case ErrorKind::genericity: return "genericity";
    case ErrorKind::missing_table: return "missing-table";
    case ErrorKind::hypothesis: return "hypothesis";
    case ErrorKind::parse: return "parse";
    case ErrorKind::overflow: return "overflow";
    }
    return "unknown";
}

/// Single exception type for the library; `kind()` tells callers which
/// contract was broken.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Coefficients of chains, tensors and count tables.
using Int = std::int64_t;

inline Int checked_add(Int a, Int b)
{
    Int r;
    if (__builtin_add_overflow(a, b, &r))
        throw Error(ErrorKind::overflow, "integer addition overflow");
    return r;
}

inline Int checked_mul(Int a, Int b)
{
    Int r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Error(ErrorKind::overflow, "integer multiplication overflow");
    return r;
}

/// (-1)^e for any integer e.
constexpr int sign_power(std::int64_t e) { return (e % 2 == 0) ? 1 : -1; }

/// Non-negative residue of a modulo m (m > 0).
constexpr std::int64_t mod_floor(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace floerq

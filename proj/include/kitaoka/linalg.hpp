#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

// Small dense exact linear algebra, row-major storage.
namespace kitaoka::linalg {

/// Determinant of an n x n integer matrix (fraction-free Bareiss elimination).
mpz_class det(std::vector<mpz_class> m, int n);

/// Inverse of an n x n rational matrix, or nullopt when singular.
std::optional<std::vector<mpq_class>> inverse(std::vector<mpq_class> m, int n);

/// Solves m x = b over Q; nullopt when m is singular.
std::optional<std::vector<mpq_class>> solve(std::vector<mpq_class> m, std::vector<mpq_class> b, int n);

} // namespace kitaoka::linalg

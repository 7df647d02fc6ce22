#include "kitaoka/linalg.hpp"

#include <utility>

namespace kitaoka::linalg {

mpz_class det(std::vector<mpz_class> m, int n)
{
    if (n == 0) return 1;
    int sign = 1;
    mpz_class prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k * n + k] == 0) {
            int p = k + 1;
            while (p < n && m[p * n + k] == 0) ++p;
            if (p == n) return 0;
            for (int j = 0; j < n; ++j) std::swap(m[k * n + j], m[p * n + j]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                mpz_class v = m[k * n + k] * m[i * n + j] - m[i * n + k] * m[k * n + j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m[i * n + j] = v;
            }
        }
        prev = m[k * n + k];
    }
    return sign * m[(n - 1) * n + (n - 1)];
}

std::optional<std::vector<mpq_class>> solve(std::vector<mpq_class> m, std::vector<mpq_class> b, int n)
{
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && m[p * n + k] == 0) ++p;
        if (p == n) return std::nullopt;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(m[k * n + j], m[p * n + j]);
            std::swap(b[k], b[p]);
        }
        mpq_class inv = 1 / m[k * n + k];
        for (int j = k; j < n; ++j) m[k * n + j] *= inv;
        b[k] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == k || m[i * n + k] == 0) continue;
            mpq_class f = m[i * n + k];
            for (int j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
            b[i] -= f * b[k];
        }
    }
    return b;
}

std::optional<std::vector<mpq_class>> inverse(std::vector<mpq_class> m, int n)
{
    std::vector<mpq_class> inv(n * n);
    for (int i = 0; i < n; ++i) inv[i * n + i] = 1;
    for (int k = 0; k < n; ++k) {
        int p = k;
        while (p < n && m[p * n + k] == 0) ++p;
        if (p == n) return std::nullopt;
        if (p != k)
            for (int j = 0; j < n; ++j) {
                std::swap(m[k * n + j], m[p * n + j]);
                std::swap(inv[k * n + j], inv[p * n + j]);
            }
        mpq_class s = 1 / m[k * n + k];
        for (int j = 0; j < n; ++j) {
            m[k * n + j] *= s;
            inv[k * n + j] *= s;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k || m[i * n + k] == 0) continue;
            mpq_class f = m[i * n + k];
            for (int j = 0; j < n; ++j) {
                m[i * n + j] -= f * m[k * n + j];
                inv[i * n + j] -= f * inv[k * n + j];
            }
        }
    }
    return inv;
}

} // namespace kitaoka::linalg

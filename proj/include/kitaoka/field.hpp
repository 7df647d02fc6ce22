#pragma once

#include "kitaoka/error.hpp"
#include "kitaoka/poly.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kitaoka {

/// Catalog description of a totally real field: defining polynomial, an
/// integral basis in the power basis of a root t, unit generators and the
/// discriminant the basis must reproduce.
struct FieldSpec {
    std::string id;
    int degree = 0;
    std::vector<mpz_class> poly;                        // constant term first, monic
    std::vector<std::vector<mpq_class>> integral_basis; // row i = omega_i in powers of t
    std::vector<std::string> units;                     // element strings
    mpz_class disc;
    std::optional<bool> known_positive;
};

class Field;

/// Algebraic integer as integer coordinates over the integral basis of its field.
class Elem {
public:
    Elem() = default;
    Elem(const Field& field, std::vector<mpz_class> coords);

    const Field& field() const { return *field_; }
    bool has_field() const { return field_ != nullptr; }
    const std::vector<mpz_class>& coords() const { return c_; }
    const mpz_class& operator[](std::size_t i) const { return c_[i]; }
    int degree() const { return static_cast<int>(c_.size()); }
    bool is_zero() const;

    Elem& operator+=(const Elem& b);
    Elem& operator-=(const Elem& b);
    Elem& operator*=(const Elem& b);
    Elem operator-() const;
    friend Elem operator+(Elem a, const Elem& b) { return a += b; }
    friend Elem operator-(Elem a, const Elem& b) { return a -= b; }
    friend Elem operator*(const Elem& a, const Elem& b);
    friend Elem operator*(long s, const Elem& a);
    friend bool operator==(const Elem& a, const Elem& b) { return a.c_ == b.c_; }

    Elem pow(unsigned long e) const;

private:
    const Field* field_ = nullptr;
    std::vector<mpz_class> c_;
};

/// Field element with rational coordinates over the integral basis.
class ElemQ {
public:
    ElemQ() = default;
    ElemQ(const Field& field, std::vector<mpq_class> coords);
    explicit ElemQ(const Elem& a);

    const Field& field() const { return *field_; }
    const std::vector<mpq_class>& coords() const { return c_; }
    bool is_integral() const;
    bool is_zero() const;
    /// Throws NotIntegral unless every coordinate is an integer.
    Elem to_elem() const;

    friend ElemQ operator+(const ElemQ& a, const ElemQ& b);
    friend ElemQ operator-(const ElemQ& a, const ElemQ& b);
    friend ElemQ operator*(const ElemQ& a, const ElemQ& b);
    friend ElemQ operator*(const mpq_class& s, const ElemQ& a);
    friend bool operator==(const ElemQ& a, const ElemQ& b) { return a.c_ == b.c_; }

private:
    const Field* field_ = nullptr;
    std::vector<mpq_class> c_;
};

/// Canonical order on elements: ascending trace, then lexicographic coordinates.
bool canonical_less(const Elem& a, const Elem& b);
/// Plain lexicographic order on coordinates.
bool lex_less(const Elem& a, const Elem& b);

/// A loaded, validated field. Immutable after load apart from the internal
/// root-interval cache, which only ever refines.
class Field {
public:
    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;

    const FieldSpec& spec() const { return spec_; }
    const std::string& id() const { return spec_.id; }
    int degree() const { return d_; }
    const Poly& poly() const { return f_; }
    const mpz_class& disc() const { return spec_.disc; }
    /// omega_i * omega_j = sum_k mult(i, j, k) omega_k
    const mpz_class& mult(int i, int j, int k) const { return mult_[(i * d_ + j) * d_ + k]; }

    Elem zero() const;
    Elem one() const;
    Elem integer(long n) const;
    Elem integer(const mpz_class& n) const;
    Elem basis(int i) const;
    Elem from_coords(std::span<const std::int64_t> coords) const;

    /// Power-basis coefficients (constant first, length d) of an element.
    std::vector<mpq_class> to_power_basis(const std::vector<mpq_class>& coords) const;
    std::vector<mpq_class> to_power_basis(const Elem& a) const;
    /// Integral-basis coordinates of sum_k p_k t^k; p may have any length.
    ElemQ from_power_basis(const std::vector<mpq_class>& p) const;

    /// Regular representation: column j holds the coordinates of a * omega_j.
    std::vector<mpz_class> regular_matrix(const Elem& a) const;

    /// Isolating interval of the i-th real root (ascending) of width <= 2^-bits.
    Interval root(int i, long bits) const;
    /// Interval containing sigma_i(a), where the root interval has width <= 2^-bits.
    Interval embedding(const std::vector<mpq_class>& power_coeffs, int i, long bits) const;
    /// Double approximation of sigma_i(omega_j) and a bound on its absolute error.
    double basis_embedding(int i, int j) const { return emb_[i * d_ + j]; }
    double basis_embedding_error(int i, int j) const { return emb_err_[i * d_ + j]; }
    const mpz_class& basis_trace(int j) const { return omega_trace_[j]; }
    /// d x d matrix Tr(omega_i omega_j), the integer realisation of x^2.
    const std::vector<mpz_class>& trace_gram() const { return trace_gram_; }

    /// Exact sign of sigma_i(a) for small integer coordinates; falls back to
    /// interval refinement when the floating-point estimate is not certified.
    int sign_at(std::span<const std::int64_t> coords, int i) const;
    bool is_totally_positive(std::span<const std::int64_t> coords) const;

    struct LoadAccess;

private:
    friend struct LoadAccess;
    Field() = default;

    FieldSpec spec_;
    int d_ = 0;
    Poly f_;
    std::vector<mpq_class> basis_inv_; // d x d, row-major: power coeffs -> basis coords
    std::vector<mpz_class> mult_;
    std::vector<mpz_class> omega_trace_;
    std::vector<mpz_class> trace_gram_;
    std::vector<double> emb_;
    std::vector<double> emb_err_;

    mutable std::mutex root_mutex_;
    mutable std::vector<Interval> roots_;
    mutable std::vector<long> root_bits_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Validates a spec (total realness via Sturm sequences, ring closure of the
/// basis, discriminant) and builds the multiplication table and embeddings.
FieldPtr load_field(FieldSpec spec);

// Exact element-level operations.
int sign_at(const Elem& a, int i);
bool is_totally_positive(const Elem& a);
bool is_totally_nonneg(const Elem& a);
std::vector<int> signs(const Elem& a);
mpz_class trace(const Elem& a);
mpz_class norm(const Elem& a);
mpq_class trace_abs(const Elem& a);
/// Interval of width <= prec containing sigma_i(a).
Interval embedding(const Elem& a, int i, const mpq_class& prec);
/// Interval of width <= prec containing max_i |sigma_i(a)|.
Interval house(const Elem& a, const mpq_class& prec);
double approx_embedding(const Elem& a, int i);
bool is_unit(const Elem& a);

/// a / b in K; throws DivisionByZero for b = 0.
ElemQ divide(const Elem& a, const Elem& b);
/// a / b when the quotient is an algebraic integer.
std::optional<Elem> exact_divide(const Elem& a, const Elem& b);

bool two_is_ramified(const Field& f);

} // namespace kitaoka

#pragma once

#include "kitaoka/enumerate.hpp"
#include "kitaoka/field.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kitaoka {

/// Classical totally positive definite quadratic form of rank r over O_K,
/// stored as its symmetric Gram matrix B(e_i, e_j).
class GramForm {
public:
    /// Validates symmetry and total positive definiteness (exact signs of the
    /// leading principal minors). Throws NotSymmetric / NotPositiveDefinite.
    GramForm(const Field& f, int rank, std::vector<Elem> gram);

    const Field& field() const { return *field_; }
    int rank() const { return r_; }
    const Elem& at(int i, int j) const { return g_[i * r_ + j]; }
    const std::vector<Elem>& gram() const { return g_; }
    bool is_diagonal() const;

    Elem evaluate(const std::vector<Elem>& v) const;
    Elem bilinear(const std::vector<Elem>& u, const std::vector<Elem>& v) const;

private:
    const Field* field_;
    int r_;
    std::vector<Elem> g_;
};

/// Diagonal form <a_1, ..., a_r>.
GramForm diag(const std::vector<Elem>& entries);
GramForm diag(const Field& f, std::initializer_list<long> entries);

/// "<a,b,c>" (diagonal) or "[[g11,g12],[g21,g22]]" with element-grammar
/// entries. Non-integral entries are rejected with NotClassical.
GramForm parse_form(const Field& f, std::string_view s);
std::string format_form(const GramForm& q);

/// Integer trace-form realisation: the rd x rd matrix with entry
/// ((i,a),(j,b)) = Tr(g_ij w_a w_b), indices flattened as i*d + a, together
/// with the d forms x -> Tr(w_k Q(x)) that decide Q(x) = alpha exactly.
class ZRealization {
public:
    explicit ZRealization(const GramForm& q);

    int dim() const { return n_; }
    const std::vector<mpz_class>& matrix() const { return m_[0]; }
    /// True iff the integer vector x encodes v with Q(v) = alpha.
    bool hits(std::span<const std::int64_t> x, const std::vector<mpz_class>& targets) const;
    /// Tr(w_k alpha) for every k; the first entry is Tr(alpha).
    std::vector<mpz_class> targets(const Elem& alpha) const;
    std::vector<Elem> unflatten(std::span<const std::int64_t> x) const;

private:
    const GramForm* q_;
    int n_;
    std::vector<std::vector<mpz_class>> m_;
    std::vector<enumerate::QuadEval> eval_;
};

struct Witness {
    std::vector<Elem> v;
};

/// Canonical (lexicographically smallest) v with Q(v) = alpha, or none, which
/// is then a proof of non-representation. Throws BudgetExceeded.
std::optional<Witness> represents(const GramForm& q, const Elem& alpha, const enumerate::Options& opt = {});
/// Every v with Q(v) = alpha, lexicographic.
std::vector<Witness> all_representations(const GramForm& q, const Elem& alpha, const enumerate::Options& opt = {});

/// Square root with the first embedding nonnegative, if alpha is a square.
std::optional<Elem> sqrt_elem(const Elem& alpha, const enumerate::Options& opt = {});
bool is_square(const Elem& alpha, const enumerate::Options& opt = {});
/// Some beta with beta^2 = n when sqrt(n) lies in the field.
std::optional<Elem> contains_sqrt(const Field& f, long n, const enumerate::Options& opt = {});

struct UniversalResult {
    std::optional<Elem> counterexample; // exact non-universality proof when present
    std::size_t checked = 0;
};
UniversalResult is_universal_up_to(const GramForm& q, long trace_bound, const enumerate::Options& opt = {});

struct SplitResult {
    std::vector<Elem> transform; // r x r, row-major, unit determinant
    GramForm rest;
};
/// L = <eps> + L' for a totally positive unit eps represented by L.
/// Throws NotAUnit, NotRepresented.
SplitResult split_off_unit(const GramForm& q, const Elem& eps, const enumerate::Options& opt = {});

/// alpha * beta is a square, i.e. a unary lattice represents both.
bool unary_corepresent(const Elem& alpha, const Elem& beta, const enumerate::Options& opt = {});

/// <a> and <b> are isometric iff a = u^2 b for a unit u.
bool unary_isometric(const Elem& a, const Elem& b, const enumerate::Options& opt = {});

struct DiagonalShape {
    enum Kind { Shape11a, Shape1ga, NotApplicable } kind = NotApplicable;
    std::optional<Elem> gamma, t, alpha; // 2 = gamma t^2 for Shape1ga
};
/// Normal form of a diagonal ternary representing 1 and 2 over a field
/// without sqrt(2). Throws PreconditionFailed.
DiagonalShape classify_diagonal_ternary(const GramForm& q, const enumerate::Options& opt = {});

struct CoverageEntry {
    Elem alpha;
    std::optional<Witness> witness; // for the scaled target
};
struct CoverageResult {
    std::vector<CoverageEntry> entries; // up to and including the first failure
    std::optional<Elem> counterexample;
};
/// 2 alpha -> <1,1,2,2> for every totally positive alpha with Tr(alpha) <= T.
CoverageResult check_1122_coverage(const Field& f, long trace_bound, const enumerate::Options& opt = {},
                                   bool stop_at_first = true);
/// lambda alpha -> <1,1,lambda,lambda>; lambda must be an indecomposable nonsquare.
CoverageResult check_lambda_coverage(const Elem& lambda, long trace_bound, const enumerate::Options& opt = {},
                                     bool stop_at_first = true);

/// (x, y, z, w) for <1,1,2,2> at 2 alpha  ->  (x, y, z+w, z-w) for <1,1,1,1>.
Witness four_square_witness_from_1122(const Witness& w);
/// ((x+y)/2, (x-y)/2, z, w) for <1,1,1,1> at alpha; requires 2 unramified.
/// Throws PreconditionFailed, NotIntegralHalves.
Witness halve_witness_unramified(const Elem& alpha, const Witness& w);

} // namespace kitaoka

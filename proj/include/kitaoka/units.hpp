#pragma once

#include "kitaoka/enumerate.hpp"
#include "kitaoka/field.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace kitaoka {

// --- real quadratic fields -------------------------------------------------

struct QuadraticData {
    mpz_class disc;
    Elem sqrt_disc; // positive at the last embedding
    Elem omega0;    // sqrt(D)/2 or (1+sqrt(D))/2
};
/// Throws NotQuadratic.
QuadraticData quadratic_data(const Field& f);
/// First partial quotients of -omega0' = (P + sqrt(D))/Q.
std::vector<mpz_class> cf_partial_quotients(const QuadraticData& q, std::size_t count);
/// Convergent numerators/denominators p_i, q_i for i = -1 .. count-1 (index shifted by one).
void cf_convergents(const std::vector<mpz_class>& u, std::vector<mpz_class>& p, std::vector<mpz_class>& q);

/// Fundamental unit > 1 at the last embedding. Throws NotQuadratic.
Elem fundamental_unit_quadratic(const Field& f);

// --- unit groups and signatures --------------------------------------------

struct UnitGroup {
    enum Source { Computed, Catalog };
    std::vector<Elem> generators; // -1 is implicit
    bool includes_torsion = true;
    Source source = Catalog;
};

/// Quadratic fields: computed, and cross-checked against any catalog entry.
/// Otherwise the catalog generators, each verified to have norm +-1.
/// Throws UnitsUnavailable, CatalogIncomplete.
UnitGroup unit_group(const Field& f);

/// Sign vector, entry i for the i-th ascending embedding. Throws ZeroElement.
std::vector<int> signature(const Elem& a);
/// Bit i set iff sigma_i(a) < 0.
std::uint64_t signature_bits(const Elem& a);

/// F2 row space spanned by the signatures of -1 and the generators.
class SignatureSubgroup {
public:
    SignatureSubgroup(int degree, const std::vector<std::uint64_t>& sigs);

    int degree() const { return d_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    int k() const { return d_ - rank(); }
    bool contains(std::uint64_t sig) const { return solve(sig).has_value(); }
    /// Subset (bit j = j-th input signature) whose product is sig.
    std::optional<std::uint64_t> solve(std::uint64_t sig) const;
    /// Basis of the subsets whose signatures multiply to all-plus.
    const std::vector<std::uint64_t>& kernel() const { return kernel_; }
    /// All 2^rank elements, sorted.
    std::vector<std::uint64_t> elements() const;

private:
    int d_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> rows_; // (pivoted signature, subset)
    std::vector<std::uint64_t> kernel_;
};

/// Generators are ordered [-1, g_1, g_2, ...].
SignatureSubgroup signature_subgroup(const Field& f, const UnitGroup& u);
/// Product of the [-1, g_1, ...] selected by subset.
Elem unit_from_subset(const Field& f, const UnitGroup& u, std::uint64_t subset);

struct SquareClassData {
    int k = 0;
    std::optional<Elem> epsilon;
};

/// |U+/U^2| = 2^k and, for k >= 1, a nonsquare totally positive unit.
/// Throws CatalogIncomplete if a kernel element turns out to be a square.
SquareClassData tp_units_mod_squares(const Field& f, const UnitGroup& u, const enumerate::Options& opt = {});

enum class MClass { Plus, Minus };
const char* mclass_name(MClass m);

/// Throws RequiresKOne, ZeroElement.
MClass classify_M(const SquareClassData& data, const UnitGroup& u, const Elem& beta);
/// Unit eta with eta * alpha totally positive, if any. Throws ZeroElement.
std::optional<Elem> eta_for(const UnitGroup& u, const Elem& alpha);

/// T(alpha) = sqrt(alpha) or sqrt(eps alpha), first embedding positive.
/// Throws RequiresKOne, NotTotallyPositive, HypothesisFailed.
Elem descent_step(const SquareClassData& data, const Elem& alpha, const enumerate::Options& opt = {});

struct DescentStep {
    Elem alpha;
    Elem t;               // T(alpha)
    bool used_epsilon = false;
    MClass cls = MClass::Plus;
    std::optional<Elem> eta; // for M_plus steps
};

struct DescentTrace {
    std::vector<DescentStep> steps;
    Elem beta;      // final M_minus element
    int j = -1;     // |N(beta)| = 2^j, -1 if not a power of two
};

/// Iterates T from alpha_0 = 2 until an M_minus element appears.
/// Throws RequiresKOne, HypothesisFailed, IterationLimit.
DescentTrace descent_run(const Field& f, const SquareClassData& data, const UnitGroup& u, int max_iter = 16,
                         const enumerate::Options& opt = {});

struct UnitCheck {
    std::size_t units_found = 0;
    std::optional<Elem> stray; // a unit of bounded house outside the generated group
};
/// Every unit of house <= house_bound lies in <-1, generators>.
UnitCheck check_unit_group(const Field& f, const UnitGroup& u, long house_bound = 20,
                           const enumerate::Options& opt = {});

} // namespace kitaoka

#pragma once

#include "kitaoka/enumerate.hpp"
#include "kitaoka/field.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace kitaoka {

/// All totally positive integers of trace <= T, ascending trace then
/// lexicographic coordinates. Throws BudgetExceeded.
std::vector<Elem> enumerate_tp_by_trace(const Field& f, long trace_bound, const enumerate::Options& opt = {});

struct IndecompVerdict {
    bool indecomposable = false;
    std::optional<std::pair<Elem, Elem>> witness; // (beta, gamma), beta + gamma = alpha
};

/// Exhaustive decision; throws NotTotallyPositive.
IndecompVerdict is_indecomposable(const Elem& alpha, const enumerate::Options& opt = {});
/// N(alpha) < 2^d, a sufficient condition for indecomposability.
bool indecomposable_by_norm(const Elem& alpha);

using Decomposition = std::vector<Elem>; // parts in nonincreasing canonical order

/// Every multiset of at most max_parts totally positive integers summing to alpha.
std::vector<Decomposition> decompositions(const Elem& alpha, int max_parts, const enumerate::Options& opt = {});

struct SmallNormEntry {
    Elem alpha;
    mpz_class norm;
    bool power_of_two = false;
};

struct SmallNormScan {
    std::vector<SmallNormEntry> entries; // norm < 2^d, canonical order
    long trace_bound = 0;
    /// Quadratic fields: trace bound that makes the scan complete up to
    /// multiplication by totally positive units; 0 otherwise.
    long required_bound = 0;
    bool exhaustive_mod_units = false;
};

/// Totally positive alpha with Tr(alpha) <= budget and N(alpha) < 2^d. With
/// require_exhaustive the scan is extended to the complete bound (quadratic
/// fields only; UnitsUnavailable otherwise).
SmallNormScan small_norm_scan(const Field& f, long budget, bool require_exhaustive = false,
                              const enumerate::Options& opt = {});

/// Indecomposables of a real quadratic field from the semiconvergents of the
/// continued fraction of -w0' (w0 = sqrt(D)/2 or (1+sqrt(D))/2), together with
/// their conjugates, up to the given trace. Throws NotQuadratic.
std::vector<Elem> cf_indecomposable_candidates(const Field& f, long trace_cap = 20);

} // namespace kitaoka

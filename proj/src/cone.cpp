#include "kitaoka/cone.hpp"

#include "kitaoka/units.hpp"

#include <algorithm>
#include <cmath>

namespace kitaoka {

namespace {

mpz_class pow2(int d)
{
    mpz_class r = 1;
    r <<= d;
    return r;
}

void require_tp(const Elem& a)
{
    if (!is_totally_positive(a)) fail(Errc::NotTotallyPositive, "element is not totally positive");
}

// Integer trace for small coordinates.
long trace_small(const Field& f, std::span<const std::int64_t> x)
{
    long t = 0;
    for (int i = 0; i < f.degree(); ++i) t += x[i] * f.basis_trace(i).get_si();
    return t;
}

// x in O_K with Tr(x^2) <= bound and trace <= max_trace passing the filter.
template <class Filter>
std::vector<Elem> tp_points(const Field& f, const mpz_class& square_bound, long max_trace, Filter&& keep,
                            const enumerate::Options& opt)
{
    enumerate::Enumerator e(f.trace_gram(), f.degree(), square_bound);
    auto r = e.collect(
        [&](std::span<const std::int64_t> x) {
            long t = trace_small(f, x);
            return t >= 1 && t <= max_trace && f.is_totally_positive(x) && keep(x);
        },
        opt);
    std::vector<Elem> out;
    out.reserve(r.found.size());
    for (const auto& x : r.found) out.push_back(f.from_coords(x));
    std::stable_sort(out.begin(), out.end(), canonical_less);
    return out;
}

} // namespace

std::vector<Elem> enumerate_tp_by_trace(const Field& f, long trace_bound, const enumerate::Options& opt)
{
    if (trace_bound < 1) return {};
    // every embedding lies in (0, T), so Tr(x^2) < T^2
    mpz_class bound = trace_bound;
    bound *= trace_bound;
    return tp_points(f, bound, trace_bound, [](auto) { return true; }, opt);
}

IndecompVerdict is_indecomposable(const Elem& alpha, const enumerate::Options& opt)
{
    require_tp(alpha);
    const Field& f = alpha.field();
    // 0 < delta < alpha in every embedding: Tr(delta^2) < Tr(alpha^2) and
    // Tr(delta) <= Tr(alpha) - 1.
    long ta = trace(alpha).get_si();
    mpz_class bound = trace(alpha * alpha) - 1;
    mpz_class tb = ta - 1;
    tb *= tb;
    if (tb < bound) bound = tb;
    enumerate::Enumerator e(f.trace_gram(), f.degree(), bound);
    auto r = e.find_first(
        [&](std::span<const std::int64_t> x) {
            long t = trace_small(f, x);
            if (t < 1 || t > ta - 1 || !f.is_totally_positive(x)) return false;
            return is_totally_positive(alpha - f.from_coords(x));
        },
        opt);
    IndecompVerdict v;
    if (!r.found) {
        v.indecomposable = true;
        return v;
    }
    Elem beta = f.from_coords(*r.found);
    Elem gamma = alpha - beta;
    if (!(beta + gamma == alpha) || !is_totally_positive(beta) || !is_totally_positive(gamma))
        fail(Errc::Internal, "decomposition witness failed re-validation");
    v.witness.emplace(std::move(beta), std::move(gamma));
    return v;
}

bool indecomposable_by_norm(const Elem& alpha)
{
    require_tp(alpha);
    return norm(alpha) < pow2(alpha.degree());
}

std::vector<Decomposition> decompositions(const Elem& alpha, int max_parts, const enumerate::Options& opt)
{
    require_tp(alpha);
    if (max_parts < 1) fail(Errc::PreconditionFailed, "max_parts must be positive");
    const Field& f = alpha.field();
    // candidate parts: totally positive delta with alpha - delta totally nonnegative
    long ta = trace(alpha).get_si();
    auto parts = tp_points(
        f, trace(alpha * alpha), ta,
        [&](std::span<const std::int64_t> x) { return is_totally_nonneg(alpha - f.from_coords(x)); }, opt);

    std::vector<Decomposition> out;
    Decomposition cur;
    std::uint64_t steps = 0;
    // parts are chosen in nonincreasing canonical order: index into `parts` never increases
    auto rec = [&](auto&& self, const Elem& rest, std::size_t max_index, int left) -> void {
        if (++steps > opt.node_limit) fail(Errc::BudgetExceeded, "decomposition search exceeded its budget");
        if (rest.is_zero()) {
            out.push_back(cur);
            return;
        }
        if (left == 0) return;
        for (std::size_t i = max_index + 1; i-- > 0;) {
            const Elem& p = parts[i];
            if (canonical_less(rest, p)) continue;
            Elem r = rest - p;
            if (!r.is_zero() && !is_totally_positive(r)) continue;
            cur.push_back(p);
            self(self, r, i, left - 1);
            cur.pop_back();
        }
    };
    if (!parts.empty()) rec(rec, alpha, parts.size() - 1, max_parts);
    std::sort(out.begin(), out.end(), [](const Decomposition& a, const Decomposition& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [](const Elem& x, const Elem& y) { return canonical_less(y, x); });
    });
    return out;
}

SmallNormScan small_norm_scan(const Field& f, long budget, bool require_exhaustive, const enumerate::Options& opt)
{
    SmallNormScan s;
    const int d = f.degree();
    if (d == 2) {
        // A totally positive unit eps+ moves sigma_1/sigma_2 by eps+^2, so every
        // orbit meets sigma_1/sigma_2 in [1/e, e] with e the larger conjugate of
        // eps+. There Tr(alpha)^2 = N (rho^(1/2) + rho^(-1/2))^2 <= N (Tr eps+ + 2).
        Elem eps = fundamental_unit_quadratic(f);
        if (norm(eps) < 0) eps = eps * eps;
        mpz_class need = (pow2(d) - 1) * (trace(eps) + 2);
        mpz_class root;
        mpz_sqrt(root.get_mpz_t(), need.get_mpz_t());
        s.required_bound = root.get_si();
        if (require_exhaustive) budget = std::max(budget, s.required_bound);
        s.exhaustive_mod_units = budget >= s.required_bound;
    } else if (require_exhaustive) {
        fail(Errc::UnitsUnavailable, "exhaustive small-norm scan needs a quadratic field");
    }
    s.trace_bound = budget;
    const mpz_class limit = pow2(d);
    for (auto& a : enumerate_tp_by_trace(f, budget, opt)) {
        mpz_class n = norm(a);
        if (n >= limit) continue;
        bool p2 = mpz_popcount(n.get_mpz_t()) == 1;
        s.entries.push_back({std::move(a), n, p2});
    }
    return s;
}

std::vector<Elem> cf_indecomposable_candidates(const Field& f, long trace_cap)
{
    QuadraticData qd = quadratic_data(f);
    std::vector<Elem> out;
    auto push = [&](const Elem& a) {
        if (trace(a) > trace_cap) return;
        if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    };
    // conj(a) = Tr(a) - a
    auto conj = [&](const Elem& a) { return f.integer(trace(a)) - a; };

    for (std::size_t terms = 16;; terms *= 2) {
        auto u = cf_partial_quotients(qd, terms);
        std::vector<mpz_class> p, q;
        cf_convergents(u, p, q); // p[i+1] = p_i
        auto alpha = [&](long i) { return f.integer(p[i + 1]) + f.integer(q[i + 1]) * qd.omega0; };
        out.clear();
        bool exhausted = false;
        for (long i = -1; i + 2 < static_cast<long>(u.size()); i += 2) {
            Elem ai = alpha(i), an = alpha(i + 1);
            if (trace(ai) > trace_cap) {
                exhausted = true;
                break;
            }
            for (mpz_class r = 0; r < u[i + 2]; ++r) {
                Elem a = ai + f.integer(r) * an;
                push(a);
                push(conj(a));
            }
        }
        if (exhausted) break;
        if (terms > 4096) fail(Errc::IterationLimit, "continued fraction did not reach the trace cap");
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

} // namespace kitaoka

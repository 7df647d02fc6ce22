#include "kitaoka/units.hpp"

#include "kitaoka/element_io.hpp"
#include "kitaoka/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace kitaoka {

// ---------------------------------------------------------------------------
// Real quadratic fields

QuadraticData quadratic_data(const Field& f)
{
    if (f.degree() != 2) fail(Errc::NotQuadratic, f.id() + " is not a quadratic field");
    const auto& poly = f.spec().poly; // x^2 + b x + c
    const mpz_class& b = poly[1];
    const mpz_class& c = poly[0];
    mpz_class pd = b * b - 4 * c;
    QuadraticData q;
    q.disc = f.disc();
    if (pd % q.disc != 0) fail(Errc::Internal, "polynomial discriminant is not a multiple of the field discriminant");
    mpz_class m2 = pd / q.disc, m;
    mpz_sqrt(m.get_mpz_t(), m2.get_mpz_t());
    if (m * m != m2) fail(Errc::Internal, "index of Z[t] is not an integer");
    // 2t + b = sqrt(b^2 - 4c) at the larger root
    q.sqrt_disc = f.from_power_basis({mpq_class(b, m), mpq_class(2, m)}).to_elem();
    ElemQ s(q.sqrt_disc);
    mpq_class half(1, 2);
    ElemQ w = q.disc % 4 == 0 ? half * s : half * (ElemQ(f.one()) + s);
    q.omega0 = w.to_elem();
    return q;
}

std::vector<mpz_class> cf_partial_quotients(const QuadraticData& qd, std::size_t count)
{
    const mpz_class& n = qd.disc;
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
    // -omega0' = (P + sqrt(N)) / Q
    mpz_class P = n % 4 == 0 ? 0 : -1, Q = 2;
    std::vector<mpz_class> u;
    u.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        mpz_class a, num = P + s;
        if (Q > 0) {
            mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
        } else {
            mpz_class aq = -Q;
            mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), aq.get_mpz_t());
            a = -a - 1;
        }
        u.push_back(a);
        P = a * Q - P;
        Q = (n - P * P) / Q;
    }
    return u;
}

void cf_convergents(const std::vector<mpz_class>& u, std::vector<mpz_class>& p, std::vector<mpz_class>& q)
{
    p.assign(1, 1);
    q.assign(1, 0);
    mpz_class pp = 0, qq = 1;
    for (const auto& a : u) {
        mpz_class np = a * p.back() + pp, nq = a * q.back() + qq;
        pp = p.back();
        qq = q.back();
        p.push_back(np);
        q.push_back(nq);
    }
}

Elem fundamental_unit_quadratic(const Field& f)
{
    QuadraticData qd = quadratic_data(f);
    for (std::size_t terms = 8; terms <= (1u << 16); terms *= 2) {
        auto u = cf_partial_quotients(qd, terms);
        std::vector<mpz_class> p, q;
        cf_convergents(u, p, q);
        for (std::size_t k = 1; k < p.size(); ++k) { // p[k] = p_{k-1}
            Elem a = f.integer(p[k]) + f.integer(q[k]) * qd.omega0;
            if (is_unit(a)) return a;
        }
    }
    fail(Errc::IterationLimit, "no unit among the convergents");
}

// ---------------------------------------------------------------------------
// Unit groups and signatures

UnitGroup unit_group(const Field& f)
{
    UnitGroup u;
    const int d = f.degree();
    if (d == 1) {
        u.source = UnitGroup::Computed;
        return u;
    }
    std::vector<Elem> cat;
    for (const auto& s : f.spec().units) cat.push_back(parse_elem(f, s));
    for (const auto& g : cat)
        if (!is_unit(g)) fail(Errc::CatalogIncomplete, "catalog unit " + format_elem(g) + " has norm other than +-1");
    if (d == 2) {
        Elem eps = fundamental_unit_quadratic(f);
        for (const auto& g : cat) {
            bool same = g == eps || g == -eps;
            Elem prod = g * eps;
            same = same || prod == f.one() || prod == -f.one();
            if (!same)
                fail(Errc::CatalogIncomplete,
                     "catalog unit " + format_elem(g) + " is not +-eps^+-1 for eps = " + format_elem(eps));
        }
        u.generators = {eps};
        u.source = UnitGroup::Computed;
        return u;
    }
    if (cat.empty()) fail(Errc::UnitsUnavailable, "no unit generators for " + f.id());
    if (static_cast<int>(cat.size()) != d - 1)
        fail(Errc::CatalogIncomplete, "expected " + std::to_string(d - 1) + " unit generators for " + f.id());
    u.generators = std::move(cat);
    u.source = UnitGroup::Catalog;
    return u;
}

std::vector<int> signature(const Elem& a)
{
    if (a.is_zero()) fail(Errc::ZeroElement, "signature of zero");
    return signs(a);
}

std::uint64_t signature_bits(const Elem& a)
{
    auto s = signature(a);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] < 0) bits |= std::uint64_t{1} << i;
    return bits;
}

SignatureSubgroup::SignatureSubgroup(int degree, const std::vector<std::uint64_t>& sigs) : d_(degree)
{
    if (degree > 63 || sigs.size() > 63) fail(Errc::Internal, "signature bitmask too small");
    for (std::size_t j = 0; j < sigs.size(); ++j) {
        std::uint64_t v = sigs[j], s = std::uint64_t{1} << j;
        for (const auto& [row, sub] : rows_)
            if (v & std::bit_floor(row)) {
                v ^= row;
                s ^= sub;
            }
        if (v == 0) {
            kernel_.push_back(s);
            continue;
        }
        rows_.emplace_back(v, s);
        std::sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        // keep pivots unique: clear the new pivot from rows above it
        std::uint64_t pivot = std::bit_floor(v);
        for (auto& [row, sub] : rows_)
            if (row != v && (row & pivot) && row > v) {
                row ^= v;
                sub ^= s;
            }
        std::sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    }
}

std::optional<std::uint64_t> SignatureSubgroup::solve(std::uint64_t sig) const
{
    std::uint64_t s = 0;
    for (const auto& [row, sub] : rows_)
        if (sig & std::bit_floor(row)) {
            sig ^= row;
            s ^= sub;
        }
    if (sig != 0) return std::nullopt;
    return s;
}

std::vector<std::uint64_t> SignatureSubgroup::elements() const
{
    std::vector<std::uint64_t> out;
    const std::size_t n = rows_.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) v ^= rows_[i].first;
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<Elem> with_minus_one(const Field& f, const UnitGroup& u)
{
    std::vector<Elem> g = {-f.one()};
    g.insert(g.end(), u.generators.begin(), u.generators.end());
    return g;
}

Elem inverse_unit(const Elem& g)
{
    auto inv = exact_divide(g.field().one(), g);
    if (!inv) fail(Errc::NotAUnit, format_elem(g) + " is not a unit");
    return *inv;
}

} // namespace

SignatureSubgroup signature_subgroup(const Field& f, const UnitGroup& u)
{
    std::vector<std::uint64_t> sigs;
    for (const auto& g : with_minus_one(f, u)) sigs.push_back(signature_bits(g));
    return SignatureSubgroup(f.degree(), sigs);
}

Elem unit_from_subset(const Field& f, const UnitGroup& u, std::uint64_t subset)
{
    auto g = with_minus_one(f, u);
    Elem r = f.one();
    for (std::size_t j = 0; j < g.size(); ++j)
        if (subset >> j & 1) r = r * g[j];
    return r;
}

SquareClassData tp_units_mod_squares(const Field& f, const UnitGroup& u, const enumerate::Options& opt)
{
    SignatureSubgroup sub = signature_subgroup(f, u);
    SquareClassData data;
    data.k = sub.k();
    const auto& ker = sub.kernel();
    if (static_cast<int>(ker.size()) != data.k)
        fail(Errc::CatalogIncomplete, "unit generators of " + f.id() + " do not have rank d-1");
    // each nontrivial class of U+/U^2 must be a nonsquare, otherwise the
    // generators are not a fundamental system
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << ker.size()); ++mask) {
        std::uint64_t subset = 0;
        for (std::size_t i = 0; i < ker.size(); ++i)
            if (mask >> i & 1) subset ^= ker[i];
        Elem e = unit_from_subset(f, u, subset);
        if (!is_totally_positive(e)) fail(Errc::Internal, "kernel unit is not totally positive");
        if (is_square(e, opt))
            fail(Errc::CatalogIncomplete, "totally positive unit " + format_elem(e) + " is a square; generators of " +
                                              f.id() + " are not a fundamental system");
    }
    if (data.k == 0) return data;

    // shrink the representative by unit squares while the trace drops
    Elem eps = unit_from_subset(f, u, ker[0]);
    std::vector<Elem> moves;
    for (const auto& g : u.generators) {
        moves.push_back(g * g);
        Elem inv = inverse_unit(g);
        moves.push_back(inv * inv);
    }
    for (bool improved = true; improved;) {
        improved = false;
        for (const auto& m : moves) {
            Elem c = eps * m;
            if (trace(c) < trace(eps)) {
                eps = c;
                improved = true;
            }
        }
    }
    data.epsilon = eps;
    return data;
}

const char* mclass_name(MClass m) { return m == MClass::Plus ? "M_plus" : "M_minus"; }

MClass classify_M(const SquareClassData& data, const UnitGroup& u, const Elem& beta)
{
    if (data.k != 1) fail(Errc::RequiresKOne, "M+/M- are defined only when |U+/U^2| = 2");
    if (beta.is_zero()) fail(Errc::ZeroElement, "classify_M of zero");
    return signature_subgroup(beta.field(), u).contains(signature_bits(beta)) ? MClass::Plus : MClass::Minus;
}

std::optional<Elem> eta_for(const UnitGroup& u, const Elem& alpha)
{
    if (alpha.is_zero()) fail(Errc::ZeroElement, "eta_for of zero");
    const Field& f = alpha.field();
    auto subset = signature_subgroup(f, u).solve(signature_bits(alpha));
    if (!subset) return std::nullopt;
    Elem eta = unit_from_subset(f, u, *subset);
    if (!is_totally_positive(eta * alpha)) fail(Errc::Internal, "eta * alpha is not totally positive");
    return eta;
}

Elem descent_step(const SquareClassData& data, const Elem& alpha, const enumerate::Options& opt)
{
    if (data.k != 1 || !data.epsilon) fail(Errc::RequiresKOne, "the descent map needs |U+/U^2| = 2");
    if (!is_totally_positive(alpha)) fail(Errc::NotTotallyPositive, "descent input must be totally positive");
    if (auto s = sqrt_elem(alpha, opt)) return *s;
    if (auto s = sqrt_elem(*data.epsilon * alpha, opt)) return *s;
    fail(Errc::HypothesisFailed, "neither " + format_elem(alpha) + " nor eps*(" + format_elem(alpha) + ") is a square");
}

DescentTrace descent_run(const Field& f, const SquareClassData& data, const UnitGroup& u, int max_iter,
                         const enumerate::Options& opt)
{
    if (data.k != 1) fail(Errc::RequiresKOne, "the descent map needs |U+/U^2| = 2");
    DescentTrace tr;
    Elem alpha = f.integer(2);
    for (int it = 0; it < max_iter; ++it) {
        DescentStep st;
        st.alpha = alpha;
        st.t = descent_step(data, alpha, opt);
        st.used_epsilon = !(st.t * st.t == alpha);
        mpz_class n = norm(st.t);
        mpz_class an = norm(alpha);
        if (n * n != an) fail(Errc::Internal, "|N(T(alpha))|^2 != N(alpha)");
        st.cls = classify_M(data, u, st.t);
        if (st.cls == MClass::Minus) {
            tr.beta = st.t;
            mpz_class a = n < 0 ? mpz_class(-n) : n;
            tr.j = mpz_popcount(a.get_mpz_t()) == 1 ? static_cast<int>(mpz_sizeinbase(a.get_mpz_t(), 2)) - 1 : -1;
            tr.steps.push_back(std::move(st));
            return tr;
        }
        st.eta = eta_for(u, st.t);
        Elem next = *st.eta * st.t;
        if (!(norm(next) < an))
            fail(Errc::HypothesisFailed, "descent stalled at norm " + an.get_str() + " without reaching M_minus");
        alpha = next;
        tr.steps.push_back(std::move(st));
    }
    fail(Errc::IterationLimit, "descent did not terminate within " + std::to_string(max_iter) + " steps");
}

UnitCheck check_unit_group(const Field& f, const UnitGroup& u, long house_bound, const enumerate::Options& opt)
{
    const int d = f.degree();
    const int r = static_cast<int>(u.generators.size());
    mpz_class h2 = house_bound;
    h2 *= house_bound;
    enumerate::Enumerator e(f.trace_gram(), d, h2 * d);
    auto found = e.collect(
        [&](std::span<const std::int64_t> x) {
            double prod = 1;
            for (int i = 0; i < d; ++i) {
                double s = 0;
                for (int j = 0; j < d; ++j) s += x[j] * f.basis_embedding(i, j);
                prod *= s;
            }
            if (std::fabs(std::fabs(prod) - 1) > 0.25) return false;
            Elem a = f.from_coords(x);
            return is_unit(a) && is_totally_nonneg(f.integer(h2) - a * a);
        },
        opt);

    // logarithmic embedding of the generators on the first r embeddings
    std::vector<double> L(r * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) L[i * r + j] = std::log(std::fabs(approx_embedding(u.generators[j], i)));

    UnitCheck out;
    out.units_found = found.found.size();
    for (const auto& x : found.found) {
        Elem a = f.from_coords(x);
        std::vector<double> m = L, b(r);
        for (int i = 0; i < r; ++i) b[i] = std::log(std::fabs(approx_embedding(a, i)));
        // Gaussian elimination with partial pivoting
        bool ok = true;
        for (int c = 0; c < r && ok; ++c) {
            int p = c;
            for (int i = c + 1; i < r; ++i)
                if (std::fabs(m[i * r + c]) > std::fabs(m[p * r + c])) p = i;
            if (std::fabs(m[p * r + c]) < 1e-12) ok = false;
            for (int k = 0; k < r && ok; ++k) std::swap(m[c * r + k], m[p * r + k]);
            std::swap(b[c], b[p]);
            for (int i = c + 1; i < r && ok; ++i) {
                double t = m[i * r + c] / m[c * r + c];
                for (int k = c; k < r; ++k) m[i * r + k] -= t * m[c * r + k];
                b[i] -= t * b[c];
            }
        }
        std::vector<long> ex(r);
        for (int i = r - 1; i >= 0 && ok; --i) {
            double s = b[i];
            for (int k = i + 1; k < r; ++k) s -= m[i * r + k] * static_cast<double>(ex[k]);
            double v = s / m[i * r + i];
            ex[i] = std::lround(v);
            if (std::fabs(v - static_cast<double>(ex[i])) > 1e-6) ok = false;
        }
        if (ok) {
            Elem pos = f.one(), neg = f.one();
            for (int j = 0; j < r; ++j) {
                if (ex[j] > 0) pos = pos * u.generators[j].pow(ex[j]);
                if (ex[j] < 0) neg = neg * u.generators[j].pow(-ex[j]);
            }
            Elem lhs = a * neg;
            ok = lhs == pos || lhs == -pos;
        }
        if (!ok) {
            out.stray = a;
            return out;
        }
    }
    return out;
}

} // namespace kitaoka

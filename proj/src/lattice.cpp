#include "kitaoka/lattice.hpp"

#include "kitaoka/cone.hpp"
#include "kitaoka/element_io.hpp"
#include "kitaoka/linalg.hpp"
#include "kitaoka/scan.hpp"

#include <algorithm>
#include <cctype>

namespace kitaoka {

namespace {

// Fraction-free elimination over O_K. Returns the leading principal minors
// det(G[0..k, 0..k]) for k = 0 .. r-1 (stopping early at a zero pivot).
std::vector<Elem> leading_minors(const Field& f, int r, std::vector<Elem> m)
{
    std::vector<Elem> minors;
    Elem prev = f.one();
    for (int k = 0; k < r; ++k) {
        const Elem pivot = m[k * r + k];
        minors.push_back(pivot);
        if (pivot.is_zero()) break;
        for (int i = k + 1; i < r; ++i)
            for (int j = k + 1; j < r; ++j) {
                Elem num = pivot * m[i * r + j] - m[i * r + k] * m[k * r + j];
                auto q = exact_divide(num, prev);
                if (!q) fail(Errc::Internal, "non-exact division in fraction-free elimination");
                m[i * r + j] = std::move(*q);
            }
        prev = pivot;
    }
    return minors;
}

Elem det_elem(const Field& f, int r, const std::vector<Elem>& m)
{
    if (r == 0) return f.one();
    // pivoting-free elimination can hit a zero pivot on a nonsingular matrix;
    // fall back to Laplace expansion along the first row for those.
    auto minors = leading_minors(f, r, m);
    if (static_cast<int>(minors.size()) == r) return minors.back();
    Elem acc = f.zero();
    for (int j = 0; j < r; ++j) {
        if (m[j].is_zero()) continue;
        std::vector<Elem> sub;
        for (int i = 1; i < r; ++i)
            for (int k = 0; k < r; ++k)
                if (k != j) sub.push_back(m[i * r + k]);
        Elem term = m[j] * det_elem(f, r - 1, sub);
        acc = (j % 2) ? acc - term : acc + term;
    }
    return acc;
}

} // namespace

// ---------------------------------------------------------------------------
// GramForm

GramForm::GramForm(const Field& f, int rank, std::vector<Elem> gram) : field_(&f), r_(rank), g_(std::move(gram))
{
    if (rank < 0 || static_cast<int>(g_.size()) != rank * rank)
        fail(Errc::MalformedSpec, "Gram matrix size does not match the rank");
    for (const auto& e : g_)
        if (&e.field() != field_) fail(Errc::FieldMismatch, "Gram entries belong to another field");
    for (int i = 0; i < r_; ++i)
        for (int j = i + 1; j < r_; ++j)
            if (!(at(i, j) == at(j, i))) fail(Errc::NotSymmetric, "Gram matrix is not symmetric");
    for (const auto& m : leading_minors(f, r_, g_))
        if (!is_totally_positive(m)) fail(Errc::NotPositiveDefinite, "form is not totally positive definite");
}

bool GramForm::is_diagonal() const
{
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < r_; ++j)
            if (i != j && !at(i, j).is_zero()) return false;
    return true;
}

Elem GramForm::bilinear(const std::vector<Elem>& u, const std::vector<Elem>& v) const
{
    Elem acc = field_->zero();
    for (int i = 0; i < r_; ++i) {
        if (u[i].is_zero()) continue;
        for (int j = 0; j < r_; ++j)
            if (!v[j].is_zero() && !at(i, j).is_zero()) acc += at(i, j) * u[i] * v[j];
    }
    return acc;
}

Elem GramForm::evaluate(const std::vector<Elem>& v) const { return bilinear(v, v); }

GramForm diag(const std::vector<Elem>& entries)
{
    if (entries.empty()) fail(Errc::MalformedSpec, "empty diagonal form");
    const Field& f = entries[0].field();
    int r = static_cast<int>(entries.size());
    std::vector<Elem> g(r * r, f.zero());
    for (int i = 0; i < r; ++i) g[i * r + i] = entries[i];
    return GramForm(f, r, std::move(g));
}

GramForm diag(const Field& f, std::initializer_list<long> entries)
{
    std::vector<Elem> e;
    for (long x : entries) e.push_back(f.integer(x));
    return diag(e);
}

namespace {

Elem classical_entry(const Field& f, const std::string& s)
{
    ElemQ q = parse_elem_q(f, s);
    if (!q.is_integral()) fail(Errc::NotClassical, "Gram entry " + s + " is not an algebraic integer");
    return q.to_elem();
}

std::vector<std::string> split_top(const std::string& s)
{
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

} // namespace

GramForm parse_form(const Field& f, std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    auto syntax = [&]() { fail(Errc::SyntaxError, "cannot parse form \"" + std::string(text) + "\""); };
    if (s.size() >= 2 && s.front() == '<' && s.back() == '>') {
        std::vector<Elem> e;
        for (const auto& part : split_top(s.substr(1, s.size() - 2))) e.push_back(classical_entry(f, part));
        return diag(e);
    }
    if (s.size() < 4 || s.front() != '[' || s.back() != ']') syntax();
    auto rows = split_top(s.substr(1, s.size() - 2));
    int r = static_cast<int>(rows.size());
    std::vector<Elem> g;
    for (const auto& row : rows) {
        if (row.size() < 2 || row.front() != '[' || row.back() != ']') syntax();
        auto cells = split_top(row.substr(1, row.size() - 2));
        if (static_cast<int>(cells.size()) != r) fail(Errc::SyntaxError, "Gram matrix must be square");
        for (const auto& c : cells) g.push_back(classical_entry(f, c));
    }
    return GramForm(f, r, std::move(g));
}

std::string format_form(const GramForm& q)
{
    std::string out;
    if (q.is_diagonal()) {
        out = "<";
        for (int i = 0; i < q.rank(); ++i) out += (i ? "," : "") + format_elem(q.at(i, i));
        return out + ">";
    }
    out = "[";
    for (int i = 0; i < q.rank(); ++i) {
        out += i ? ",[" : "[";
        for (int j = 0; j < q.rank(); ++j) out += (j ? "," : "") + format_elem(q.at(i, j));
        out += "]";
    }
    return out + "]";
}

// ---------------------------------------------------------------------------
// ZRealization

ZRealization::ZRealization(const GramForm& q) : q_(&q)
{
    const Field& f = q.field();
    const int d = f.degree(), r = q.rank();
    n_ = r * d;
    const auto& tg = f.trace_gram();

    // tr3[m][a][b] = Tr(w_m w_a w_b), tr4[k][m][a][b] = Tr(w_k w_m w_a w_b)
    std::vector<mpz_class> tr3(d * d * d), tr4(d * d * d * d);
    for (int m = 0; m < d; ++m)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int p = 0; p < d; ++p) tr3[(m * d + a) * d + b] += f.mult(a, b, p) * tg[m * d + p];
    for (int k = 0; k < d; ++k)
        for (int m = 0; m < d; ++m)
            for (int p = 0; p < d; ++p) {
                const mpz_class& c = f.mult(k, m, p);
                if (c == 0) continue;
                for (int ab = 0; ab < d * d; ++ab) tr4[(k * d + m) * d * d + ab] += c * tr3[p * d * d + ab];
            }

    m_.assign(d, std::vector<mpz_class>(n_ * n_));
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                const Elem& g = q.at(i, j);
                if (g.is_zero()) continue;
                for (int m = 0; m < d; ++m) {
                    if (g[m] == 0) continue;
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b)
                            m_[k][(i * d + a) * n_ + j * d + b] += g[m] * tr4[((k * d + m) * d + a) * d + b];
                }
            }
    for (int k = 0; k < d; ++k) eval_.emplace_back(m_[k], n_);
}

std::vector<mpz_class> ZRealization::targets(const Elem& alpha) const
{
    const Field& f = q_->field();
    const int d = f.degree();
    std::vector<mpz_class> t(d);
    for (int k = 0; k < d; ++k)
        for (int m = 0; m < d; ++m) t[k] += alpha[m] * f.trace_gram()[k * d + m];
    return t;
}

bool ZRealization::hits(std::span<const std::int64_t> x, const std::vector<mpz_class>& targets) const
{
    for (std::size_t k = 0; k < eval_.size(); ++k)
        if (!eval_[k].equals(x, targets[k])) return false;
    return true;
}

std::vector<Elem> ZRealization::unflatten(std::span<const std::int64_t> x) const
{
    const Field& f = q_->field();
    const int d = f.degree();
    std::vector<Elem> v;
    for (int i = 0; i < q_->rank(); ++i) v.push_back(f.from_coords(x.subspan(i * d, d)));
    return v;
}

// ---------------------------------------------------------------------------
// Representation

namespace {

Witness checked_witness(const GramForm& q, std::vector<Elem> v, const Elem& alpha)
{
    if (!(q.evaluate(v) == alpha)) fail(Errc::Internal, "witness does not re-evaluate to the target");
    return Witness{std::move(v)};
}

} // namespace

std::optional<Witness> represents(const GramForm& q, const Elem& alpha, const enumerate::Options& opt)
{
    const Field& f = q.field();
    if (&alpha.field() != &f) fail(Errc::FieldMismatch, "target belongs to another field");
    if (alpha.is_zero()) return Witness{std::vector<Elem>(q.rank(), f.zero())};
    if (!is_totally_positive(alpha)) return std::nullopt; // positive definite forms only take values in O_K^+
    ZRealization z(q);
    auto t = z.targets(alpha);
    enumerate::Enumerator e(z.matrix(), z.dim(), t[0]);
    auto r = e.find_first([&](std::span<const std::int64_t> x) { return z.hits(x, t); }, opt);
    if (!r.found) return std::nullopt;
    return checked_witness(q, z.unflatten(*r.found), alpha);
}

std::vector<Witness> all_representations(const GramForm& q, const Elem& alpha, const enumerate::Options& opt)
{
    const Field& f = q.field();
    if (alpha.is_zero()) return {Witness{std::vector<Elem>(q.rank(), f.zero())}};
    if (!is_totally_positive(alpha)) return {};
    ZRealization z(q);
    auto t = z.targets(alpha);
    enumerate::Enumerator e(z.matrix(), z.dim(), t[0]);
    auto r = e.collect([&](std::span<const std::int64_t> x) { return z.hits(x, t); }, opt);
    std::vector<Witness> out;
    for (const auto& x : r.found) out.push_back(checked_witness(q, z.unflatten(x), alpha));
    return out;
}

namespace {

// Rational bounds lo <= sqrt(x) <= hi for x >= 0, accurate to about 2^-bits.
Interval sqrt_bounds(const mpq_class& x, long bits)
{
    if (x <= 0) return {mpq_class(0), mpq_class(0)};
    mpf_class v(x, static_cast<mp_bitcnt_t>(bits + 64));
    v = sqrt(v);
    mpq_class r(v), eps = r / (mpz_class(1) << static_cast<mp_bitcnt_t>(bits));
    Interval out{r - eps, r + eps};
    while (out.lo > 0 && out.lo * out.lo > x) out.lo -= eps;
    if (out.lo < 0) out.lo = 0;
    while (out.hi * out.hi < x) out.hi += eps;
    return out;
}

bool interval_integer(const Interval& v, mpz_class& n, bool& none)
{
    mpz_class lo, hi;
    mpz_cdiv_q(lo.get_mpz_t(), v.lo.get_num_mpz_t(), v.lo.get_den_mpz_t());
    mpz_fdiv_q(hi.get_mpz_t(), v.hi.get_num_mpz_t(), v.hi.get_den_mpz_t());
    none = lo > hi;
    n = lo;
    return lo == hi;
}

} // namespace

// A root x has coordinates c = G^-1 E^T s, where s_i = +-sqrt(sigma_i(alpha)),
// E_ij = sigma_i(w_j) and G = E^T E is the exact trace Gram matrix. Each sign
// pattern is evaluated in rational interval arithmetic until every coordinate
// interval either excludes all integers or pins down a single candidate,
// which is then verified exactly.
std::optional<Elem> sqrt_elem(const Elem& alpha, const enumerate::Options&)
{
    const Field& f = alpha.field();
    const int d = f.degree();
    if (alpha.is_zero()) return f.zero();
    if (!is_totally_positive(alpha)) return std::nullopt;
    mpz_class n = norm(alpha);
    if (!mpz_perfect_square_p(n.get_mpz_t())) return std::nullopt;

    std::vector<mpq_class> g(f.trace_gram().begin(), f.trace_gram().end());
    auto ginv = linalg::inverse(g, d);
    if (!ginv) fail(Errc::Internal, "trace form is singular");
    auto pa = f.to_power_basis(alpha);
    std::vector<std::vector<mpq_class>> pw(d);
    for (int k = 0; k < d; ++k) pw[k] = f.to_power_basis(f.basis(k));

    const unsigned patterns = 1u << (d - 1);
    std::vector<bool> rejected(patterns, false);
    for (long bits = 64;; bits *= 2) {
        if (bits > (1L << 16)) fail(Errc::Internal, "square root refinement did not converge");
        std::vector<Interval> root(d);
        std::vector<std::vector<Interval>> emb(d, std::vector<Interval>(d));
        for (int i = 0; i < d; ++i) {
            Interval a = f.embedding(pa, i, bits);
            if (a.lo < 0) a.lo = 0;
            Interval lo = sqrt_bounds(a.lo, bits), hi = sqrt_bounds(a.hi, bits);
            root[i] = {lo.lo, hi.hi};
            for (int k = 0; k < d; ++k) emb[i][k] = f.embedding(pw[k], i, bits);
        }
        bool undecided = false;
        for (unsigned mask = 0; mask < patterns; ++mask) {
            if (rejected[mask]) continue;
            std::vector<Interval> t(d, Interval{0, 0}); // E^T s
            for (int k = 0; k < d; ++k)
                for (int i = 0; i < d; ++i) {
                    Interval s = i > 0 && (mask >> (i - 1) & 1) ? Interval{-root[i].hi, -root[i].lo} : root[i];
                    t[k] = t[k] + emb[i][k] * s;
                }
            std::vector<mpz_class> c(d);
            bool all_pinned = true;
            for (int j = 0; j < d && !rejected[mask]; ++j) {
                Interval cj{0, 0};
                for (int k = 0; k < d; ++k) {
                    const mpq_class& m = (*ginv)[j * d + k];
                    cj = cj + Interval{m, m} * t[k];
                }
                bool none = false;
                if (!interval_integer(cj, c[j], none)) all_pinned = false;
                if (none) rejected[mask] = true;
            }
            if (rejected[mask]) continue;
            if (!all_pinned) {
                undecided = true;
                continue;
            }
            Elem x(f, c);
            if (x * x == alpha) return x;
            rejected[mask] = true;
        }
        if (!undecided) return std::nullopt;
    }
}

bool is_square(const Elem& alpha, const enumerate::Options& opt) { return sqrt_elem(alpha, opt).has_value(); }

std::optional<Elem> contains_sqrt(const Field& f, long n, const enumerate::Options& opt)
{
    return sqrt_elem(f.integer(n), opt);
}

UniversalResult is_universal_up_to(const GramForm& q, long trace_bound, const enumerate::Options& opt)
{
    auto targets = enumerate_tp_by_trace(q.field(), trace_bound, opt);
    auto results = ordered_scan<bool>(
        targets.size(), [&](std::size_t i) { return represents(q, targets[i], opt).has_value(); },
        [](bool ok) { return !ok; });
    UniversalResult r;
    r.checked = results.size();
    if (!results.empty() && !results.back()) r.counterexample = targets[results.size() - 1];
    return r;
}

// ---------------------------------------------------------------------------
// Unit splitting

namespace {

mpz_class abs_norm(const Elem& a)
{
    mpz_class n = norm(a);
    return n < 0 ? mpz_class(-n) : n;
}

// a - q b with q in O_K close to a/b, chosen among the floor/ceil roundings of
// the coordinates of a/b to minimise |N(a - q b)|.
std::pair<Elem, Elem> reduce(const Elem& a, const Elem& b)
{
    const Field& f = a.field();
    const int d = f.degree();
    ElemQ quot = divide(a, b);
    std::optional<std::pair<Elem, Elem>> best;
    mpz_class best_norm;
    const unsigned combos = d <= 6 ? (1u << d) : 1u;
    for (unsigned mask = 0; mask < combos; ++mask) {
        std::vector<mpz_class> c(d);
        for (int i = 0; i < d; ++i) {
            const mpq_class& x = quot.coords()[i];
            mpz_class fl;
            mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
            if (combos == 1) {
                mpq_class frac = x - fl;
                c[i] = frac * 2 >= 1 ? mpz_class(fl + 1) : fl;
            } else {
                c[i] = (mask >> i & 1) && x.get_den() != 1 ? mpz_class(fl + 1) : fl;
            }
        }
        Elem q(f, std::move(c));
        Elem rem = a - q * b;
        mpz_class n = abs_norm(rem);
        if (!best || n < best_norm) {
            best_norm = n;
            best.emplace(rem, q);
        }
    }
    return *best;
}

} // namespace

SplitResult split_off_unit(const GramForm& q, const Elem& eps, const enumerate::Options& opt)
{
    const Field& f = q.field();
    const int r = q.rank();
    if (!is_unit(eps) || !is_totally_positive(eps)) fail(Errc::NotAUnit, "split_off_unit needs a totally positive unit");
    auto w = represents(q, eps, opt);
    if (!w) fail(Errc::NotRepresented, "the form does not represent " + format_elem(eps));
    const std::vector<Elem>& v = w->v;

    // c = eps^-1 G v satisfies c.v = 1, so u -> c.u splits off v.
    std::vector<Elem> c(r);
    for (int i = 0; i < r; ++i) {
        Elem s = f.zero();
        for (int j = 0; j < r; ++j) s += q.at(i, j) * v[j];
        auto ci = exact_divide(s, eps);
        if (!ci) fail(Errc::Internal, "eps^-1 B(e_i, v) is not integral");
        c[i] = std::move(*ci);
    }

    // Column operations U with c^T U = e_1^T.
    std::vector<Elem> U(r * r, f.zero());
    for (int i = 0; i < r; ++i) U[i * r + i] = f.one();
    auto col_sub = [&](int j, int m, const Elem& t) { // col_j -= t col_m
        for (int i = 0; i < r; ++i) U[i * r + j] -= t * U[i * r + m];
    };

    int unit_at = -1;
    for (int guard = 0; unit_at < 0; ++guard) {
        if (guard > 10000) fail(Errc::Internal, "unit splitting: Euclidean reduction did not terminate");
        int m = -1;
        mpz_class mn;
        for (int i = 0; i < r; ++i) {
            if (c[i].is_zero()) continue;
            mpz_class n = abs_norm(c[i]);
            if (n == 1) {
                unit_at = i;
                break;
            }
            if (m < 0 || n < mn) {
                m = i;
                mn = n;
            }
        }
        if (unit_at >= 0) break;
        if (m < 0) fail(Errc::Internal, "unit splitting: c vanished");
        bool progress = false;
        for (int j = 0; j < r; ++j) {
            if (j == m || c[j].is_zero()) continue;
            auto [rem, t] = reduce(c[j], c[m]);
            if (rem.is_zero() || abs_norm(rem) < mn) progress = true;
            col_sub(j, m, t);
            c[j] = rem;
        }
        if (!progress) fail(Errc::Internal, "unit splitting: Euclidean reduction stalled");
    }

    Elem inv_u = *exact_divide(f.one(), c[unit_at]);
    for (int j = 0; j < r; ++j) {
        if (j == unit_at || c[j].is_zero()) continue;
        col_sub(j, unit_at, c[j] * inv_u);
        c[j] = f.zero();
    }
    for (int i = 0; i < r; ++i) U[i * r + unit_at] = U[i * r + unit_at] * inv_u;
    if (unit_at != 0)
        for (int i = 0; i < r; ++i) std::swap(U[i * r + 0], U[i * r + unit_at]);
    for (int i = 0; i < r; ++i) U[i * r + 0] = v[i];

    if (!is_unit(det_elem(f, r, U))) fail(Errc::Internal, "unit splitting produced a non-invertible basis change");

    // U^T G U = blockdiag(eps, rest), asserted exactly.
    std::vector<std::vector<Elem>> cols(r, std::vector<Elem>(r));
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < r; ++i) cols[j][i] = U[i * r + j];
    std::vector<Elem> rest;
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            Elem g = q.bilinear(cols[a], cols[b]);
            if (a == 0 || b == 0) {
                bool ok = (a == 0 && b == 0) ? g == eps : g.is_zero();
                if (!ok) fail(Errc::Internal, "unit splitting: block identity violated");
            } else {
                rest.push_back(g);
            }
        }
    return SplitResult{std::move(U), GramForm(f, r - 1, std::move(rest))};
}

bool unary_corepresent(const Elem& alpha, const Elem& beta, const enumerate::Options& opt)
{
    if (!is_totally_positive(alpha) || !is_totally_positive(beta))
        fail(Errc::NotTotallyPositive, "unary co-representation needs totally positive elements");
    return is_square(alpha * beta, opt);
}

bool unary_isometric(const Elem& a, const Elem& b, const enumerate::Options& opt)
{
    auto q = exact_divide(a, b);
    return q && is_unit(*q) && is_square(*q, opt);
}

DiagonalShape classify_diagonal_ternary(const GramForm& q, const enumerate::Options& opt)
{
    const Field& f = q.field();
    if (q.rank() != 3 || !q.is_diagonal()) fail(Errc::PreconditionFailed, "expected a diagonal ternary form");
    if (contains_sqrt(f, 2, opt)) fail(Errc::PreconditionFailed, "sqrt(2) lies in the field");
    if (!represents(q, f.one(), opt) || !represents(q, f.integer(2), opt))
        fail(Errc::PreconditionFailed, "form must represent 1 and 2");

    std::vector<Elem> a = {q.at(0, 0), q.at(1, 1), q.at(2, 2)};
    auto is_one = [&](const Elem& x) { return unary_isometric(x, f.one(), opt); };
    DiagonalShape shape;
    for (int i = 0; i < 3; ++i) {
        if (!is_one(a[i])) continue;
        std::vector<Elem> others;
        for (int j = 0; j < 3; ++j)
            if (j != i) others.push_back(a[j]);
        for (int j = 0; j < 2; ++j)
            if (is_one(others[j])) {
                shape.kind = DiagonalShape::Shape11a;
                shape.alpha = others[1 - j];
                return shape;
            }
        for (int j = 0; j < 2; ++j) {
            auto ratio = exact_divide(f.integer(2), others[j]);
            if (!ratio) continue;
            if (auto t = sqrt_elem(*ratio, opt)) {
                shape.kind = DiagonalShape::Shape1ga;
                shape.gamma = others[j];
                shape.t = *t;
                shape.alpha = others[1 - j];
                return shape;
            }
        }
        return shape;
    }
    return shape;
}

// ---------------------------------------------------------------------------
// Coverage

namespace {

CoverageResult coverage(const Field& f, const GramForm& form, const Elem& scale, long trace_bound,
                        const enumerate::Options& opt, bool stop_at_first)
{
    auto targets = enumerate_tp_by_trace(f, trace_bound, opt);
    auto entries = ordered_scan<CoverageEntry>(
        targets.size(),
        [&](std::size_t i) { return CoverageEntry{targets[i], represents(form, scale * targets[i], opt)}; },
        [&](const CoverageEntry& e) { return stop_at_first && !e.witness; });
    CoverageResult r;
    for (const auto& e : entries)
        if (!e.witness) {
            r.counterexample = e.alpha;
            break;
        }
    r.entries = std::move(entries);
    return r;
}

} // namespace

CoverageResult check_1122_coverage(const Field& f, long trace_bound, const enumerate::Options& opt, bool stop_at_first)
{
    return coverage(f, diag(f, {1, 1, 2, 2}), f.integer(2), trace_bound, opt, stop_at_first);
}

CoverageResult check_lambda_coverage(const Elem& lambda, long trace_bound, const enumerate::Options& opt,
                                     bool stop_at_first)
{
    const Field& f = lambda.field();
    if (!is_totally_positive(lambda)) fail(Errc::PreconditionFailed, "lambda must be totally positive");
    if (is_square(lambda, opt)) fail(Errc::PreconditionFailed, "lambda is a square");
    if (!is_indecomposable(lambda, opt).indecomposable) fail(Errc::PreconditionFailed, "lambda is decomposable");
    return coverage(f, diag({f.one(), f.one(), lambda, lambda}), lambda, trace_bound, opt, stop_at_first);
}

Witness four_square_witness_from_1122(const Witness& w)
{
    if (w.v.size() != 4) fail(Errc::PreconditionFailed, "expected a witness of length 4");
    const auto& x = w.v;
    return Witness{{x[0], x[1], x[2] + x[3], x[2] - x[3]}};
}

Witness halve_witness_unramified(const Elem& alpha, const Witness& w)
{
    const Field& f = alpha.field();
    if (two_is_ramified(f)) fail(Errc::PreconditionFailed, "2 is ramified in " + f.id());
    if (w.v.size() != 4) fail(Errc::PreconditionFailed, "expected a witness of length 4");
    const auto& x = w.v;
    if (!(diag(f, {1, 1, 2, 2}).evaluate(x) == f.integer(2) * alpha))
        fail(Errc::PreconditionFailed, "witness does not represent 2*alpha by <1,1,2,2>");
    mpq_class half(1, 2);
    ElemQ a = half * ElemQ(x[0] + x[1]), b = half * ElemQ(x[0] - x[1]);
    if (!a.is_integral() || !b.is_integral())
        fail(Errc::NotIntegralHalves, "(x+y)/2 is not integral; is 2 really unramified?");
    return checked_witness(diag(f, {1, 1, 1, 1}), {a.to_elem(), b.to_elem(), x[2], x[3]}, alpha);
}

} // namespace kitaoka

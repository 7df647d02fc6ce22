#include "kitaoka/field.hpp"

#include "kitaoka/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kitaoka {

std::string_view errc_name(Errc code)
{
    switch (code) {
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::NotIntegral: return "NotIntegral";
    case Errc::NotTotallyReal: return "NotTotallyReal";
    case Errc::BasisNotClosed: return "BasisNotClosed";
    case Errc::DiscriminantMismatch: return "DiscriminantMismatch";
    case Errc::MalformedSpec: return "MalformedSpec";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NotTotallyPositive: return "NotTotallyPositive";
    case Errc::ZeroElement: return "ZeroElement";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::UnitsUnavailable: return "UnitsUnavailable";
    case Errc::NotQuadratic: return "NotQuadratic";
    case Errc::RequiresKOne: return "RequiresKOne";
    case Errc::CatalogIncomplete: return "CatalogIncomplete";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::IterationLimit: return "IterationLimit";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NotClassical: return "NotClassical";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::NotRepresented: return "NotRepresented";
    case Errc::NotAUnit: return "NotAUnit";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::NotIntegralHalves: return "NotIntegralHalves";
    case Errc::UnknownField: return "UnknownField";
    case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// Elem

namespace {

void check_same(const Field* a, const Field* b)
{
    if (a != b || a == nullptr) fail(Errc::FieldMismatch, "elements belong to different fields");
}

} // namespace

Elem::Elem(const Field& field, std::vector<mpz_class> coords) : field_(&field), c_(std::move(coords))
{
    if (static_cast<int>(c_.size()) != field.degree())
        fail(Errc::FieldMismatch, "coordinate vector length does not match the field degree");
}

bool Elem::is_zero() const
{
    return std::all_of(c_.begin(), c_.end(), [](const mpz_class& x) { return x == 0; });
}

Elem& Elem::operator+=(const Elem& b)
{
    check_same(field_, b.field_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
    return *this;
}

Elem& Elem::operator-=(const Elem& b)
{
    check_same(field_, b.field_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= b.c_[i];
    return *this;
}

Elem& Elem::operator*=(const Elem& b) { return *this = *this * b; }

Elem Elem::operator-() const
{
    Elem r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Elem operator*(const Elem& a, const Elem& b)
{
    check_same(a.field_, b.field_);
    const Field& f = *a.field_;
    const int d = f.degree();
    std::vector<mpz_class> c(d);
    mpz_class ab;
    for (int i = 0; i < d; ++i) {
        if (a.c_[i] == 0) continue;
        for (int j = 0; j < d; ++j) {
            if (b.c_[j] == 0) continue;
            ab = a.c_[i] * b.c_[j];
            for (int k = 0; k < d; ++k) {
                const mpz_class& m = f.mult(i, j, k);
                if (m != 0) c[k] += ab * m;
            }
        }
    }
    return Elem(f, std::move(c));
}

Elem operator*(long s, const Elem& a)
{
    Elem r = a;
    for (auto& x : r.c_) x *= s;
    return r;
}

Elem Elem::pow(unsigned long e) const
{
    Elem r = field_->one();
    Elem b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

bool lex_less(const Elem& a, const Elem& b) { return a.coords() < b.coords(); }

bool canonical_less(const Elem& a, const Elem& b)
{
    mpz_class ta = trace(a), tb = trace(b);
    if (ta != tb) return ta < tb;
    return a.coords() < b.coords();
}

// ---------------------------------------------------------------------------
// ElemQ

ElemQ::ElemQ(const Field& field, std::vector<mpq_class> coords) : field_(&field), c_(std::move(coords))
{
    if (static_cast<int>(c_.size()) != field.degree())
        fail(Errc::FieldMismatch, "coordinate vector length does not match the field degree");
}

ElemQ::ElemQ(const Elem& a) : field_(&a.field()), c_(a.coords().begin(), a.coords().end()) {}

bool ElemQ::is_integral() const
{
    return std::all_of(c_.begin(), c_.end(), [](const mpq_class& x) { return x.get_den() == 1; });
}

bool ElemQ::is_zero() const
{
    return std::all_of(c_.begin(), c_.end(), [](const mpq_class& x) { return x == 0; });
}

Elem ElemQ::to_elem() const
{
    if (!is_integral()) fail(Errc::NotIntegral, "element is not an algebraic integer");
    std::vector<mpz_class> z;
    z.reserve(c_.size());
    for (const auto& x : c_) z.push_back(x.get_num());
    return Elem(*field_, std::move(z));
}

ElemQ operator+(const ElemQ& a, const ElemQ& b)
{
    check_same(a.field_, b.field_);
    ElemQ r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
}

ElemQ operator-(const ElemQ& a, const ElemQ& b)
{
    check_same(a.field_, b.field_);
    ElemQ r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
    return r;
}

ElemQ operator*(const ElemQ& a, const ElemQ& b)
{
    check_same(a.field_, b.field_);
    const Field& f = *a.field_;
    const int d = f.degree();
    std::vector<mpq_class> c(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (a.c_[i] == 0 || b.c_[j] == 0) continue;
            mpq_class ab = a.c_[i] * b.c_[j];
            for (int k = 0; k < d; ++k)
                if (f.mult(i, j, k) != 0) c[k] += ab * f.mult(i, j, k);
        }
    return ElemQ(f, std::move(c));
}

ElemQ operator*(const mpq_class& s, const ElemQ& a)
{
    ElemQ r = a;
    for (auto& x : r.c_) x *= s;
    return r;
}

// ---------------------------------------------------------------------------
// Field

Elem Field::zero() const { return Elem(*this, std::vector<mpz_class>(d_)); }

Elem Field::one() const { return integer(1); }

Elem Field::integer(long n) const { return integer(mpz_class(n)); }

Elem Field::integer(const mpz_class& n) const
{
    std::vector<mpz_class> c(d_);
    c[0] = n;
    return Elem(*this, std::move(c));
}

Elem Field::basis(int i) const
{
    std::vector<mpz_class> c(d_);
    c[i] = 1;
    return Elem(*this, std::move(c));
}

Elem Field::from_coords(std::span<const std::int64_t> coords) const
{
    std::vector<mpz_class> c;
    c.reserve(coords.size());
    for (auto x : coords) c.emplace_back(static_cast<long>(x));
    return Elem(*this, std::move(c));
}

std::vector<mpq_class> Field::to_power_basis(const std::vector<mpq_class>& coords) const
{
    std::vector<mpq_class> p(d_);
    for (int j = 0; j < d_; ++j) {
        if (coords[j] == 0) continue;
        for (int k = 0; k < d_; ++k) p[k] += coords[j] * spec_.integral_basis[j][k];
    }
    return p;
}

std::vector<mpq_class> Field::to_power_basis(const Elem& a) const
{
    std::vector<mpq_class> q(a.coords().begin(), a.coords().end());
    return to_power_basis(q);
}

ElemQ Field::from_power_basis(const std::vector<mpq_class>& p) const
{
    Poly reduced = Poly(p) % f_;
    std::vector<mpq_class> c(d_);
    for (int k = 0; k < d_; ++k) {
        mpq_class pk = reduced.coeff(k);
        if (pk == 0) continue;
        for (int j = 0; j < d_; ++j) c[j] += pk * basis_inv_[k * d_ + j];
    }
    return ElemQ(*this, std::move(c));
}

std::vector<mpz_class> Field::regular_matrix(const Elem& a) const
{
    std::vector<mpz_class> m(d_ * d_);
    for (int i = 0; i < d_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < d_; ++j)
            for (int k = 0; k < d_; ++k) m[k * d_ + j] += a[i] * mult(i, j, k);
    }
    return m;
}

Interval Field::root(int i, long bits) const
{
    std::lock_guard<std::mutex> lock(root_mutex_);
    if (root_bits_[i] < bits) {
        refine_root(f_, roots_[i], bits);
        root_bits_[i] = bits;
    }
    return roots_[i];
}

Interval Field::embedding(const std::vector<mpq_class>& power_coeffs, int i, long bits) const
{
    Interval r = root(i, bits);
    return Poly(power_coeffs)(r);
}

int Field::sign_at(std::span<const std::int64_t> coords, int i) const
{
    constexpr double limit = 4503599627370496.0; // 2^52
    double v = 0, mag = 0, err = 0;
    bool small = true;
    for (int j = 0; j < d_; ++j) {
        double a = static_cast<double>(coords[j]);
        if (std::fabs(a) >= limit) {
            small = false;
            break;
        }
        double e = emb_[i * d_ + j];
        v += a * e;
        mag += std::fabs(a * e);
        err += std::fabs(a) * emb_err_[i * d_ + j];
    }
    if (small) {
        double bound = err + mag * (d_ + 2) * std::numeric_limits<double>::epsilon() + 1e-300;
        if (v > 2 * bound) return 1;
        if (v < -2 * bound) return -1;
    }
    return kitaoka::sign_at(from_coords(coords), i);
}

bool Field::is_totally_positive(std::span<const std::int64_t> coords) const
{
    for (int i = 0; i < d_; ++i)
        if (sign_at(coords, i) <= 0) return false;
    return true;
}

struct Field::LoadAccess {
    static FieldPtr load(FieldSpec spec);
};

FieldPtr Field::LoadAccess::load(FieldSpec spec)
{
    const int d = spec.degree;
    if (d < 1) fail(Errc::MalformedSpec, "field degree must be positive");
    if (static_cast<int>(spec.poly.size()) != d + 1 || spec.poly.back() != 1)
        fail(Errc::MalformedSpec, "defining polynomial must be monic of the stated degree");
    if (static_cast<int>(spec.integral_basis.size()) != d)
        fail(Errc::MalformedSpec, "integral basis must have one row per degree");
    for (const auto& row : spec.integral_basis)
        if (static_cast<int>(row.size()) != d) fail(Errc::MalformedSpec, "integral basis rows must have length d");
    for (int k = 0; k < d; ++k)
        if (spec.integral_basis[0][k] != (k == 0 ? 1 : 0))
            fail(Errc::MalformedSpec, "integral basis row 0 must represent 1");

    std::shared_ptr<Field> f(new Field());
    f->d_ = d;
    f->f_ = Poly::from_integers(spec.poly);

    // Totally real: squarefree with d distinct real roots.
    if (gcd(f->f_, f->f_.derivative()).degree() > 0)
        fail(Errc::NotTotallyReal, "defining polynomial has repeated roots");
    f->roots_ = isolate_real_roots(f->f_);
    if (static_cast<int>(f->roots_.size()) != d)
        fail(Errc::NotTotallyReal, "defining polynomial of " + spec.id + " has non-real roots");
    f->root_bits_.assign(d, 0);

    std::vector<mpq_class> bm(d * d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) bm[j * d + k] = spec.integral_basis[j][k];
    auto inv = linalg::inverse(bm, d);
    if (!inv) fail(Errc::MalformedSpec, "integral basis is linearly dependent");
    f->basis_inv_ = std::move(*inv);
    f->spec_ = std::move(spec);

    // Multiplication table, which must be integral for the basis to span a ring.
    f->mult_.assign(d * d * d, 0);
    std::vector<Poly> omega;
    for (int j = 0; j < d; ++j) omega.emplace_back(f->spec_.integral_basis[j]);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Poly prod = omega[i] * omega[j];
            ElemQ c = f->from_power_basis(prod.coeffs());
            if (!c.is_integral())
                fail(Errc::BasisNotClosed, "integral basis of " + f->id() + " is not closed under multiplication");
            for (int k = 0; k < d; ++k) f->mult_[(i * d + j) * d + k] = c.coords()[k].get_num();
        }

    f->omega_trace_.assign(d, 0);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) f->omega_trace_[i] += f->mult(i, k, k);

    std::vector<mpz_class> gram(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) gram[i * d + j] += f->mult(i, j, k) * f->omega_trace_[k];
    f->trace_gram_ = gram;
    mpz_class disc = linalg::det(gram, d);
    if (disc != f->spec_.disc)
        fail(Errc::DiscriminantMismatch,
             "discriminant of " + f->id() + " is " + disc.get_str() + ", catalog says " + f->spec_.disc.get_str());

    // Double-precision embeddings of the basis with certified error bounds.
    f->emb_.assign(d * d, 0);
    f->emb_err_.assign(d * d, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Interval v = f->embedding(f->spec_.integral_basis[j], i, 160);
            mpq_class mid = (v.lo + v.hi) / 2;
            double x = mid.get_d();
            mpq_class err = ::abs(mid - mpq_class(x)) + v.width() / 2;
            f->emb_[i * d + j] = x;
            f->emb_err_[i * d + j] = err.get_d() * (1 + 1e-12) + 1e-300;
        }
    return f;
}

FieldPtr load_field(FieldSpec spec) { return Field::LoadAccess::load(std::move(spec)); }

// ---------------------------------------------------------------------------
// Element-level operations

int sign_at(const Elem& a, int i)
{
    if (a.is_zero()) return 0;
    const Field& f = a.field();
    auto p = f.to_power_basis(a);
    // Start at 64-bit root intervals and double the precision until the image
    // interval excludes zero; this terminates because sigma_i is injective.
    for (long bits = 64; bits <= (1L << 16); bits *= 2) {
        int s = f.embedding(p, i, bits).sign();
        if (s != 0) return s;
    }
    fail(Errc::Internal, "sign determination did not converge (is the defining polynomial irreducible?)");
}

std::vector<int> signs(const Elem& a)
{
    std::vector<int> s(a.degree());
    for (int i = 0; i < a.degree(); ++i) s[i] = sign_at(a, i);
    return s;
}

namespace {

bool all_signs(const Elem& a, bool allow_zero)
{
    if (a.is_zero()) return allow_zero;
    const Field& f = a.field();
    bool small = std::all_of(a.coords().begin(), a.coords().end(),
                             [](const mpz_class& x) { return x.fits_slong_p(); });
    std::vector<std::int64_t> c;
    if (small)
        for (const auto& x : a.coords()) c.push_back(x.get_si());
    for (int i = 0; i < f.degree(); ++i) {
        int s = small ? f.sign_at(c, i) : sign_at(a, i);
        if (s <= 0) return false;
    }
    return true;
}

} // namespace

bool is_totally_positive(const Elem& a) { return all_signs(a, false); }

bool is_totally_nonneg(const Elem& a) { return all_signs(a, true); }

mpz_class trace(const Elem& a)
{
    const Field& f = a.field();
    mpz_class t = 0;
    for (int i = 0; i < f.degree(); ++i) t += a[i] * f.basis_trace(i);
    return t;
}

mpz_class norm(const Elem& a)
{
    const Field& f = a.field();
    return linalg::det(f.regular_matrix(a), f.degree());
}

mpq_class trace_abs(const Elem& a)
{
    mpq_class q(trace(a), a.field().degree());
    q.canonicalize();
    return q;
}

Interval embedding(const Elem& a, int i, const mpq_class& prec)
{
    const Field& f = a.field();
    auto p = f.to_power_basis(a);
    for (long bits = 64;; bits *= 2) {
        Interval v = f.embedding(p, i, bits);
        if (v.width() <= prec) return v;
        if (bits > (1L << 20)) fail(Errc::Internal, "embedding refinement did not converge");
    }
}

Interval house(const Elem& a, const mpq_class& prec)
{
    Interval best{0, 0};
    for (int i = 0; i < a.degree(); ++i) {
        Interval v = abs(embedding(a, i, prec));
        best.lo = std::max(best.lo, v.lo);
        best.hi = std::max(best.hi, v.hi);
    }
    return best;
}

double approx_embedding(const Elem& a, int i)
{
    const Field& f = a.field();
    double v = 0;
    for (int j = 0; j < f.degree(); ++j) v += a[j].get_d() * f.basis_embedding(i, j);
    return v;
}

bool is_unit(const Elem& a)
{
    if (a.is_zero()) return false;
    mpz_class n = norm(a);
    return n == 1 || n == -1;
}

ElemQ divide(const Elem& a, const Elem& b)
{
    if (b.is_zero()) fail(Errc::DivisionByZero, "division by zero element");
    const Field& f = a.field();
    const int d = f.degree();
    auto m = f.regular_matrix(b);
    std::vector<mpq_class> mq(m.begin(), m.end());
    std::vector<mpq_class> rhs(a.coords().begin(), a.coords().end());
    auto x = linalg::solve(std::move(mq), std::move(rhs), d);
    if (!x) fail(Errc::Internal, "regular representation of a nonzero element is singular");
    return ElemQ(f, std::move(*x));
}

std::optional<Elem> exact_divide(const Elem& a, const Elem& b)
{
    ElemQ q = divide(a, b);
    if (!q.is_integral()) return std::nullopt;
    return q.to_elem();
}

bool two_is_ramified(const Field& f)
{
    // A prime ramifies exactly when it divides the discriminant.
    return mpz_divisible_ui_p(f.disc().get_mpz_t(), 2) != 0;
}

} // namespace kitaoka

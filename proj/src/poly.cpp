#include "kitaoka/poly.hpp"

#include "kitaoka/error.hpp"

#include <algorithm>
#include <cmath>

namespace kitaoka {

int Interval::sign() const
{
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    return 0;
}

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval operator*(const Interval& a, const Interval& b)
{
    mpq_class p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    auto [mn, mx] = std::minmax_element(std::begin(p), std::end(p));
    return {*mn, *mx};
}

Interval abs(const Interval& a)
{
    if (a.lo >= 0) return a;
    if (a.hi <= 0) return {-a.hi, -a.lo};
    return {mpq_class(0), std::max(mpq_class(-a.lo), a.hi)};
}

Poly::Poly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::from_integers(const std::vector<mpz_class>& coeffs)
{
    std::vector<mpq_class> c(coeffs.begin(), coeffs.end());
    return Poly(std::move(c));
}

void Poly::trim()
{
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpq_class Poly::coeff(int k) const
{
    if (k < 0 || k >= static_cast<int>(c_.size())) return 0;
    return c_[k];
}

mpq_class Poly::operator()(const mpq_class& x) const
{
    mpq_class r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
}

Interval Poly::operator()(const Interval& x) const
{
    Interval r{0, 0};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        r = r * x;
        r.lo += *it;
        r.hi += *it;
    }
    return r;
}

double Poly::eval(double x) const
{
    double r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + it->get_d();
    return r;
}

Poly Poly::derivative() const
{
    std::vector<mpq_class> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<long>(k));
    return Poly(std::move(d));
}

Poly Poly::monic() const
{
    if (is_zero()) return *this;
    mpq_class inv = 1 / lead();
    return inv * *this;
}

Poly operator+(const Poly& a, const Poly& b)
{
    std::vector<mpq_class> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(int(i)) + b.coeff(int(i));
    return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b)
{
    std::vector<mpq_class> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(int(i)) - b.coeff(int(i));
    return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b)
{
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpq_class> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
}

Poly operator*(const mpq_class& s, const Poly& a)
{
    std::vector<mpq_class> c(a.c_);
    for (auto& x : c) x *= s;
    return Poly(std::move(c));
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r)
{
    if (b.is_zero()) fail(Errc::DivisionByZero, "polynomial division by zero");
    std::vector<mpq_class> rem = a.c_;
    int db = b.degree();
    std::vector<mpq_class> quo(std::max(0, a.degree() - db + 1));
    for (int k = a.degree(); k >= db; --k) {
        if (rem[k] == 0) continue;
        mpq_class f = rem[k] / b.lead();
        quo[k - db] = f;
        for (int j = 0; j <= db; ++j) rem[k - db + j] -= f * b.c_[j];
    }
    q = Poly(std::move(quo));
    r = Poly(std::move(rem));
}

Poly operator%(const Poly& a, const Poly& b)
{
    Poly q, r;
    Poly::divmod(a, b, q, r);
    return r;
}

Poly gcd(Poly a, Poly b)
{
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

std::vector<Poly> sturm_sequence(const Poly& f)
{
    std::vector<Poly> s{f, f.derivative()};
    while (!s.back().is_zero() && s.back().degree() > 0) {
        Poly r = s[s.size() - 2] % s.back();
        if (r.is_zero()) break;
        s.push_back(mpq_class(-1) * r);
    }
    return s;
}

namespace {

int sign_changes(const std::vector<Poly>& sturm, const mpq_class& x)
{
    int changes = 0, last = 0;
    for (const auto& p : sturm) {
        int s = sgn(p(x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

void isolate(const Poly& f, const std::vector<Poly>& sturm, const mpq_class& a, const mpq_class& b,
             int count, std::vector<Interval>& out)
{
    // Invariant: exactly `count` distinct roots in (a, b].
    if (count == 0) return;
    if (count == 1) {
        if (f(b) == 0) {
            out.push_back({b, b});
            return;
        }
        out.push_back({a, b});
        return;
    }
    mpq_class m = (a + b) / 2;
    int left = count_roots(sturm, a, m);
    isolate(f, sturm, a, m, left, out);
    isolate(f, sturm, m, b, count - left, out);
}

} // namespace

int count_roots(const std::vector<Poly>& sturm, const mpq_class& a, const mpq_class& b)
{
    return sign_changes(sturm, a) - sign_changes(sturm, b);
}

std::vector<Interval> isolate_real_roots(const Poly& f)
{
    if (f.is_zero()) fail(Errc::Internal, "cannot isolate roots of the zero polynomial");
    // Squarefree part keeps every root simple for the bisection invariant.
    Poly g = gcd(f, f.derivative());
    Poly sq = f;
    if (g.degree() > 0) {
        Poly q, r;
        Poly::divmod(f, g, q, r);
        sq = q;
    }
    // Cauchy bound, rounded up to a power of two so that all endpoints stay dyadic.
    mpq_class bound = 0;
    for (int k = 0; k < sq.degree(); ++k) bound = std::max(bound, mpq_class(::abs(sq.coeff(k) / sq.lead())));
    bound += 1;
    mpq_class b = 1;
    while (b < bound) b *= 2;
    auto sturm = sturm_sequence(sq);
    std::vector<Interval> out;
    mpq_class lo = -b;
    int total = count_roots(sturm, lo, b);
    isolate(sq, sturm, lo, b, total, out);
    return out;
}

void refine_root(const Poly& f, Interval& root, long bits)
{
    if (root.lo == root.hi) return;
    mpz_class den = 1;
    den <<= bits;
    const mpq_class target(mpz_class(1), den);
    // The right endpoint is never a root of a non-degenerate isolating interval.
    const int shi = sgn(f(root.hi));
    while (root.width() > target) {
        mpq_class m = (root.lo + root.hi) / 2;
        int sm = sgn(f(m));
        if (sm == 0) {
            root.lo = root.hi = m;
            return;
        }
        if (sm == shi) root.hi = m;
        else root.lo = m;
    }
}

} // namespace kitaoka

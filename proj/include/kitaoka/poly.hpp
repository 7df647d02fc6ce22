#pragma once

#include <gmpxx.h>

#include <vector>

namespace kitaoka {

/// Closed rational interval [lo, hi]; lo == hi encodes an exact value.
struct Interval {
    mpq_class lo;
    mpq_class hi;

    mpq_class width() const { return hi - lo; }
    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    int sign() const; // +1/-1 when the interval excludes zero, 0 otherwise
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval abs(const Interval& a);

/// Dense polynomial over Q, coefficients stored constant term first.
/// The zero polynomial has no coefficients.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<mpq_class> coeffs);
    static Poly from_integers(const std::vector<mpz_class>& coeffs);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<mpq_class>& coeffs() const { return c_; }
    const mpq_class& lead() const { return c_.back(); }
    mpq_class coeff(int k) const;

    mpq_class operator()(const mpq_class& x) const;
    Interval operator()(const Interval& x) const;
    double eval(double x) const;

    Poly derivative() const;
    Poly monic() const;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const mpq_class& s, const Poly& a);
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Euclidean division; throws DivisionByZero on a zero divisor.
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
    friend Poly operator%(const Poly& a, const Poly& b);

private:
    void trim();
    std::vector<mpq_class> c_;
};

Poly gcd(Poly a, Poly b);

/// Sturm sequence f, f', -rem(f, f'), ... used for real-root counting.
std::vector<Poly> sturm_sequence(const Poly& f);

/// Number of distinct real roots of f in the half-open interval (a, b].
int count_roots(const std::vector<Poly>& sturm, const mpq_class& a, const mpq_class& b);

/// Isolating intervals for all distinct real roots of a nonzero polynomial,
/// sorted ascending. Endpoints are dyadic; an exactly hit root is returned as
/// a degenerate interval. Non-degenerate intervals satisfy sign(f(lo)) != sign(f(hi)).
std::vector<Interval> isolate_real_roots(const Poly& f);

/// Halve an isolating interval of a simple root of f until its width is at most 2^-bits.
void refine_root(const Poly& f, Interval& root, long bits);

} // namespace kitaoka

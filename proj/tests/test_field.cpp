#include "kitaoka/catalog.hpp"
#include "kitaoka/element_io.hpp"
#include "kitaoka/field.hpp"
#include "kitaoka/linalg.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace kitaoka;

namespace {

Elem E(const FieldPtr& f, const char* s) { return parse_elem(*f, s); }

// Independent oracle: discriminant of a monic polynomial as
// (-1)^(n(n-1)/2) * Res(f, f'), the resultant taken as a Sylvester determinant.
mpz_class poly_disc_oracle(const std::vector<long>& f)
{
    int n = static_cast<int>(f.size()) - 1;
    std::vector<long> df(n);
    for (int i = 1; i <= n; ++i) df[i - 1] = i * f[i];
    int m = n - 1, size = n + m;
    std::vector<mpz_class> s(size * size);
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i) s[r * size + r + i] = f[n - i];
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i) s[(m + r) * size + r + i] = df[m - i];
    mpz_class res = linalg::det(s, size);
    return (n * (n - 1) / 2) % 2 ? -res : res;
}

// Independent numeric roots by plain bisection on sign changes over a fine grid.
std::vector<long double> numeric_roots(const std::vector<long>& f)
{
    auto ev = [&](long double x) {
        long double v = 0;
        for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) v = v * x + f[i];
        return v;
    };
    std::vector<long double> roots;
    const long double step = 1e-3L;
    for (long double x = -20; x < 20; x += step) {
        long double a = x, b = x + step;
        if (ev(a) == 0) {
            roots.push_back(a);
            continue;
        }
        if ((ev(a) < 0) == (ev(b) < 0)) continue;
        for (int it = 0; it < 200; ++it) {
            long double mid = (a + b) / 2;
            if ((ev(mid) < 0) == (ev(a) < 0))
                a = mid;
            else
                b = mid;
        }
        roots.push_back((a + b) / 2);
    }
    return roots;
}

std::vector<long> small_poly(const Field& f)
{
    std::vector<long> p;
    for (const auto& c : f.spec().poly) p.push_back(c.get_si());
    return p;
}

Elem random_elem(const FieldPtr& f, std::mt19937_64& rng, int bound)
{
    std::uniform_int_distribution<int> dist(-bound, bound);
    std::vector<mpz_class> c(f->degree());
    for (auto& x : c) x = dist(rng);
    return Elem(*f, c);
}

} // namespace

TEST_CASE("load_field validates catalog entries")
{
    auto q5 = builtin_field("qsqrt5");
    CHECK(q5->disc() == 5);
    CHECK(q5->degree() == 2);
    auto z20 = builtin_field("zeta20");
    CHECK(z20->degree() == 4);

    for (const auto& id : Catalog::builtin().ids()) {
        auto f = builtin_field(id);
        CAPTURE(id);
        if (f->spec().integral_basis.size() == static_cast<std::size_t>(f->degree())) {
            // power-basis fields: the catalog discriminant is the polynomial discriminant
            bool power = true;
            for (int i = 0; i < f->degree(); ++i)
                for (int k = 0; k < f->degree(); ++k)
                    if (f->spec().integral_basis[i][k] != (i == k ? 1 : 0)) power = false;
            if (power) CHECK(poly_disc_oracle(small_poly(*f)) == f->disc());
        }
    }
    CHECK(poly_disc_oracle({5, 0, -5, 0, 1}) == 2000);
}

TEST_CASE("load_field errors")
{
    FieldSpec s;
    s.id = "imag";
    s.degree = 2;
    s.poly = {1, 0, 1};
    s.integral_basis = {{1, 0}, {0, 1}};
    s.disc = -4;
    try {
        load_field(s);
        FAIL("expected NotTotallyReal");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotTotallyReal);
    }

    s.poly = {-5, 0, 1};
    s.integral_basis = {{1, 0}, {mpq_class(1, 3), mpq_class(1, 3)}};
    s.disc = 20;
    try {
        load_field(s);
        FAIL("expected BasisNotClosed");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BasisNotClosed);
    }

    s.integral_basis = {{1, 0}, {0, 1}};
    s.disc = 5;
    try {
        load_field(s);
        FAIL("expected DiscriminantMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DiscriminantMismatch);
    }
    s.disc = 20;
    CHECK_NOTHROW(load_field(s));
}

TEST_CASE("ring arithmetic")
{
    auto z = builtin_field("zeta20");
    Elem pi = E(z, "t^3+t^2-3*t-2"), eps = E(z, "t+2");
    CHECK(pi * pi == z->integer(2) * eps);
    CHECK(format_elem(pi * pi) == "2*t+4");
    CHECK(pi * z->one() == pi);

    auto q5 = builtin_field("qsqrt5");
    Elem t = E(q5, "t");
    CHECK(t * t + (t - q5->one()) * (t - q5->one()) == q5->integer(3));

    auto q2 = builtin_field("qsqrt2");
    CHECK_THROWS_AS(q2->one() + q5->one(), Error);
}

TEST_CASE("signs and positivity")
{
    auto q5 = builtin_field("qsqrt5");
    for (int i = 0; i < 2; ++i) CHECK(sign_at(q5->zero(), i) == 0);
    CHECK(sign_at(E(q5, "t"), 0) == -1);
    CHECK(sign_at(E(q5, "t"), 1) == 1);
    auto q6 = builtin_field("qsqrt6");
    CHECK(signs(E(q6, "t+3")) == std::vector<int>{1, 1});
    CHECK(is_totally_positive(q6->one()));
    CHECK_FALSE(is_totally_positive(E(builtin_field("qsqrt2"), "t")));
    CHECK(is_totally_positive(E(builtin_field("zeta20"), "t+2")));
    CHECK(is_totally_nonneg(q6->zero()));
    CHECK_FALSE(is_totally_positive(q6->zero()));

    // near-cancellation: (1+sqrt2)^40 - its nearest integer approximant
    auto q2 = builtin_field("qsqrt2");
    Elem u = E(q2, "t+1").pow(40);
    Elem conj = E(q2, "-t+1").pow(40); // tiny positive, at the root +sqrt2
    CHECK(signs(conj) == std::vector<int>{1, 1});
    CHECK(sign_at(u - u.field().integer(u[0]) , 0) == -1);
}

TEST_CASE("trace, norm, house")
{
    auto z = builtin_field("zeta20");
    CHECK(norm(E(z, "t^2-t")) == 5);
    for (const auto& id : Catalog::builtin().ids()) {
        auto f = builtin_field(id);
        CHECK(trace(f->one()) == f->degree());
        CHECK(norm(f->one()) == 1);
    }
    CHECK(norm(E(builtin_field("qsqrt6"), "t+3")) == 3);
    CHECK(trace_abs(E(z, "t+2")) == 2);

    auto one = house(builtin_field("qsqrt5")->one(), mpq_class(1, 1000));
    CHECK(one.lo == 1);
    CHECK(one.hi == 1);
    auto h = house(E(builtin_field("qsqrt2"), "t+1"), mpq_class(1, 1000000));
    CHECK(h.lo <= mpq_class(2414214, 1000000));
    CHECK(h.hi >= mpq_class(2414213, 1000000));
    CHECK(h.width() <= mpq_class(1, 1000000));
    auto g = house(E(builtin_field("qsqrt5"), "t"), mpq_class(1, 1000000));
    CHECK(g.lo <= mpq_class(1618034, 1000000));
    CHECK(g.hi >= mpq_class(1618033, 1000000));
}

TEST_CASE("two_is_ramified")
{
    CHECK_FALSE(two_is_ramified(*builtin_field("qsqrt5")));
    CHECK(two_is_ramified(*builtin_field("qsqrt2")));
    CHECK(two_is_ramified(*builtin_field("zeta20")));
    CHECK_FALSE(two_is_ramified(*builtin_field("zeta7")));
}

TEST_CASE("element grammar")
{
    auto z = builtin_field("zeta20");
    Elem pi = E(z, "t^3+t^2-3*t-2");
    CHECK(pi.coords() == std::vector<mpz_class>{-2, -3, 1, 1});
    CHECK(E(z, " t ^ 3 + t^2 - 3 * t - 2 ") == pi);
    CHECK(E(z, "t^4") == E(z, "5*t^2-5"));
    CHECK(E(z, "-t") == -E(z, "t"));

    FieldSpec s;
    s.id = "sqrt5pow";
    s.degree = 2;
    s.poly = {-5, 0, 1};
    s.integral_basis = {{1, 0}, {mpq_class(1, 2), mpq_class(1, 2)}};
    s.disc = 5;
    auto f = load_field(s);
    Elem g = parse_elem(*f, "1/2+1/2*t");
    CHECK(g.coords() == std::vector<mpz_class>{0, 1});
    CHECK(format_elem(g) == "1/2*t+1/2");
    CHECK_THROWS_WITH_AS(parse_elem(*builtin_field("qsqrt5"), "1/3*t"), doctest::Contains("algebraic integer"), Error);
    for (const char* bad : {"", "t+", "2*", "3/0", "x", "t^", "1//2", "2t"}) {
        CAPTURE(bad);
        try {
            parse_elem_q(*f, bad);
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::SyntaxError);
        }
    }
}

TEST_CASE("parse/format round trip")
{
    std::mt19937_64 rng(7);
    for (const auto& id : Catalog::builtin().ids()) {
        auto f = builtin_field(id);
        for (int i = 0; i < 1000; ++i) {
            Elem a = random_elem(f, rng, 50);
            REQUIRE(parse_elem(*f, format_elem(a)) == a);
        }
    }
}

TEST_CASE("algebraic properties on random elements")
{
    std::mt19937_64 rng(11);
    for (const auto& id : Catalog::builtin().ids()) {
        auto f = builtin_field(id);
        CAPTURE(id);
        for (int i = 0; i < 60; ++i) {
            Elem a = random_elem(f, rng, 9), b = random_elem(f, rng, 9);
            CHECK(trace(a + b) == trace(a) + trace(b));
            CHECK(norm(a * b) == norm(a) * norm(b));
            for (int k = 0; k < f->degree(); ++k) CHECK(sign_at(a * b, k) == sign_at(a, k) * sign_at(b, k));
            if (is_totally_positive(a)) {
                mpz_class lhs, rhs;
                mpz_pow_ui(lhs.get_mpz_t(), trace(a).get_mpz_t(), f->degree());
                mpz_ui_pow_ui(rhs.get_mpz_t(), f->degree(), f->degree());
                CHECK(lhs >= rhs * norm(a));
            }
            if (!b.is_zero()) CHECK(exact_divide(a * b, b) == a);
        }
    }
}

TEST_CASE("embeddings reproduce trace and norm")
{
    std::mt19937_64 rng(5);
    for (const auto& id : Catalog::builtin().ids()) {
        auto f = builtin_field(id);
        CAPTURE(id);
        auto roots = numeric_roots(small_poly(*f));
        REQUIRE(roots.size() == static_cast<std::size_t>(f->degree()));
        for (int i = 0; i < 20; ++i) {
            Elem a = random_elem(f, rng, 6);
            auto p = f->to_power_basis(a);
            for (long bits : {64L, 256L}) {
                Interval tr{0, 0}, nm{1, 1};
                for (int k = 0; k < f->degree(); ++k) {
                    Interval v = f->embedding(p, k, bits);
                    tr = tr + v;
                    nm = nm * v;
                    // numeric oracle on the k-th ascending root
                    long double x = 0;
                    for (int j = static_cast<int>(p.size()) - 1; j >= 0; --j) x = x * roots[k] + p[j].get_d();
                    CHECK(std::fabs(static_cast<double>(x) - v.lo.get_d()) < 1e-6);
                }
                CHECK(tr.lo <= trace(a));
                CHECK(tr.hi >= trace(a));
                CHECK(nm.lo <= norm(a));
                CHECK(nm.hi >= norm(a));
            }
        }
    }
}

#include "kitaoka/enumerate.hpp"
#include "kitaoka/error.hpp"

#include <doctest.h>

#include <random>

using namespace kitaoka;
using namespace kitaoka::enumerate;

namespace {

// Random positive definite integer matrix A^T A + I with small entries.
std::vector<mpz_class> random_gram(std::mt19937_64& rng, int n)
{
    std::uniform_int_distribution<int> dist(-2, 2);
    std::vector<long> a(n * n);
    for (auto& v : a) v = dist(rng);
    std::vector<mpz_class> g(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            long s = i == j ? 1 : 0;
            for (int k = 0; k < n; ++k) s += a[k * n + i] * a[k * n + j];
            g[i * n + j] = s;
        }
    return g;
}

long qf(const std::vector<mpz_class>& g, const Vec& x)
{
    long n = static_cast<long>(x.size()), s = 0;
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) s += g[i * n + j].get_si() * x[i] * x[j];
    return s;
}

// Oracle: every vector of a coordinate box, lexicographic by construction.
// Since G >= I, x^T G x <= B forces |x_i| <= sqrt(B).
std::vector<Vec> box(const std::vector<mpz_class>& g, int n, long bound)
{
    long r = 0;
    while ((r + 1) * (r + 1) <= bound) ++r;
    std::vector<Vec> out;
    Vec x(n, -r);
    while (true) {
        if (qf(g, x) <= bound) out.push_back(x);
        int k = n - 1;
        while (k >= 0 && x[k] == r) x[k--] = -r;
        if (k < 0) break;
        ++x[k];
    }
    return out;
}

} // namespace

TEST_CASE("enumeration agrees with box search, serial and parallel")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 1 + trial % 5;
        long bound = 1 + static_cast<long>(rng() % 12);
        auto g = random_gram(rng, n);
        auto expect = box(g, n, bound);
        Enumerator e(g, n, bound);
        QuadEval ev(g, n);
        Accept all = [&](std::span<const std::int64_t> x) { return ev(x) <= bound; };
        auto s = e.collect_serial(all, 1'000'000);
        auto p = e.collect_parallel(all, 1'000'000);
        CHECK(s.found == expect);
        CHECK(p.found == expect);

        // first vector at an exact level
        long level = static_cast<long>(rng() % (bound + 1));
        Accept at = [&](std::span<const std::int64_t> x) { return ev.equals(x, level); };
        std::optional<Vec> want;
        for (const auto& v : expect)
            if (qf(g, v) == level) {
                want = v;
                break;
            }
        Enumerator el(g, n, level);
        CHECK(el.find_first_serial(at, 1'000'000).found == want);
        CHECK(el.find_first_parallel(at, 1'000'000).found == want);
    }
}

TEST_CASE("budget exceeded is reported, never silently empty")
{
    std::vector<mpz_class> g = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    Enumerator e(g, 3, 400);
    Accept none = [](std::span<const std::int64_t>) { return false; };
    for (bool parallel : {false, true}) {
        try {
            e.find_first(none, Options{1000, parallel});
            FAIL("expected BudgetExceeded");
        } catch (const Error& err) {
            CHECK(err.code() == Errc::BudgetExceeded);
        }
        try {
            e.collect(none, Options{1000, parallel});
            FAIL("expected BudgetExceeded");
        } catch (const Error& err) {
            CHECK(err.code() == Errc::BudgetExceeded);
        }
    }
    auto s = e.find_first_serial(none, 1'000'000);
    auto p = e.find_first_parallel(none, 1'000'000);
    CHECK_FALSE(s.found);
    CHECK(p.found == s.found);
    CHECK(p.nodes == s.nodes); // exhausting the tree visits every node once either way
}

TEST_CASE("negative bound and indefinite input")
{
    std::vector<mpz_class> g = {1};
    Enumerator e(g, 1, -1);
    CHECK(e.collect_serial([](auto) { return true; }, 10).found.empty());
    std::vector<mpz_class> bad = {1, 2, 2, 1};
    CHECK_THROWS_AS(Enumerator(bad, 2, 5), Error);
}

TEST_CASE("QuadEval falls back to GMP on overflow")
{
    std::vector<mpz_class> g = {mpz_class("4000000000000000000"), 0, 0, 1};
    QuadEval ev(g, 2);
    Vec x = {3000000000, 1};
    mpz_class want = mpz_class("4000000000000000000") * 3000000000L * 3000000000L + 1;
    CHECK(ev(x) == want);
}

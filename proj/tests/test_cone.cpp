#include "kitaoka/cone.hpp"
#include "kitaoka/error.hpp"
#include "kitaoka/units.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace kitaoka;
using oracle::E;

namespace {

std::set<std::string> as_set(const std::vector<Elem>& v)
{
    std::set<std::string> s;
    for (const auto& a : v) s.insert(format_elem(a));
    return s;
}

std::set<std::multiset<std::string>> as_set(const std::vector<Decomposition>& v)
{
    std::set<std::multiset<std::string>> s;
    for (const auto& d : v) {
        std::multiset<std::string> m;
        for (const auto& p : d) m.insert(format_elem(p));
        s.insert(m);
    }
    return s;
}

// Exhaustive indecomposability by the box oracle: alpha = beta + gamma with
// both totally positive forces Tr(beta) < Tr(alpha).
bool indecomposable_oracle(const Elem& alpha)
{
    long t = trace(alpha).get_si();
    for (const auto& b : oracle::tp_by_box(alpha.field(), t - 1))
        if (is_totally_positive(alpha - b)) return false;
    return true;
}

const char* quadratic_ids[] = {"qsqrt2", "qsqrt3", "qsqrt5", "qsqrt6", "qsqrt13", "qsqrt17", "qsqrt33"};

} // namespace

TEST_CASE("enumerate_tp_by_trace agrees with box enumeration")
{
    for (const char* id : quadratic_ids) {
        auto f = builtin_field(id);
        for (long t : {1L, 4L, 7L, 12L}) {
            CAPTURE(id);
            CAPTURE(t);
            auto got = enumerate_tp_by_trace(*f, t);
            auto want = oracle::tp_by_box(*f, t);
            CHECK(got.size() == want.size());
            CHECK(as_set(got) == as_set(want));
            CHECK(std::is_sorted(got.begin(), got.end(), canonical_less));
            CHECK(std::adjacent_find(got.begin(), got.end()) == got.end());
        }
    }
    for (const char* id : {"zeta7", "zeta20", "qsqrt2sqrt3"}) {
        auto f = builtin_field(id);
        CAPTURE(id);
        long t = f->degree() + 2;
        CHECK(as_set(enumerate_tp_by_trace(*f, t)) == as_set(oracle::tp_by_box(*f, t)));
    }
}

TEST_CASE("enumerate_tp_by_trace small cases")
{
    auto q = builtin_field("q");
    CHECK(as_set(enumerate_tp_by_trace(*q, 3)) == std::set<std::string>{"1", "2", "3"});
    CHECK(enumerate_tp_by_trace(*builtin_field("qsqrt5"), 0).empty());

    // Q(sqrt5), t = (1+sqrt5)/2: t and 1-t are not totally positive, so
    // trace 2 gives only 1; the golden squares t+1 and 2-t have trace 3.
    auto k = builtin_field("qsqrt5");
    auto names = [&](long t) {
        std::vector<std::string> out;
        for (const auto& a : enumerate_tp_by_trace(*k, t)) out.push_back(format_elem(a));
        return out;
    };
    CHECK(names(2) == std::vector<std::string>{"1"});
    CHECK(names(3) == std::vector<std::string>{"1", "t+1", "-t+2"});
    CHECK(names(4) == std::vector<std::string>{"1", "t+1", "-t+2", "2"});
}

TEST_CASE("is_indecomposable examples")
{
    for (const char* id : {"q", "qsqrt2", "qsqrt5", "zeta20"}) {
        auto f = builtin_field(id);
        auto two = is_indecomposable(f->integer(2));
        CHECK_FALSE(two.indecomposable);
        REQUIRE(two.witness);
        CHECK(two.witness->first == f->one());
        CHECK(two.witness->second == f->one());
        CHECK(is_indecomposable(f->one()).indecomposable);
    }
    auto z = builtin_field("zeta20");
    Elem p5 = E(z, "t^2-t");
    CHECK(norm(p5) == 5);
    CHECK(indecomposable_by_norm(p5));
    CHECK(is_indecomposable(p5).indecomposable);

    auto q6 = builtin_field("qsqrt6");
    CHECK(indecomposable_by_norm(E(q6, "3+t")));
    CHECK_FALSE(indecomposable_by_norm(builtin_field("q")->integer(2)));
    CHECK_THROWS_AS(is_indecomposable(E(q6, "t")), Error);
}

TEST_CASE("indecomposability: exhaustive search, box oracle and the norm test agree")
{
    std::size_t cases = 0, by_norm = 0;
    for (const char* id : {"qsqrt2", "qsqrt3", "qsqrt5", "qsqrt6", "qsqrt13", "qsqrt33", "zeta7", "zeta20"}) {
        auto f = builtin_field(id);
        long t = f->degree() == 2 ? 14 : 2 * f->degree() + 1;
        for (const auto& a : enumerate_tp_by_trace(*f, t)) {
            CAPTURE(format_elem(a));
            auto v = is_indecomposable(a);
            if (v.witness) {
                CHECK(v.witness->first + v.witness->second == a);
                CHECK(is_totally_positive(v.witness->first));
                CHECK(is_totally_positive(v.witness->second));
            }
            if (f->degree() == 2) CHECK(v.indecomposable == indecomposable_oracle(a));
            if (indecomposable_by_norm(a)) {
                ++by_norm;
                CHECK(v.indecomposable);
            }
            ++cases;
        }
    }
    CHECK(cases >= 200);
    CHECK(by_norm >= 40);
}

TEST_CASE("decompositions of 2 and 3")
{
    using Set = std::set<std::multiset<std::string>>;
    for (const char* id : {"qsqrt2", "qsqrt3", "qsqrt5"}) {
        auto f = builtin_field(id);
        CAPTURE(id);
        CHECK(as_set(decompositions(f->integer(2), 4)) == Set{{"2"}, {"1", "1"}});
    }
    Set three{{"3"}, {"2", "1"}, {"1", "1", "1"}};
    CHECK(as_set(decompositions(builtin_field("qsqrt2")->integer(3), 4)) == three);
    CHECK(as_set(decompositions(builtin_field("qsqrt3")->integer(3), 4)) == three);
    auto golden = three;
    golden.insert({"t+1", "-t+2"});
    auto d5 = decompositions(builtin_field("qsqrt5")->integer(3), 4);
    CHECK(d5.size() == 4);
    CHECK(as_set(d5) == golden);
}

TEST_CASE("decompositions are closed under merging parts")
{
    auto f = builtin_field("qsqrt5");
    for (const char* s : {"4", "t+3", "2*t+2"}) {
        Elem a = E(f, s);
        auto all = decompositions(a, 8);
        auto set = as_set(all);
        for (const auto& d : all) {
            Elem sum = f->zero();
            for (const auto& p : d) {
                CHECK(is_totally_positive(p));
                sum += p;
            }
            CHECK(sum == a);
            for (std::size_t i = 0; i < d.size(); ++i)
                for (std::size_t j = i + 1; j < d.size(); ++j) {
                    std::multiset<std::string> m;
                    for (std::size_t k = 0; k < d.size(); ++k)
                        if (k != i && k != j) m.insert(format_elem(d[k]));
                    m.insert(format_elem(d[i] + d[j]));
                    CHECK(set.count(m) == 1);
                }
        }
    }
}

TEST_CASE("small_norm_scan")
{
    auto q = builtin_field("q");
    auto sq = small_norm_scan(*q, 10);
    REQUIRE(sq.entries.size() == 1);
    CHECK(sq.entries[0].alpha == q->one());

    auto q6 = builtin_field("qsqrt6");
    auto s6 = small_norm_scan(*q6, 12, true);
    CHECK(s6.exhaustive_mod_units);
    bool found = false;
    for (const auto& e : s6.entries)
        if (e.alpha == E(q6, "3+t")) {
            found = true;
            CHECK(e.norm == 3);
            CHECK_FALSE(e.power_of_two);
        }
    CHECK(found);

    auto q33 = builtin_field("qsqrt33");
    auto s33 = small_norm_scan(*q33, 4, true);
    CHECK(s33.trace_bound >= s33.required_bound);
    std::set<std::string> norm3;
    for (const auto& e : s33.entries)
        if (e.norm == 3) norm3.insert(format_elem(e.alpha));
    // 6 + sqrt33 = 5 + 2t with t = (1+sqrt33)/2
    CHECK(norm3.count("2*t+5") == 1);

    for (const auto& e : small_norm_scan(*builtin_field("qsqrt5"), 12, true).entries) {
        CHECK(e.power_of_two);
        CHECK(is_unit(e.alpha));
    }
    CHECK_THROWS_AS(small_norm_scan(*builtin_field("zeta20"), 8, true), Error);
}

TEST_CASE("small_norm_scan matches the box oracle")
{
    for (const char* id : quadratic_ids) {
        auto f = builtin_field(id);
        std::set<std::string> want;
        for (const auto& a : oracle::tp_by_box(*f, 12))
            if (norm(a) < 4) want.insert(format_elem(a));
        std::set<std::string> got;
        for (const auto& e : small_norm_scan(*f, 12).entries) got.insert(format_elem(e.alpha));
        CAPTURE(id);
        CHECK(got == want);
    }
}

TEST_CASE("continued-fraction candidates are exactly the indecomposables")
{
    for (const char* id : quadratic_ids) {
        auto f = builtin_field(id);
        CAPTURE(id);
        auto cand = cf_indecomposable_candidates(*f, 20);
        std::set<std::string> want;
        for (const auto& a : oracle::tp_by_box(*f, 20))
            if (is_indecomposable(a).indecomposable) want.insert(format_elem(a));
        CHECK(as_set(cand) == want);
    }
    auto q2 = builtin_field("qsqrt2");
    auto c2 = as_set(cf_indecomposable_candidates(*q2, 20));
    CHECK(c2.count("1") == 1);
    CHECK(c2.count("t+2") == 1);
    CHECK(as_set(cf_indecomposable_candidates(*builtin_field("qsqrt3"), 20)).count("t+2") == 1);
    for (const auto& a : cf_indecomposable_candidates(*builtin_field("qsqrt5"), 20)) CHECK(norm(a) < 4);
    CHECK_THROWS_AS(cf_indecomposable_candidates(*builtin_field("zeta7")), Error);
}

// Serial reference vs OpenMP enumeration on representation workloads.
// usage: bench_enumerate [repeats]
#include "kitaoka/catalog.hpp"
#include "kitaoka/element_io.hpp"
#include "kitaoka/enumerate.hpp"
#include "kitaoka/lattice.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace kitaoka;
using Clock = std::chrono::steady_clock;

namespace {

struct Workload {
    const char* field;
    const char* form;
    const char* target;
    bool collect; // all representations, else the first (or a full miss)
};

template <class F>
double best_of(int repeats, F&& f)
{
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        auto t0 = Clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return best;
}

} // namespace

int main(int argc, char** argv)
{
    int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
    const Workload loads[] = {
        {"qsqrt2", "<1,1,1,1,1,1>", "10+5*t", false}, // odd sqrt2 coordinate: full tree, no hit
        {"qsqrt5", "<1,1,1,1>", "12+3*t", true},
        {"zeta20", "<1,1,1,1>", "2*t^2+6", true},
        {"zeta7", "<1,1,2,2>", "2*t^2+2*t+10", false},
        {"qsqrt13", "[[2,1,0],[1,3,1],[0,1,4]]", "9+2*t", true},
    };
    std::printf("threads: %d, repeats: %d\n", omp_get_max_threads(), repeats);
    std::printf("%-8s %-26s %-14s %-7s %12s %10s %10s %8s %s\n", "field", "form", "target", "mode", "nodes",
                "serial s", "omp s", "speedup", "same");
    for (const auto& w : loads) {
        auto f = builtin_field(w.field);
        auto q = parse_form(*f, w.form);
        Elem a = parse_elem(*f, w.target);
        ZRealization z(q);
        auto t = z.targets(a);
        enumerate::Enumerator e(z.matrix(), z.dim(), t[0]);
        auto accept = [&](std::span<const std::int64_t> x) { return z.hits(x, t); };
        const std::uint64_t limit = 1'000'000'000;
        std::uint64_t nodes = 0;
        bool same = false;
        double ser, par;
        if (w.collect) {
            enumerate::CollectResult rs, rp;
            ser = best_of(repeats, [&] { rs = e.collect_serial(accept, limit); });
            par = best_of(repeats, [&] { rp = e.collect_parallel(accept, limit); });
            nodes = rs.nodes;
            same = rs.found == rp.found;
        } else {
            enumerate::FirstResult rs, rp;
            ser = best_of(repeats, [&] { rs = e.find_first_serial(accept, limit); });
            par = best_of(repeats, [&] { rp = e.find_first_parallel(accept, limit); });
            nodes = rs.nodes;
            same = rs.found == rp.found;
        }
        std::printf("%-8s %-26s %-14s %-7s %12llu %10.4f %10.4f %8.2f %s\n", w.field, w.form, w.target,
                    w.collect ? "collect" : "first", static_cast<unsigned long long>(nodes), ser, par, ser / par,
                    same ? "yes" : "NO");
    }
}

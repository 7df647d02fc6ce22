#include "kitaoka/enumerate.hpp"

#include "kitaoka/error.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <exception>

namespace kitaoka::enumerate {

// Internally the coordinates are reversed (internal level i holds x[n-1-i]) so
// that the classical outermost level n-1 is x[0].
Enumerator::Enumerator(const std::vector<mpz_class>& gram, int n, const mpz_class& bound) : n_(n)
{
    if (n < 1) fail(Errc::Internal, "enumeration needs at least one variable");
    std::vector<long double> a(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i * n + j] = static_cast<long double>(gram[(n - 1 - i) * n + (n - 1 - j)].get_d());

    q_.assign(n * n, 0);
    for (int i = 0; i < n; ++i) {
        long double d = a[i * n + i];
        for (int k = 0; k < i; ++k) d -= q_[k * n + k] * q_[k * n + i] * q_[k * n + i];
        if (!(d > 0)) fail(Errc::NotPositiveDefinite, "trace form is not positive definite");
        q_[i * n + i] = d;
        for (int j = i + 1; j < n; ++j) {
            long double s = a[i * n + j];
            for (int k = 0; k < i; ++k) s -= q_[k * n + k] * q_[k * n + i] * q_[k * n + j];
            q_[i * n + j] = s / d;
        }
    }
    if (bound < 0) {
        bound_ = -1;
        return;
    }
    // floats prune, integers decide: inflate so rounding never loses a point
    bound_ = static_cast<long double>(bound.get_d()) * (1 + std::ldexp(1.0L, -20)) + 1e-6L;
}

struct Enumerator::Task {
    std::vector<std::int64_t> y;
    int next = 0; // internal level still to enumerate
    long double rem = 0;
};

struct Enumerator::Walker {
    const Enumerator& e;
    const Accept& accept;
    std::uint64_t limit;
    bool first_only;

    const std::atomic<long>* best = nullptr; // find_first: abort when a lower task succeeded
    long index = 0;
    std::atomic<std::uint64_t>* shared = nullptr; // collect: wave-wide node count
    std::uint64_t shared_limit = 0;
    std::uint64_t flushed = 0;

    std::vector<std::int64_t> y, x;
    std::uint64_t nodes = 0;
    bool exceeded = false, stop = false, overflow = false;
    std::vector<Vec> found;

    Walker(const Enumerator& en, const Accept& acc, std::uint64_t lim, bool first)
        : e(en), accept(acc), limit(lim), first_only(first), y(en.n_), x(en.n_)
    {
    }

    bool tick()
    {
        if (++nodes > limit) {
            exceeded = stop = true;
            return false;
        }
        if ((nodes & 4095) == 0) {
            if (best && best->load(std::memory_order_relaxed) < index) {
                stop = true;
                return false;
            }
            if (shared) {
                std::uint64_t total = shared->fetch_add(nodes - flushed) + (nodes - flushed);
                flushed = nodes;
                if (total > shared_limit) {
                    exceeded = stop = true;
                    return false;
                }
            }
        }
        return true;
    }

    void dfs(int i, long double rem)
    {
        const int n = e.n_;
        const long double* q = e.q_.data();
        long double c = 0;
        for (int j = i + 1; j < n; ++j) c -= q[i * n + j] * static_cast<long double>(y[j]);
        const long double qi = q[i * n + i];
        long double r = std::sqrt(std::max(rem, 0.0L) / qi) * (1 + 1e-12L) + 1e-9L;
        long double lo_f = std::ceil(c - r), hi_f = std::floor(c + r);
        if (lo_f < -4e18L || hi_f > 4e18L) {
            overflow = stop = true;
            return;
        }
        const auto lo = static_cast<std::int64_t>(lo_f), hi = static_cast<std::int64_t>(hi_f);
        for (std::int64_t v = lo; v <= hi && !stop; ++v) {
            if (!tick()) return;
            y[i] = v;
            long double t = static_cast<long double>(v) - c;
            long double nrem = rem - qi * t * t;
            if (i == 0) {
                for (int k = 0; k < n; ++k) x[k] = y[n - 1 - k];
                if (accept(x)) {
                    found.push_back(x);
                    if (first_only) stop = true;
                }
            } else {
                dfs(i - 1, nrem);
            }
        }
        y[i] = 0;
    }

    void run(const Task& t)
    {
        y = t.y;
        dfs(t.next, t.rem);
    }
};

namespace {

[[noreturn]] void budget(std::uint64_t limit)
{
    fail(Errc::BudgetExceeded, "enumeration node limit " + std::to_string(limit) + " exceeded");
}

[[noreturn]] void overflowed() { fail(Errc::Internal, "enumeration coordinate range exceeds 64-bit integers"); }

} // namespace

FirstResult Enumerator::find_first_serial(const Accept& accept, std::uint64_t node_limit) const
{
    if (bound_ < 0) return {};
    Walker w(*this, accept, node_limit, true);
    w.dfs(n_ - 1, bound_);
    if (w.overflow) overflowed();
    if (w.exceeded) budget(node_limit);
    FirstResult r;
    r.nodes = w.nodes;
    if (!w.found.empty()) r.found = std::move(w.found.front());
    return r;
}

CollectResult Enumerator::collect_serial(const Accept& accept, std::uint64_t node_limit) const
{
    if (bound_ < 0) return {};
    Walker w(*this, accept, node_limit, false);
    w.dfs(n_ - 1, bound_);
    if (w.overflow) overflowed();
    if (w.exceeded) budget(node_limit);
    return {std::move(w.found), w.nodes};
}

std::vector<Enumerator::Task> Enumerator::make_tasks(std::size_t target, std::uint64_t& nodes,
                                                     std::uint64_t node_limit) const
{
    std::vector<Task> cur(1);
    cur[0].y.assign(n_, 0);
    cur[0].next = n_ - 1;
    cur[0].rem = bound_;
    const int n = n_;
    while (!cur.empty() && cur.size() < target && cur[0].next >= 1) {
        std::vector<Task> nxt;
        for (const Task& t : cur) {
            const int i = t.next;
            long double c = 0;
            for (int j = i + 1; j < n; ++j) c -= q_[i * n + j] * static_cast<long double>(t.y[j]);
            const long double qi = q_[i * n + i];
            long double r = std::sqrt(std::max(t.rem, 0.0L) / qi) * (1 + 1e-12L) + 1e-9L;
            long double lo_f = std::ceil(c - r), hi_f = std::floor(c + r);
            if (lo_f < -4e18L || hi_f > 4e18L) overflowed();
            for (auto v = static_cast<std::int64_t>(lo_f); v <= static_cast<std::int64_t>(hi_f); ++v) {
                if (++nodes > node_limit) budget(node_limit);
                Task child = t;
                child.y[i] = v;
                long double d = static_cast<long double>(v) - c;
                child.rem = t.rem - qi * d * d;
                child.next = i - 1;
                nxt.push_back(std::move(child));
            }
        }
        cur = std::move(nxt);
    }
    return cur;
}

namespace {

struct TaskOutcome {
    std::uint64_t nodes = 0;
    bool exceeded = false, overflow = false, ran = false;
    std::vector<Vec> found;
    std::exception_ptr error;
};

std::size_t thread_count() { return static_cast<std::size_t>(std::max(1, omp_get_max_threads())); }

} // namespace

FirstResult Enumerator::find_first_parallel(const Accept& accept, std::uint64_t node_limit) const
{
    if (bound_ < 0) return {};
    const std::size_t threads = thread_count();
    std::uint64_t nodes = 0;
    std::vector<Task> tasks = make_tasks(std::max<std::size_t>(64, 16 * threads), nodes, node_limit);
    const std::size_t wave = std::max<std::size_t>(8, 4 * threads);

    // Tasks run in waves; within a wave the lowest successful task wins and
    // later tasks abort. Resolving each wave in task order keeps both the
    // witness and the budget verdict independent of scheduling.
    for (std::size_t start = 0; start < tasks.size(); start += wave) {
        const std::size_t end = std::min(tasks.size(), start + wave);
        std::vector<TaskOutcome> out(end - start);
        std::atomic<long> best{LONG_MAX};
        const std::uint64_t remaining = node_limit - nodes;

#pragma omp parallel for schedule(dynamic, 1)
        for (long i = static_cast<long>(start); i < static_cast<long>(end); ++i) {
            if (best.load() < i) continue;
            TaskOutcome& o = out[i - start];
            try {
                Walker w(*this, accept, remaining, true);
                w.best = &best;
                w.index = i;
                w.run(tasks[i]);
                o.ran = true;
                o.nodes = w.nodes;
                o.exceeded = w.exceeded;
                o.overflow = w.overflow;
                o.found = std::move(w.found);
                if (!o.found.empty()) {
                    long cur = best.load();
                    while (i < cur && !best.compare_exchange_weak(cur, i)) {
                    }
                }
            } catch (...) {
                o.error = std::current_exception();
                long cur = best.load();
                while (i < cur && !best.compare_exchange_weak(cur, i)) {
                }
            }
        }

        for (std::size_t k = 0; k < out.size(); ++k) {
            TaskOutcome& o = out[k];
            if (o.error) std::rethrow_exception(o.error);
            if (o.overflow) overflowed();
            nodes += o.nodes;
            if (o.exceeded || nodes > node_limit) budget(node_limit);
            if (!o.found.empty()) return {std::move(o.found.front()), nodes};
        }
    }
    return {std::nullopt, nodes};
}

CollectResult Enumerator::collect_parallel(const Accept& accept, std::uint64_t node_limit) const
{
    if (bound_ < 0) return {};
    const std::size_t threads = thread_count();
    std::uint64_t nodes = 0;
    std::vector<Task> tasks = make_tasks(std::max<std::size_t>(64, 16 * threads), nodes, node_limit);
    const std::size_t wave = std::max<std::size_t>(8, 4 * threads);
    CollectResult result;

    for (std::size_t start = 0; start < tasks.size(); start += wave) {
        const std::size_t end = std::min(tasks.size(), start + wave);
        std::vector<TaskOutcome> out(end - start);
        const std::uint64_t remaining = node_limit - nodes;
        std::atomic<std::uint64_t> shared{0};

#pragma omp parallel for schedule(dynamic, 1)
        for (long i = static_cast<long>(start); i < static_cast<long>(end); ++i) {
            TaskOutcome& o = out[i - start];
            try {
                Walker w(*this, accept, remaining, false);
                w.shared = &shared;
                w.shared_limit = remaining;
                w.run(tasks[i]);
                o.nodes = w.nodes;
                o.exceeded = w.exceeded;
                o.overflow = w.overflow;
                o.found = std::move(w.found);
            } catch (...) {
                o.error = std::current_exception();
            }
        }

        for (auto& o : out) {
            if (o.error) std::rethrow_exception(o.error);
            if (o.overflow) overflowed();
        }
        for (auto& o : out) {
            nodes += o.nodes;
            if (o.exceeded || nodes > node_limit) budget(node_limit);
            for (auto& v : o.found) result.found.push_back(std::move(v));
        }
    }
    result.nodes = nodes;
    return result;
}

FirstResult Enumerator::find_first(const Accept& accept, const Options& opt) const
{
    if (opt.parallel && !omp_in_parallel()) return find_first_parallel(accept, opt.node_limit);
    return find_first_serial(accept, opt.node_limit);
}

CollectResult Enumerator::collect(const Accept& accept, const Options& opt) const
{
    if (opt.parallel && !omp_in_parallel()) return collect_parallel(accept, opt.node_limit);
    return collect_serial(accept, opt.node_limit);
}

// ---------------------------------------------------------------------------

QuadEval::QuadEval(const std::vector<mpz_class>& gram, int n) : n_(n), g_(gram)
{
    small_.resize(gram.size());
    for (std::size_t i = 0; i < gram.size(); ++i) {
        if (!gram[i].fits_slong_p()) {
            fits_ = false;
            break;
        }
        small_[i] = gram[i].get_si();
    }
}

mpz_class QuadEval::operator()(std::span<const std::int64_t> x) const
{
    if (fits_) {
        __int128 acc = 0;
        bool ok = true;
        for (int i = 0; i < n_ && ok; ++i) {
            if (x[i] == 0) continue;
            for (int j = 0; j < n_ && ok; ++j) {
                if (x[j] == 0) continue;
                __int128 t;
                if (__builtin_mul_overflow(static_cast<__int128>(small_[i * n_ + j]) * x[i], x[j], &t) ||
                    __builtin_add_overflow(acc, t, &acc))
                    ok = false;
            }
        }
        if (ok) {
            // split into two 64-bit halves for GMP
            bool neg = acc < 0;
            unsigned __int128 u = neg ? -static_cast<unsigned __int128>(acc) : static_cast<unsigned __int128>(acc);
            mpz_class r(static_cast<unsigned long>(u >> 64));
            r <<= 64;
            r += static_cast<unsigned long>(u & ~0UL);
            return neg ? mpz_class(-r) : r;
        }
    }
    mpz_class acc = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) acc += g_[i * n_ + j] * x[i] * x[j];
    return acc;
}

bool QuadEval::equals(std::span<const std::int64_t> x, const mpz_class& value) const { return (*this)(x) == value; }

} // namespace kitaoka::enumerate

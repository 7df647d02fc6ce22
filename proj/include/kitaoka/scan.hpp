#pragma once

#include <omp.h>

#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <vector>

namespace kitaoka {

/// Runs fn(0..n-1), possibly in parallel, and returns the results in index
/// order up to and including the first one for which stop(result) holds.
/// Exceptions are rethrown in index order, so the outcome does not depend on
/// scheduling.
template <class R, class F, class Stop>
std::vector<R> ordered_scan(std::size_t n, F&& fn, Stop&& stop)
{
    std::vector<std::optional<R>> res(n);
    std::vector<std::exception_ptr> err(n);
    std::atomic<long> first{static_cast<long>(n)};
    auto lower = [&](long i) {
        long cur = first.load();
        while (i < cur && !first.compare_exchange_weak(cur, i)) {
        }
    };

#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        if (first.load() < i) continue;
        try {
            res[i].emplace(fn(static_cast<std::size_t>(i)));
            if (stop(*res[i])) lower(i);
        } catch (...) {
            err[i] = std::current_exception();
            lower(i);
        }
    }

    std::vector<R> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (err[i]) std::rethrow_exception(err[i]);
        out.push_back(std::move(*res[i]));
        if (stop(out.back())) break;
    }
    return out;
}

} // namespace kitaoka

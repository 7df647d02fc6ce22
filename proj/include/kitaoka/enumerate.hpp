#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

// Fincke-Pohst enumeration of integer vectors x with x^T G x <= B for a
// positive definite integer matrix G.
//
// Coordinates are visited in lexicographic order (x[0] outermost, each level
// ascending), so the first accepted vector is the lex-smallest one. Floating
// point is used only for pruning, with an inflated bound; callers decide
// membership exactly in the accept predicate.
namespace kitaoka::enumerate {

using Vec = std::vector<std::int64_t>;
/// Leaf predicate; must be safe to call concurrently.
using Accept = std::function<bool(std::span<const std::int64_t>)>;

inline constexpr std::uint64_t default_node_limit = 10'000'000;

struct Options {
    std::uint64_t node_limit = default_node_limit;
    bool parallel = true;
};

struct FirstResult {
    std::optional<Vec> found;
    std::uint64_t nodes = 0;
};

struct CollectResult {
    std::vector<Vec> found;
    std::uint64_t nodes = 0;
};

class Enumerator {
public:
    /// gram is n x n row-major. Throws NotPositiveDefinite if the Cholesky
    /// factorisation breaks down.
    Enumerator(const std::vector<mpz_class>& gram, int n, const mpz_class& bound);

    int dim() const { return n_; }

    // Serial reference implementations. Both throw BudgetExceeded once more
    // than node_limit nodes have been visited.
    FirstResult find_first_serial(const Accept& accept, std::uint64_t node_limit) const;
    CollectResult collect_serial(const Accept& accept, std::uint64_t node_limit) const;

    // OpenMP versions over lexicographically ordered subtree tasks. Results are
    // identical to the serial ones; node counts can differ slightly because the
    // task prefixes are expanded eagerly.
    FirstResult find_first_parallel(const Accept& accept, std::uint64_t node_limit) const;
    CollectResult collect_parallel(const Accept& accept, std::uint64_t node_limit) const;

    /// Dispatch on options; falls back to serial inside an active parallel region.
    FirstResult find_first(const Accept& accept, const Options& opt) const;
    CollectResult collect(const Accept& accept, const Options& opt) const;

private:
    struct Task;
    struct Walker;
    std::vector<Task> make_tasks(std::size_t target, std::uint64_t& nodes, std::uint64_t node_limit) const;

    int n_ = 0;
    std::vector<long double> q_; // internal (reversed) Fincke-Pohst coefficients
    long double bound_ = 0;
};

/// Exact x^T G x for small integer matrices, with 128-bit accumulation and a
/// GMP fallback on overflow.
class QuadEval {
public:
    QuadEval(const std::vector<mpz_class>& gram, int n);
    mpz_class operator()(std::span<const std::int64_t> x) const;
    /// x^T G x == value, short-circuiting the common small case.
    bool equals(std::span<const std::int64_t> x, const mpz_class& value) const;

private:
    int n_;
    std::vector<mpz_class> g_;
    std::vector<std::int64_t> small_;
    bool fits_ = true;
};

} // namespace kitaoka::enumerate

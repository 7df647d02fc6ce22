#pragma once

#include "kitaoka/enumerate.hpp"
#include "kitaoka/field.hpp"
#include "kitaoka/lattice.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace kitaoka {

struct Budgets {
    long trace_bound = 20;         // rule scans (indecomposables, small norms)
    long evidence_trace_bound = 0; // sums-of-squares and <1,1,2,2> scans; 0 = 2d
    std::uint64_t node_limit = enumerate::default_node_limit;
    int s_max = 6;
    bool evidence = true;

    long evidence_bound(const Field& f) const { return evidence_trace_bound > 0 ? evidence_trace_bound : 2 * f.degree(); }
    enumerate::Options options() const { return {node_limit, true}; }
};

enum class Verdict { NoUniversalTernary, Inconclusive, KnownPositive };
const char* verdict_name(Verdict v);

struct RuleResult {
    enum Status { Fired, NotFired, NotApplicable, Evidence, BudgetLimited };
    std::string id;       // R1..R8, E1, E2
    std::string citation; // the statement the rule is the contrapositive of
    Status status = NotApplicable;
    nlohmann::ordered_json certificate = nlohmann::ordered_json::object();

    bool fired() const { return status == Fired; }
};
const char* status_name(RuleResult::Status s);

struct ObstructionReport {
    std::string field_id;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<RuleResult> rules;
    Budgets budgets;
};

/// Runs every rule in order (cheap structural rules first) and combines them.
ObstructionReport obstruct(const Field& f, const Budgets& b = {});
nlohmann::ordered_json to_json(const ObstructionReport& r);

struct SquaresEntry {
    Elem alpha;
    std::optional<int> s;          // minimal number of squares for 2 alpha
    std::optional<Witness> witness;
    bool budget_exceeded = false;
};
struct SquaresReport {
    std::vector<SquaresEntry> entries;
    bool all_succeeded = true;
    long trace_bound = 0;
    int s_max = 0;
};
/// For each totally positive alpha with Tr(alpha) <= T, the least s <= s_max
/// with 2 alpha a sum of s squares. Failures are evidence only.
SquaresReport check_sum_of_squares_2OK(const Field& f, long trace_bound, int s_max, const enumerate::Options& opt = {});

struct ConditionResult {
    std::string name;
    enum Outcome { Pass, Fail, Evidence } outcome = Pass;
    nlohmann::ordered_json certificate = nlohmann::ordered_json::object();
};
/// The checkable necessary conditions a field with |U+/U^2| = 2 must satisfy
/// to carry a universal classical ternary lattice. Throws RequiresKOne.
std::vector<ConditionResult> necessary_conditions_profile(const Field& f, const Budgets& b = {});
const char* outcome_name(ConditionResult::Outcome o);

} // namespace kitaoka

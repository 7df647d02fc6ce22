#include "kitaoka/criteria.hpp"

#include "kitaoka/cone.hpp"
#include "kitaoka/element_io.hpp"
#include "kitaoka/scan.hpp"
#include "kitaoka/units.hpp"

namespace kitaoka {

using json = nlohmann::ordered_json;

const char* verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::NoUniversalTernary: return "NoUniversalTernary";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::KnownPositive: return "KnownPositive";
    }
    return "?";
}

const char* status_name(RuleResult::Status s)
{
    switch (s) {
    case RuleResult::Fired: return "fired";
    case RuleResult::NotFired: return "not_fired";
    case RuleResult::NotApplicable: return "not_applicable";
    case RuleResult::Evidence: return "evidence";
    case RuleResult::BudgetLimited: return "budget_limited";
    }
    return "?";
}

const char* outcome_name(ConditionResult::Outcome o)
{
    switch (o) {
    case ConditionResult::Pass: return "pass";
    case ConditionResult::Fail: return "fail";
    case ConditionResult::Evidence: return "evidence";
    }
    return "?";
}

namespace {

std::string fmt(const Elem& a) { return format_elem(a); }

bool is_golden_field(const Field& f) { return f.degree() == 2 && f.disc() == 5; }

// Indecomposable totally positive lambda with neither lambda nor eps*lambda a
// square. The first hit in canonical order is the certificate; every other hit
// of the same trace is listed alongside it.
struct SquareClassScan {
    std::optional<json> offender;
    std::size_t scanned = 0;
};

std::optional<std::string> offending_class(const Elem& lambda, const Elem& eps, const enumerate::Options& opt)
{
    if (is_square(lambda, opt) || is_square(eps * lambda, opt)) return std::nullopt;
    if (indecomposable_by_norm(lambda)) return "norm below 2^d";
    if (is_indecomposable(lambda, opt).indecomposable) return "exhaustive search";
    return std::nullopt;
}

SquareClassScan scan_indecomposable_classes(const Field& f, const Elem& eps, long bound, const enumerate::Options& opt)
{
    SquareClassScan out;
    json same_trace = json::array();
    std::optional<mpz_class> hit_trace;
    for (const auto& lambda : enumerate_tp_by_trace(f, bound, opt)) {
        mpz_class tr = trace(lambda);
        if (hit_trace && tr != *hit_trace) break;
        ++out.scanned;
        auto how = offending_class(lambda, eps, opt);
        if (!how) continue;
        if (hit_trace) {
            same_trace.push_back(fmt(lambda));
            continue;
        }
        hit_trace = tr;
        json c;
        c["lambda"] = fmt(lambda);
        c["norm"] = norm(lambda).get_str();
        c["trace"] = tr.get_str();
        c["indecomposable_by"] = *how;
        c["epsilon"] = fmt(eps);
        c["lambda_is_square"] = false;
        c["eps_lambda"] = fmt(eps * lambda);
        c["eps_lambda_is_square"] = false;
        out.offender = std::move(c);
    }
    if (out.offender) (*out.offender)["same_trace"] = std::move(same_trace);
    return out;
}

json small_norm_json(const SmallNormScan& s, bool offenders_only)
{
    json list = json::array();
    for (const auto& e : s.entries) {
        if (offenders_only && e.power_of_two) continue;
        json x;
        x["alpha"] = fmt(e.alpha);
        x["norm"] = e.norm.get_str();
        list.push_back(std::move(x));
    }
    json c;
    c["elements"] = std::move(list);
    c["trace_bound"] = s.trace_bound;
    if (s.required_bound) c["complete_mod_units_from_trace"] = s.required_bound;
    c["exhaustive_mod_units"] = s.exhaustive_mod_units;
    return c;
}

bool has_offender(const SmallNormScan& s)
{
    for (const auto& e : s.entries)
        if (!e.power_of_two) return true;
    return false;
}

json squares_summary(const SquaresReport& r)
{
    json c;
    c["trace_bound"] = r.trace_bound;
    c["s_max"] = r.s_max;
    c["targets"] = r.entries.size();
    c["all_succeeded"] = r.all_succeeded;
    json hist = json::object();
    json failures = json::array();
    for (const auto& e : r.entries) {
        if (e.s) {
            std::string key = std::to_string(*e.s);
            hist[key] = hist.value(key, 0) + 1;
        } else {
            failures.push_back(json{{"alpha", fmt(e.alpha)}, {"budget_exceeded", e.budget_exceeded}});
        }
    }
    c["squares_needed"] = std::move(hist);
    c["failures"] = std::move(failures);
    return c;
}

template <class Body>
RuleResult run_rule(std::string id, std::string citation, Body&& body)
{
    RuleResult r;
    r.id = std::move(id);
    r.citation = std::move(citation);
    try {
        body(r);
    } catch (const Error& e) {
        if (e.code() != Errc::BudgetExceeded) throw;
        r.status = RuleResult::BudgetLimited;
        r.certificate = json{{"budget_exceeded", e.what()}};
    }
    return r;
}

} // namespace

ObstructionReport obstruct(const Field& f, const Budgets& b)
{
    ObstructionReport rep;
    rep.field_id = f.id();
    rep.budgets = b;
    const auto opt = b.options();
    const int d = f.degree();

    std::optional<UnitGroup> units;
    std::optional<SquareClassData> sq;
    std::string units_note;
    try {
        units = unit_group(f);
        sq = tp_units_mod_squares(f, *units, opt);
    } catch (const Error& e) {
        if (e.code() != Errc::UnitsUnavailable) throw;
        units_note = e.what();
    }
    auto need_units = [&](RuleResult& r) {
        if (sq) return true;
        r.status = RuleResult::NotApplicable;
        r.certificate = json{{"reason", units_note}};
        return false;
    };
    auto need_k1 = [&](RuleResult& r) {
        if (!need_units(r)) return false;
        if (sq->k == 1) return true;
        r.status = RuleResult::NotApplicable;
        r.certificate = json{{"k", sq->k}};
        return false;
    };
    auto sqrt2 = contains_sqrt(f, 2, opt);

    rep.rules.push_back(run_rule("R1", "odd degree: no universal ternary for local reasons", [&](RuleResult& r) {
        r.status = d % 2 ? RuleResult::Fired : RuleResult::NotFired;
        r.certificate = json{{"degree", d}};
    }));

    rep.rules.push_back(run_rule("R2", "a universal classical ternary forces |U+/U^2| <= 2", [&](RuleResult& r) {
        if (!need_units(r)) return;
        r.status = sq->k >= 2 ? RuleResult::Fired : RuleResult::NotFired;
        r.certificate = json{{"k", sq->k}};
    }));

    rep.rules.push_back(
        run_rule("R3", "with 2 unramified, only Q(sqrt5) admits a universal classical ternary", [&](RuleResult& r) {
            bool unram = !two_is_ramified(f);
            r.status = unram && !is_golden_field(f) ? RuleResult::Fired : RuleResult::NotFired;
            r.certificate = json{{"disc", f.disc().get_str()}, {"two_unramified", unram}, {"is_qsqrt5", is_golden_field(f)}};
        }));

    rep.rules.push_back(run_rule("R4", "k = 1 forces sqrt2 not in K and 2*eps a square", [&](RuleResult& r) {
        if (!need_k1(r)) return;
        Elem two_eps = f.integer(2) * *sq->epsilon;
        auto root = sqrt_elem(two_eps, opt);
        json c;
        c["epsilon"] = fmt(*sq->epsilon);
        c["sqrt2"] = sqrt2 ? json(fmt(*sqrt2)) : json(nullptr);
        c["two_eps"] = fmt(two_eps);
        c["two_eps_sqrt"] = root ? json(fmt(*root)) : json(nullptr);
        r.status = (sqrt2 || !root) ? RuleResult::Fired : RuleResult::NotFired;
        r.certificate = std::move(c);
    }));

    rep.rules.push_back(
        run_rule("R5", "k = 1 forces lambda or eps*lambda to be a square for every indecomposable lambda",
                 [&](RuleResult& r) {
                     if (!need_k1(r)) return;
                     auto scan = scan_indecomposable_classes(f, *sq->epsilon, b.trace_bound, opt);
                     if (scan.offender) {
                         r.status = RuleResult::Fired;
                         r.certificate = *scan.offender;
                     } else {
                         r.status = RuleResult::NotFired;
                         r.certificate = json{{"trace_bound", b.trace_bound}, {"scanned", scan.scanned}};
                     }
                 }));

    rep.rules.push_back(run_rule("R6", "k = 1 forces every norm below 2^d to be a power of 2", [&](RuleResult& r) {
        if (!need_k1(r)) return;
        auto s = small_norm_scan(f, b.trace_bound, d == 2, opt);
        r.status = has_offender(s) ? RuleResult::Fired : RuleResult::NotFired;
        r.certificate = small_norm_json(s, true);
    }));

    rep.rules.push_back(
        run_rule("R7", "no totally real field containing sqrt6 or sqrt33 has a universal ternary", [&](RuleResult& r) {
            json c;
            auto s6 = contains_sqrt(f, 6, opt), s33 = contains_sqrt(f, 33, opt);
            c["sqrt6"] = s6 ? json(fmt(*s6)) : json(nullptr);
            c["sqrt33"] = s33 ? json(fmt(*s33)) : json(nullptr);
            r.status = s6 || s33 ? RuleResult::Fired : RuleResult::NotFired;
            r.certificate = std::move(c);
        }));

    rep.rules.push_back(run_rule(
        "R8", "a quartic field with a universal ternary has sqrt2 in K and all totally positive units squares",
        [&](RuleResult& r) {
            if (d != 4) {
                r.status = RuleResult::NotApplicable;
                r.certificate = json{{"degree", d}};
                return;
            }
            json c;
            c["sqrt2"] = sqrt2 ? json(fmt(*sqrt2)) : json(nullptr);
            if (!sqrt2) {
                r.status = RuleResult::Fired;
            } else {
                if (!need_units(r)) return;
                c["k"] = sq->k;
                if (sq->epsilon) c["epsilon"] = fmt(*sq->epsilon);
                r.status = sq->k >= 1 ? RuleResult::Fired : RuleResult::NotFired;
            }
            r.certificate = std::move(c);
        }));

    const long eb = b.evidence_bound(f);
    rep.rules.push_back(run_rule("E1", "2O+ lies in the sums of squares", [&](RuleResult& r) {
        if (!b.evidence) {
            r.certificate = json{{"skipped", "evidence scans disabled"}};
            return;
        }
        r.status = RuleResult::Evidence;
        r.certificate = squares_summary(check_sum_of_squares_2OK(f, eb, b.s_max, opt));
    }));

    rep.rules.push_back(run_rule("E2", "<1,1,2,2> represents 2O+", [&](RuleResult& r) {
        if (!b.evidence) {
            r.certificate = json{{"skipped", "evidence scans disabled"}};
            return;
        }
        r.status = RuleResult::Evidence;
        auto cov = check_1122_coverage(f, eb, opt);
        json c;
        c["trace_bound"] = eb;
        c["checked"] = cov.entries.size();
        c["all_covered"] = !cov.counterexample.has_value();
        c["counterexample"] = cov.counterexample ? json(fmt(*cov.counterexample)) : json(nullptr);
        r.certificate = std::move(c);
    }));

    bool any = false;
    for (const auto& r : rep.rules) any = any || r.fired();
    if (f.spec().known_positive.value_or(false)) {
        if (any) fail(Errc::Internal, "a rule fired on a field flagged as admitting a universal ternary");
        rep.verdict = Verdict::KnownPositive;
    } else {
        rep.verdict = any ? Verdict::NoUniversalTernary : Verdict::Inconclusive;
    }
    return rep;
}

json to_json(const ObstructionReport& r)
{
    json j;
    j["field_id"] = r.field_id;
    j["verdict"] = verdict_name(r.verdict);
    json fired = json::array();
    for (const auto& rule : r.rules)
        if (rule.fired()) fired.push_back(rule.id);
    j["fired"] = std::move(fired);
    json rules = json::array();
    for (const auto& rule : r.rules) {
        json x;
        x["id"] = rule.id;
        x["status"] = status_name(rule.status);
        x["citation"] = rule.citation;
        x["certificate"] = rule.certificate;
        rules.push_back(std::move(x));
    }
    j["rules"] = std::move(rules);
    j["budgets"] = json{{"trace_bound", r.budgets.trace_bound},
                        {"evidence_trace_bound", r.budgets.evidence_trace_bound},
                        {"node_limit", r.budgets.node_limit},
                        {"s_max", r.budgets.s_max}};
    return j;
}

SquaresReport check_sum_of_squares_2OK(const Field& f, long trace_bound, int s_max, const enumerate::Options& opt)
{
    SquaresReport rep;
    rep.trace_bound = trace_bound;
    rep.s_max = s_max;
    auto targets = enumerate_tp_by_trace(f, trace_bound, opt);
    rep.entries = ordered_scan<SquaresEntry>(
        targets.size(),
        [&](std::size_t i) {
            SquaresEntry e{targets[i], std::nullopt, std::nullopt, false};
            Elem two = f.integer(2) * targets[i];
            std::vector<Elem> ones;
            for (int s = 1; s <= s_max; ++s) {
                ones.push_back(f.one());
                try {
                    if (auto w = represents(diag(ones), two, opt)) {
                        e.s = s;
                        e.witness = std::move(w);
                        break;
                    }
                } catch (const Error& err) {
                    if (err.code() != Errc::BudgetExceeded) throw;
                    e.budget_exceeded = true;
                    break;
                }
            }
            return e;
        },
        [](const SquaresEntry&) { return false; });
    for (const auto& e : rep.entries) rep.all_succeeded = rep.all_succeeded && e.s.has_value();
    return rep;
}

std::vector<ConditionResult> necessary_conditions_profile(const Field& f, const Budgets& b)
{
    const auto opt = b.options();
    UnitGroup u = unit_group(f);
    SquareClassData sq = tp_units_mod_squares(f, u, opt);
    if (sq.k != 1) fail(Errc::RequiresKOne, "the profile applies to fields with |U+/U^2| = 2 (k = " +
                                                std::to_string(sq.k) + ")");
    const Elem& eps = *sq.epsilon;
    std::vector<ConditionResult> out;

    {
        ConditionResult c{"indecomposables_square_up_to_eps"};
        auto scan = scan_indecomposable_classes(f, eps, b.trace_bound, opt);
        if (scan.offender) {
            c.outcome = ConditionResult::Fail;
            c.certificate = *scan.offender;
        } else {
            c.certificate = json{{"trace_bound", b.trace_bound}, {"scanned", scan.scanned}};
        }
        out.push_back(std::move(c));
    }
    {
        ConditionResult c{"two_eps_is_square"};
        auto root = sqrt_elem(f.integer(2) * eps, opt);
        c.outcome = root ? ConditionResult::Pass : ConditionResult::Fail;
        c.certificate = json{{"epsilon", fmt(eps)}, {"sqrt", root ? json(fmt(*root)) : json(nullptr)}};
        out.push_back(std::move(c));
    }
    {
        ConditionResult c{"sqrt2_not_in_field"};
        auto s = contains_sqrt(f, 2, opt);
        c.outcome = s ? ConditionResult::Fail : ConditionResult::Pass;
        c.certificate = json{{"sqrt2", s ? json(fmt(*s)) : json(nullptr)}};
        out.push_back(std::move(c));
    }
    {
        ConditionResult c{"two_cone_in_sums_of_squares"};
        c.outcome = ConditionResult::Evidence;
        c.certificate = squares_summary(check_sum_of_squares_2OK(f, b.evidence_bound(f), b.s_max, opt));
        out.push_back(std::move(c));
    }
    {
        ConditionResult c{"small_norms_are_powers_of_two"};
        auto s = small_norm_scan(f, b.trace_bound, f.degree() == 2, opt);
        c.outcome = has_offender(s) ? ConditionResult::Fail : ConditionResult::Pass;
        c.certificate = small_norm_json(s, false);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace kitaoka

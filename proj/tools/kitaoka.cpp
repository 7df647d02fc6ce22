// kitaoka: command-line front end. Exit codes: 0 success, 1 error,
// 2 inconclusive, 3 counterexample / obstruction / not represented.
#include "kitaoka/catalog.hpp"
#include "kitaoka/cone.hpp"
#include "kitaoka/criteria.hpp"
#include "kitaoka/element_io.hpp"
#include "kitaoka/error.hpp"
#include "kitaoka/lattice.hpp"
#include "kitaoka/units.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>

using namespace kitaoka;
using json = nlohmann::ordered_json;

namespace {

enum Exit { Ok = 0, Failure = 1, Inconclusive = 2, Negative = 3 };

struct Settings {
    bool json_out = false;
    std::string catalog;
    long trace_bound = 20;
    std::uint64_t nodes = enumerate::default_node_limit;
    std::string id, form, target, lambda;
    int max_squares = 6;
    long evidence_bound = 0;
    bool no_evidence = false;
};

struct Outcome {
    json result = json::object();
    int code = Ok;
    std::vector<std::string> text; // human-readable lines
};

std::string fmt(const Elem& a) { return format_elem(a); }

json elems(const std::vector<Elem>& v)
{
    json a = json::array();
    for (const auto& e : v) a.push_back(fmt(e));
    return a;
}

std::string sign_string(const Elem& a)
{
    std::string s;
    for (int x : signature(a)) s += x > 0 ? '+' : '-';
    return s;
}

std::string join(const json& arr)
{
    std::string s;
    for (const auto& x : arr) s += (s.empty() ? "" : ", ") + (x.is_string() ? x.get<std::string>() : x.dump());
    return s;
}

enumerate::Options options(const Settings& s) { return {s.nodes, true}; }

Outcome cmd_field_list(const Catalog& cat)
{
    Outcome o;
    json ids = json::array();
    for (const auto& id : cat.ids()) {
        const auto& sp = cat.spec(id);
        ids.push_back(json{{"id", id}, {"degree", sp.degree}, {"disc", sp.disc.get_str()}});
        o.text.push_back(id + "  degree " + std::to_string(sp.degree) + "  disc " + sp.disc.get_str());
    }
    o.result["fields"] = std::move(ids);
    return o;
}

Outcome cmd_field_show(const Field& f, const Settings& s)
{
    Outcome o;
    json spec = field_spec_to_json(f.spec());
    o.result["poly"] = spec["poly"];
    o.result["integral_basis"] = spec["integral_basis"];
    o.result["degree"] = f.degree();
    o.result["disc"] = f.disc().get_str();
    o.result["two_ramified"] = two_is_ramified(f);
    json roots = json::object();
    for (long n : {2L, 3L, 5L, 6L}) {
        auto r = contains_sqrt(f, n, options(s));
        roots["sqrt" + std::to_string(n)] = r ? json(fmt(*r)) : json(nullptr);
    }
    o.result["square_roots"] = roots;
    if (f.spec().known_positive) o.result["known_positive"] = *f.spec().known_positive;
    o.text.push_back("degree " + std::to_string(f.degree()) + ", disc " + f.disc().get_str() + ", 2 " +
                     (two_is_ramified(f) ? "ramified" : "unramified"));
    for (const auto& [k, v] : roots.items()) o.text.push_back(k + ": " + (v.is_null() ? "not in K" : v.get<std::string>()));
    return o;
}

Outcome cmd_units(const Field& f, const Settings& s)
{
    Outcome o;
    auto u = unit_group(f);
    auto sg = signature_subgroup(f, u);
    auto sq = tp_units_mod_squares(f, u, options(s));
    json gens = json::array();
    for (const auto& g : u.generators) gens.push_back(json{{"unit", fmt(g)}, {"signature", sign_string(g)}});
    o.result["generators"] = gens;
    o.result["source"] = u.source == UnitGroup::Computed ? "computed" : "catalog";
    o.result["signature_group_order"] = sg.elements().size();
    o.result["k"] = sq.k;
    o.result["epsilon"] = sq.epsilon ? json(fmt(*sq.epsilon)) : json(nullptr);
    auto check = check_unit_group(f, u, 20, options(s));
    o.result["containment_check"] = json{{"house_bound", 20}, {"units_found", check.units_found},
                                         {"stray", check.stray ? json(fmt(*check.stray)) : json(nullptr)}};
    for (const auto& g : gens) o.text.push_back("generator " + g["unit"].get<std::string>() + "  signature " + g["signature"].get<std::string>());
    o.text.push_back("k = " + std::to_string(sq.k) + (sq.epsilon ? ", eps = " + fmt(*sq.epsilon) : ""));
    if (check.stray) o.code = Negative;
    return o;
}

Outcome cmd_indec(const Field& f, const Settings& s)
{
    Outcome o;
    json list = json::array();
    for (const auto& a : enumerate_tp_by_trace(f, s.trace_bound, options(s))) {
        bool by_norm = indecomposable_by_norm(a);
        if (!by_norm && !is_indecomposable(a, options(s)).indecomposable) continue;
        list.push_back(json{{"alpha", fmt(a)}, {"trace", trace(a).get_str()}, {"norm", norm(a).get_str()},
                            {"by", by_norm ? "norm" : "exhaustive"}});
        o.text.push_back(fmt(a) + "  trace " + trace(a).get_str() + "  norm " + norm(a).get_str());
    }
    o.result["trace_bound"] = s.trace_bound;
    o.result["indecomposables"] = std::move(list);
    return o;
}

Outcome cmd_represent(const Field& f, const Settings& s)
{
    Outcome o;
    auto q = parse_form(f, s.form);
    Elem a = parse_elem(f, s.target);
    auto w = represents(q, a, options(s));
    o.result["form"] = format_form(q);
    o.result["target"] = fmt(a);
    o.result["represented"] = w.has_value();
    o.result["witness"] = w ? elems(w->v) : json(nullptr);
    if (w)
        o.text.push_back("represented: (" + join(elems(w->v)) + ")");
    else {
        o.text.push_back("not represented (exhaustive)");
        o.code = Negative;
    }
    return o;
}

Outcome cmd_universal(const Field& f, const Settings& s)
{
    Outcome o;
    auto q = parse_form(f, s.form);
    auto r = is_universal_up_to(q, s.trace_bound, options(s));
    o.result["form"] = format_form(q);
    o.result["trace_bound"] = s.trace_bound;
    o.result["checked"] = r.checked;
    o.result["outcome"] = r.counterexample ? "Counterexample" : "AllRepresented";
    o.result["counterexample"] = r.counterexample ? json(fmt(*r.counterexample)) : json(nullptr);
    if (r.counterexample) {
        o.text.push_back("counterexample: " + fmt(*r.counterexample));
        o.code = Negative;
    } else {
        o.text.push_back("all " + std::to_string(r.checked) + " elements of trace <= " + std::to_string(s.trace_bound) +
                         " represented");
    }
    return o;
}

Outcome cmd_coverage(const Field& f, const Settings& s)
{
    Outcome o;
    CoverageResult r = s.lambda.empty() ? check_1122_coverage(f, s.trace_bound, options(s))
                                        : check_lambda_coverage(parse_elem(f, s.lambda), s.trace_bound, options(s));
    o.result["form"] = s.lambda.empty() ? "<1,1,2,2>" : "<1,1," + s.lambda + "," + s.lambda + ">";
    o.result["trace_bound"] = s.trace_bound;
    o.result["checked"] = r.entries.size();
    o.result["outcome"] = r.counterexample ? "Counterexample" : "AllCovered";
    o.result["counterexample"] = r.counterexample ? json(fmt(*r.counterexample)) : json(nullptr);
    if (r.counterexample) {
        o.text.push_back("counterexample: " + fmt(*r.counterexample));
        o.code = Negative;
    } else {
        o.text.push_back("all " + std::to_string(r.entries.size()) + " targets covered");
    }
    return o;
}

Outcome cmd_squares(const Field& f, const Settings& s)
{
    Outcome o;
    auto r = check_sum_of_squares_2OK(f, s.trace_bound, s.max_squares, options(s));
    json list = json::array();
    for (const auto& e : r.entries) {
        json x{{"alpha", fmt(e.alpha)}, {"squares", e.s ? json(*e.s) : json(nullptr)}};
        x["witness"] = e.witness ? elems(e.witness->v) : json(nullptr);
        if (e.budget_exceeded) x["budget_exceeded"] = true;
        list.push_back(std::move(x));
        o.text.push_back("2*(" + fmt(e.alpha) + "): " + (e.s ? std::to_string(*e.s) + " squares" : "not found"));
    }
    o.result["trace_bound"] = s.trace_bound;
    o.result["max_squares"] = s.max_squares;
    o.result["all_succeeded"] = r.all_succeeded;
    o.result["entries"] = std::move(list);
    if (!r.all_succeeded) o.code = Inconclusive;
    return o;
}

Outcome cmd_descent(const Field& f, const Settings& s)
{
    Outcome o;
    auto u = unit_group(f);
    auto sq = tp_units_mod_squares(f, u, options(s));
    try {
        auto tr = descent_run(f, sq, u, 16, options(s));
        json steps = json::array();
        for (const auto& st : tr.steps) {
            steps.push_back(json{{"alpha", fmt(st.alpha)}, {"T", fmt(st.t)}, {"used_epsilon", st.used_epsilon},
                                 {"class", mclass_name(st.cls)}, {"eta", st.eta ? json(fmt(*st.eta)) : json(nullptr)}});
            o.text.push_back("T(" + fmt(st.alpha) + ") = " + fmt(st.t) + "  " + mclass_name(st.cls));
        }
        o.result["epsilon"] = fmt(*sq.epsilon);
        o.result["steps"] = std::move(steps);
        o.result["beta"] = fmt(tr.beta);
        o.result["j"] = tr.j;
        o.text.push_back("|N(beta)| = 2^" + std::to_string(tr.j));
    } catch (const Error& e) {
        if (e.code() != Errc::HypothesisFailed) throw;
        o.result["hypothesis_failed"] = e.what();
        o.text.push_back(std::string("hypothesis failed: ") + e.what());
        o.code = Negative;
    }
    return o;
}

Outcome cmd_obstruct(const Field& f, const Settings& s)
{
    Outcome o;
    Budgets b;
    b.trace_bound = s.trace_bound;
    b.node_limit = s.nodes;
    b.s_max = s.max_squares;
    b.evidence_trace_bound = s.evidence_bound;
    b.evidence = !s.no_evidence;
    auto r = obstruct(f, b);
    o.result = to_json(r);
    o.result.erase("field_id");
    o.text.push_back(std::string("verdict: ") + verdict_name(r.verdict));
    for (const auto& rule : r.rules)
        o.text.push_back("  " + rule.id + " " + status_name(rule.status) + "  " + rule.certificate.dump());
    o.code = r.verdict == Verdict::NoUniversalTernary ? Negative : r.verdict == Verdict::Inconclusive ? Inconclusive : Ok;
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    Settings s;
    CLI::App app{"Obstructions to universal classical ternary quadratic forms over totally real fields"};
    app.require_subcommand(1);
    app.add_flag("--json", s.json_out, "emit a JSON report");
    app.add_option("--catalog", s.catalog, "extra field catalog (JSON); defaults to $KITAOKA_CATALOG");
    app.add_option("--trace-bound", s.trace_bound, "trace bound for scans")->check(CLI::NonNegativeNumber);
    app.add_option("--budget-nodes", s.nodes, "enumeration node limit")->check(CLI::PositiveNumber);

    auto* field = app.add_subcommand("field", "catalog fields");
    field->require_subcommand(1);
    auto* field_list = field->add_subcommand("list", "list catalog ids");
    auto* field_show = field->add_subcommand("show", "field invariants");
    field_show->add_option("id", s.id)->required();

    auto with_id = [&](const char* name, const char* help) {
        auto* c = app.add_subcommand(name, help);
        c->add_option("id", s.id, "field id")->required();
        c->fallthrough();
        return c;
    };
    auto* units = with_id("units", "unit generators, signatures, k and eps");
    auto* indec = with_id("indec", "indecomposables up to the trace bound");
    auto* represent = with_id("represent", "represent a target by a form");
    represent->add_option("--form", s.form)->required();
    represent->add_option("--target", s.target)->required();
    auto* universal = with_id("universal", "check a form on every element up to the trace bound");
    universal->add_option("--form", s.form)->required();
    auto* coverage = with_id("coverage", "<1,1,2,2> (or <1,1,lambda,lambda>) coverage");
    coverage->add_option("--lambda", s.lambda, "indecomposable nonsquare lambda");
    auto* squares = with_id("squares", "2 alpha as sums of squares");
    squares->add_option("--max-squares", s.max_squares)->check(CLI::Range(1, 16));
    auto* descent = with_id("descent", "iterate the square-root descent from 2");
    auto* obstruct_cmd = with_id("obstruct", "run every obstruction rule");
    obstruct_cmd->add_option("--max-squares", s.max_squares)->check(CLI::Range(1, 16));
    obstruct_cmd->add_option("--evidence-bound", s.evidence_bound, "trace bound for evidence scans (default 2d)");
    obstruct_cmd->add_flag("--no-evidence", s.no_evidence, "skip the evidence scans");
    for (auto* c : {field, field_list, field_show}) c->fallthrough();

    CLI11_PARSE(app, argc, argv);

    json report;
    report["schema_version"] = "1";
    json command = json::array();
    for (int i = 1; i < argc; ++i) command.push_back(argv[i]);
    report["command"] = command;

    const auto t0 = std::chrono::steady_clock::now();
    int code = Ok;
    try {
        Catalog cat = load_catalog(s.catalog);
        Outcome o;
        if (field_list->parsed()) {
            o = cmd_field_list(cat);
        } else {
            auto f = cat.field(s.id);
            report["field_id"] = s.id;
            if (field_show->parsed()) o = cmd_field_show(*f, s);
            else if (units->parsed()) o = cmd_units(*f, s);
            else if (indec->parsed()) o = cmd_indec(*f, s);
            else if (represent->parsed()) o = cmd_represent(*f, s);
            else if (universal->parsed()) o = cmd_universal(*f, s);
            else if (coverage->parsed()) o = cmd_coverage(*f, s);
            else if (squares->parsed()) o = cmd_squares(*f, s);
            else if (descent->parsed()) o = cmd_descent(*f, s);
            else if (obstruct_cmd->parsed()) o = cmd_obstruct(*f, s);
        }
        report["result"] = std::move(o.result);
        code = o.code;
        if (!s.json_out)
            for (const auto& line : o.text) std::cout << line << '\n';
    } catch (const Error& e) {
        code = Failure;
        report["error"] = json{{"code", std::string(errc_name(e.code()))}, {"message", e.what()}};
        std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << '\n';
    }
    report["budgets"] = json{{"trace_bound", s.trace_bound}, {"node_limit", s.nodes}};
    report["exit_code"] = code;
    report["timing"] = json{
        {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    if (s.json_out) std::cout << report.dump(2) << '\n';
    return code;
}

#include "decsynth/decsynth.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>

#include <json.hpp>

#include "decsynth/depgraph.hpp"
#include "decsynth/model_io.hpp"
#include "decsynth/oracle.hpp"
#include "decsynth/synthesis.hpp"

using namespace decsynth;

struct dcs_problem {
    ControlProblem cp;
    std::vector<Diagnostic> diagnostics;
    std::string origin;
};

struct dcs_plan {
    ReductionPlan plan;
    std::string model;
};

struct dcs_synthesis {
    ReductionPlan plan;
    std::vector<SynthesisResult> results;
    bool fallback = false;
    ReportOptions report;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s)
{
    auto* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

dcs_status fail(dcs_status status, std::string message)
{
    last_error = std::move(message);
    return status;
}

dcs_status status_of(ErrorCode code)
{
    switch (code) {
    case ErrorCode::EmptySupervisor: return DCS_ERR_EMPTY_SUPERVISOR;
    case ErrorCode::NotApplicable: return DCS_ERR_NOT_APPLICABLE;
    case ErrorCode::SizeBoundExceeded: return DCS_ERR_SIZE_BOUND;
    default: return DCS_ERR_INVALID_ARGUMENT;
    }
}

// Runs f, translating exceptions into status codes.
template <class F>
dcs_status guarded(F&& f)
{
    try {
        last_error.clear();
        return f();
    } catch (const Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(DCS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DCS_ERR_INTERNAL, e.what());
    }
}

std::string diagnostics_text(const std::vector<Diagnostic>& diags, std::string_view origin)
{
    std::string out;
    for (const auto& d : diags)
        out += format_diagnostic(d, origin) + "\n";
    return out;
}

ReportFormat format_of(dcs_format f)
{
    return f == DCS_FORMAT_JSON ? ReportFormat::Json : ReportFormat::Text;
}

SynthesisOptions synthesis_options(const dcs_options* o)
{
    SynthesisOptions s;
    if (o) {
        if (o->bound)
            s.bound = o->bound;
        s.parallel = o->parallel != 0;
    }
    return s;
}

ReportOptions report_options(const dcs_options* o, const dcs_problem* p)
{
    ReportOptions r;
    r.diagnostics = p->diagnostics;
    r.model = p->origin;
    if (o) {
        r.deterministic = o->deterministic != 0;
        if (o->model)
            r.model = o->model;
    }
    return r;
}

dcs_status parse_into(const char* origin, dcs_problem** out, char** diagnostics, ParseResult result)
{
    std::string name = origin ? origin : "<input>";
    if (diagnostics)
        *diagnostics = dup(diagnostics_text(result.diagnostics, name));
    if (!result.ok()) {
        std::string msg = diagnostics_text(result.diagnostics, name);
        if (!msg.empty() && msg.back() == '\n')
            msg.pop_back();
        return fail(result.diagnostics.size() == 1 && result.diagnostics[0].code == "E-IO"
                        ? DCS_ERR_IO
                        : DCS_ERR_PARSE,
                    msg);
    }
    *out = new dcs_problem{std::move(*result.problem), std::move(result.diagnostics), name};
    return DCS_OK;
}

void check_text(std::ostream& out, const char* label, const PropertyReport& r)
{
    out << label << ": " << (r.satisfied() ? "satisfied" : "violated") << '\n';
    for (const auto& v : r.violations)
        out << "  " << to_string(v.property) << ' ' << v.subject << ": " << v.message << '\n';
}

std::string path_text(const Witness& w)
{
    std::string s = w.states.empty() ? "" : w.states.front();
    for (std::size_t i = 0; i < w.events.size(); ++i)
        s += " -" + w.events[i] + "-> " + w.states[i + 1];
    return s;
}

} // namespace

extern "C" {

const char* dcs_version(void)
{
    return "0.1.0";
}

const char* dcs_status_string(dcs_status status)
{
    switch (status) {
    case DCS_OK: return "ok";
    case DCS_ERR_PARSE: return "parse error";
    case DCS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DCS_ERR_NOT_APPLICABLE: return "reduction not applicable";
    case DCS_ERR_EMPTY_SUPERVISOR: return "empty supervisor";
    case DCS_ERR_SIZE_BOUND: return "size bound exceeded";
    case DCS_ERR_IO: return "i/o error";
    case DCS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* dcs_last_error(void)
{
    return last_error.c_str();
}

void dcs_string_free(char* s)
{
    std::free(s);
}

dcs_options dcs_default_options(void)
{
    return dcs_options{kDefaultSynthesisBound, 0, 1, nullptr};
}

dcs_status dcs_problem_parse(const char* text, size_t length, const char* origin,
                             dcs_problem** out, char** diagnostics)
{
    if (!out || (!text && length))
        return fail(DCS_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        std::string_view src(text ? text : "", length);
        return parse_into(origin, out, diagnostics, parse_model(src));
    });
}

dcs_status dcs_problem_load(const char* path, dcs_problem** out, char** diagnostics)
{
    if (!out || !path)
        return fail(DCS_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { return parse_into(path, out, diagnostics, parse_model_file(path)); });
}

void dcs_problem_free(dcs_problem* problem)
{
    delete problem;
}

dcs_status dcs_problem_print(const dcs_problem* problem, char** text)
{
    if (!problem || !text)
        return fail(DCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *text = dup(pretty_print(problem->cp));
        return DCS_OK;
    });
}

size_t dcs_problem_plant_count(const dcs_problem* problem)
{
    return problem ? problem->cp.plant_count() : 0;
}

size_t dcs_problem_requirement_count(const dcs_problem* problem)
{
    return problem ? problem->cp.requirements().size() : 0;
}

dcs_status dcs_check(const dcs_problem* problem, dcs_format format, int* cnms_ok, int* rcnms_ok,
                     char** report)
{
    if (!problem)
        return fail(DCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto& cp = problem->cp;
        auto cnms = check_cnms(cp);
        auto rcnms = check_rcnms(cp);
        if (cnms_ok)
            *cnms_ok = cnms.satisfied();
        if (rcnms_ok)
            *rcnms_ok = rcnms.satisfied();
        if (!report)
            return DCS_OK;

        if (format == DCS_FORMAT_JSON) {
            using json = nlohmann::ordered_json;
            auto props = [](const PropertyReport& r) {
                json v = json::array();
                for (const auto& x : r.violations)
                    v.push_back({{"property", to_string(x.property)},
                                 {"subject", x.subject},
                                 {"message", x.message}});
                return json{{"satisfied", r.satisfied()}, {"violations", v}, {"notes", r.notes}};
            };
            json plants = json::array();
            for (const auto& p : cp.plants())
                plants.push_back({{"name", p.name()}, {"kind", to_string(classify_plant(p))}});
            json j{{"model", problem->origin},
                   {"product_system", is_product_system(cp)},
                   {"plants", plants},
                   {"cnms", props(cnms)},
                   {"rcnms", props(rcnms)}};
            *report = dup(j.dump(2) + "\n");
        } else {
            std::ostringstream out;
            out << "model: " << problem->origin << '\n';
            out << "plants:";
            for (const auto& p : cp.plants())
                out << ' ' << p.name() << '(' << to_string(classify_plant(p)) << ')';
            out << '\n';
            check_text(out, "CNMS", cnms);
            check_text(out, "RCNMS", rcnms);
            for (const auto& n : cnms.notes)
                out << "note: " << n << '\n';
            *report = dup(out.str());
        }
        return DCS_OK;
    });
}

dcs_status dcs_graph_dot(const dcs_problem* problem, int with_analysis, char** dot)
{
    if (!problem || !dot)
        return fail(DCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto g = build_graph(problem->cp);
        if (with_analysis) {
            auto a = analyze(g);
            *dot = dup(emit_dot(g, &a));
        } else {
            *dot = dup(emit_dot(g));
        }
        return DCS_OK;
    });
}

dcs_status dcs_plan_create(const dcs_problem* problem, dcs_plan** out)
{
    if (!problem || !out)
        return fail(DCS_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new dcs_plan{plan_reduction(problem->cp), problem->origin};
        return DCS_OK;
    });
}

void dcs_plan_free(dcs_plan* plan)
{
    delete plan;
}

const char* dcs_plan_verdict(const dcs_plan* plan)
{
    return plan ? to_string(plan->plan.verdict) : "";
}

size_t dcs_plan_class_count(const dcs_plan* plan)
{
    return plan ? plan->plan.partial_problems.size() : 0;
}

dcs_status dcs_plan_report(const dcs_plan* plan, dcs_format format, const dcs_options* options,
                           char** report)
{
    if (!plan || !report)
        return fail(DCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        ReportOptions r;
        r.model = options && options->model ? options->model : plan->model;
        r.deterministic = options && options->deterministic;
        *report = dup(emit_report(plan->plan, {}, format_of(format), r));
        return DCS_OK;
    });
}

dcs_status dcs_synthesize(const dcs_problem* problem, const dcs_options* options,
                          int allow_fallback, dcs_synthesis** out)
{
    if (!problem || !out)
        return fail(DCS_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        const auto& cp = problem->cp;
        auto s = std::make_unique<dcs_synthesis>();
        s->report = report_options(options, problem);
        auto sopt = synthesis_options(options);
        try {
            s->plan = plan_reduction(cp);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotApplicable || !allow_fallback)
                throw;
            s->fallback = true;
            s->report.fallback = true;
            s->report.warnings.push_back(std::string(e.what()) +
                                         "; falling back to monolithic synthesis");
            s->plan.plant_count = cp.plant_count();
            s->plan.requirement_count = cp.requirements().size();
            s->plan.cnms = check_cnms(cp);
            s->plan.rcnms = check_rcnms(cp);
        }
        if (s->fallback) {
            auto r = sup_cn(cp, sopt);
            r.label = "S";
            s->results.push_back(std::move(r));
        } else {
            s->results = execute_plan(cp, s->plan, sopt);
        }
        *out = s.release();
        return DCS_OK;
    });
}

void dcs_synthesis_free(dcs_synthesis* synthesis)
{
    delete synthesis;
}

int dcs_synthesis_fallback(const dcs_synthesis* synthesis)
{
    return synthesis && synthesis->fallback;
}

size_t dcs_synthesis_supervisor_count(const dcs_synthesis* synthesis)
{
    return synthesis ? synthesis->results.size() : 0;
}

dcs_status dcs_synthesis_supervisor(const dcs_synthesis* synthesis, size_t index, char** label,
                                    char** text)
{
    if (!synthesis || index >= synthesis->results.size())
        return fail(DCS_ERR_INVALID_ARGUMENT, "no such supervisor");
    return guarded([&] {
        const auto& r = synthesis->results[index];
        const auto& s = r.supervisor;
        AutomatonBuilder b(r.label);
        for (const auto& e : s.alphabet())
            b.add_event(e);
        for (StateIndex q = 0; q < s.state_count(); ++q)
            b.add_state(s.state_name(q), s.is_marked(q));
        for (StateIndex q = 0; q < s.state_count(); ++q)
            for (const auto& e : s.out(q))
                b.add_transition(q, e.event, e.target);
        b.set_initial(s.initial());
        auto renamed = std::move(b).build();
        if (label)
            *label = dup(r.label);
        if (text)
            *text = dup(print_plant(renamed));
        return DCS_OK;
    });
}

dcs_status dcs_synthesis_report(const dcs_synthesis* synthesis, dcs_format format, char** report)
{
    if (!synthesis || !report)
        return fail(DCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *report = dup(emit_report(synthesis->plan, synthesis->results, format_of(format),
                                  synthesis->report));
        return DCS_OK;
    });
}

dcs_status dcs_verify(const dcs_problem* problem, const char* const* supervisor_texts,
                      size_t count, const dcs_options* options, dcs_format format, int* all_ok,
                      char** report)
{
    if (!problem || (count && !supervisor_texts))
        return fail(DCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::vector<Automaton> sups;
        for (size_t i = 0; i < count; ++i) {
            if (!supervisor_texts[i])
                return fail(DCS_ERR_INVALID_ARGUMENT, "null supervisor text");
            auto parsed = parse_model(supervisor_texts[i]);
            std::string origin = "supervisor " + std::to_string(i + 1);
            if (!parsed.ok()) {
                auto msg = diagnostics_text(parsed.diagnostics, origin);
                if (!msg.empty() && msg.back() == '\n')
                    msg.pop_back();
                return fail(DCS_ERR_PARSE, msg);
            }
            for (const auto& p : parsed.problem->plants())
                sups.push_back(p);
        }

        VerifyOptions vopt;
        if (options && options->bound)
            vopt.bound = options->bound;
        auto verdict = verify_closed_loop(problem->cp, sups, vopt);
        bool nonconflicting = is_nonconflicting(sups, vopt.bound);
        bool ok = verdict.ok() && nonconflicting;
        if (all_ok)
            *all_ok = ok;
        if (!report)
            return DCS_OK;

        std::string model = options && options->model ? options->model : problem->origin;
        if (format == DCS_FORMAT_JSON) {
            using json = nlohmann::ordered_json;
            json w = json::array();
            for (const auto& x : verdict.witnesses)
                w.push_back({{"property", x.property},
                             {"events", x.events},
                             {"states", x.states},
                             {"blocked_event", x.blocked_event},
                             {"plant_state", x.plant_state}});
            json j{{"model", model},
                   {"supervisors", sups.size()},
                   {"safe", verdict.safe},
                   {"controllable", verdict.controllable},
                   {"nonblocking", verdict.nonblocking},
                   {"nonconflicting", nonconflicting},
                   {"ok", ok},
                   {"witnesses", w}};
            *report = dup(j.dump(2) + "\n");
        } else {
            std::ostringstream out;
            auto yn = [](bool b) { return b ? "yes" : "no"; };
            out << "model: " << model << '\n';
            out << "supervisors: " << sups.size() << '\n';
            out << "safe: " << yn(verdict.safe) << '\n';
            out << "controllable: " << yn(verdict.controllable) << '\n';
            out << "nonblocking: " << yn(verdict.nonblocking) << '\n';
            out << "nonconflicting: " << yn(nonconflicting) << '\n';
            for (const auto& x : verdict.witnesses) {
                out << x.property << " witness: " << path_text(x);
                if (!x.blocked_event.empty())
                    out << " (blocks uncontrollable " << x.blocked_event << ")";
                out << '\n';
                out << "  plant state:";
                for (const auto& [p, q] : x.plant_state)
                    out << ' ' << p << '.' << q;
                out << '\n';
            }
            out << "result: " << (ok ? "pass" : "fail") << '\n';
            *report = dup(out.str());
        }
        return DCS_OK;
    });
}

dcs_status dcs_generate(const char* kind, uint64_t seed, size_t plants, size_t requirements,
                        char** text)
{
    if (!kind || !text)
        return fail(DCS_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::string k = kind;
        std::optional<ControlProblem> cp;
        if (k == "cnms")
            cp = generate_cnms_instance(seed, plants, requirements);
        else if (k == "acyclic")
            cp = generate_acyclic_rcnms_instance(seed, plants, requirements);
        else if (k == "cyclic")
            cp = generate_cyclic_rcnms_instance(seed, plants, requirements);
        else if (k == "small")
            cp = generate_small_instance(seed);
        else
            return fail(DCS_ERR_INVALID_ARGUMENT, "unknown generator kind '" + k + "'");
        *text = dup(pretty_print(*cp));
        return DCS_OK;
    });
}

} // extern "C"

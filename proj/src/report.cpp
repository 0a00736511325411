#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "decsynth/model_io.hpp"

namespace decsynth {

namespace {

using json = nlohmann::ordered_json;

struct Stats {
    std::size_t plants_synth = 0;
    std::size_t reqs_synth = 0;
    double plant_reduction = 0;
    double req_reduction = 0;
};

Stats stats(const ReductionPlan& plan, bool fallback)
{
    Stats s;
    if (fallback) {
        s.plants_synth = plan.plant_count;
        s.reqs_synth = plan.requirement_count;
    } else {
        for (const auto& p : plan.partial_problems) {
            s.plants_synth += p.plant_count();
            s.reqs_synth += p.requirements().size();
        }
    }
    auto pct = [](std::size_t part, std::size_t whole) {
        return whole == 0 ? 100.0 : 100.0 * static_cast<double>(whole - part) / static_cast<double>(whole);
    };
    s.plant_reduction = pct(s.plants_synth, plan.plant_count);
    s.req_reduction = pct(s.reqs_synth, plan.requirement_count);
    return s;
}

std::string verdict_name(const ReductionPlan& plan, bool fallback)
{
    return fallback ? "NotApplicable" : to_string(plan.verdict);
}

std::vector<std::string> class_plants(const ReductionPlan& plan, std::size_t i)
{
    if (i < plan.partial_problems.size())
        return plan.partial_problems[i].plant_names();
    return {};
}

json report_json(const PropertyReport& r)
{
    json v = json::array();
    for (const auto& x : r.violations)
        v.push_back({{"property", to_string(x.property)}, {"subject", x.subject}, {"message", x.message}});
    return {{"satisfied", r.satisfied()}, {"violations", v}, {"notes", r.notes}};
}

std::string fixed(double v, int digits)
{
    std::ostringstream o;
    o << std::fixed << std::setprecision(digits) << v;
    return o.str();
}

std::string emit_json(const ReductionPlan& plan, std::span<const SynthesisResult> results,
                      const ReportOptions& opt)
{
    auto st = stats(plan, opt.fallback);
    json j;
    j["model"] = opt.model;
    j["verdict"] = verdict_name(plan, opt.fallback);
    j["plants"] = plan.plant_count;
    j["requirements"] = plan.requirement_count;
    j["cnms"] = report_json(plan.cnms);
    j["rcnms"] = report_json(plan.rcnms);

    json classes = json::array();
    for (std::size_t i = 0; i < plan.partial_problems.size(); ++i) {
        json reqs = json::array();
        for (const auto& r : plan.partial_problems[i].requirements())
            reqs.push_back(r.id);
        classes.push_back({{"plants", class_plants(plan, i)}, {"requirements", reqs}});
    }
    j["classes"] = classes;
    json residual = json::array();
    for (auto v : plan.residual)
        residual.push_back(plan.graph ? plan.graph->vertices[v] : std::to_string(v));
    j["residual"] = residual;
    j["reduction"] = {{"plants_percent", st.plant_reduction},
                      {"requirements_percent", st.req_reduction}};

    json sups = json::array();
    for (const auto& r : results) {
        json removed = json::array();
        for (const auto& t : r.removed_transitions)
            removed.push_back({{"state", t.state}, {"event", t.event}});
        sups.push_back({{"label", r.label},
                        {"uncontrolled_size", r.uncontrolled_size},
                        {"closed_loop_size", r.closed_loop_size},
                        {"controlled_size", r.controlled_size},
                        {"removed_transitions", removed},
                        {"iterations", r.iterations},
                        {"pruned", r.pruned()},
                        {"duration_ms", opt.deterministic ? 0.0 : r.duration_ms}});
    }
    j["supervisors"] = sups;
    j["notes"] = plan.notes;
    j["warnings"] = opt.warnings;
    json diags = json::array();
    for (const auto& d : opt.diagnostics)
        diags.push_back({{"severity", to_string(d.severity)},
                         {"code", d.code},
                         {"line", d.span.line},
                         {"column", d.span.column},
                         {"message", d.message}});
    j["diagnostics"] = diags;
    return j.dump(2) + "\n";
}

std::string emit_text(const ReductionPlan& plan, std::span<const SynthesisResult> results,
                      const ReportOptions& opt)
{
    auto st = stats(plan, opt.fallback);
    std::ostringstream out;
    out << "model: " << opt.model << '\n';
    out << "verdict: " << verdict_name(plan, opt.fallback);
    if (opt.fallback)
        out << " (monolithic synthesis)";
    out << '\n';
    out << "CNMS: " << (plan.cnms.satisfied() ? "satisfied" : "violated") << '\n';
    out << "RCNMS: " << (plan.rcnms.satisfied() ? "satisfied" : "violated") << '\n';
    out << "plants: " << plan.plant_count << ", requirements: " << plan.requirement_count << '\n';

    if (plan.verdict == Verdict::Sectionalize && !opt.fallback) {
        out << "partial problems: " << plan.partial_problems.size() << '\n';
        for (std::size_t i = 0; i < plan.partial_problems.size(); ++i) {
            out << "  W" << (i + 1) << ":";
            for (const auto& n : class_plants(plan, i))
                out << ' ' << n;
            out << '\n';
        }
        out << "residual:";
        if (plan.residual.empty())
            out << " none";
        for (auto v : plan.residual)
            out << ' ' << (plan.graph ? plan.graph->vertices[v] : std::to_string(v));
        out << '\n';
    }
    out << "plant reduction: " << fixed(st.plant_reduction, 1) << "% ("
        << plan.plant_count - st.plants_synth << " of " << plan.plant_count
        << " plants need no synthesis)\n";
    out << "requirement reduction: " << fixed(st.req_reduction, 1) << "% ("
        << plan.requirement_count - st.reqs_synth << " of " << plan.requirement_count
        << " requirements need no synthesis)\n";

    for (const auto& n : plan.notes)
        out << "note: " << n << '\n';
    for (const auto& w : opt.warnings)
        out << "warning: " << w << '\n';

    out << '\n';
    std::size_t width = 5;
    for (const auto& r : results)
        width = std::max(width, r.label.size());
    out << std::left << std::setw(static_cast<int>(width) + 2) << "model" << std::setw(14)
        << "uncontrolled" << std::setw(12) << "controlled" << "duration [ms]\n";
    if (results.empty())
        out << "no synthesis necessary\n";
    for (const auto& r : results)
        out << std::left << std::setw(static_cast<int>(width) + 2) << r.label << std::setw(14)
            << r.uncontrolled_size << std::setw(12) << r.controlled_size
            << fixed(opt.deterministic ? 0.0 : r.duration_ms, 3) << '\n';

    for (const auto& r : results) {
        if (!r.pruned()) {
            out << r.label << ": no pruning required\n";
            continue;
        }
        out << r.label << ": " << r.removed_transitions.size() << " transition(s) disabled";
        for (const auto& t : r.removed_transitions)
            out << ' ' << t.event << '@' << t.state;
        out << '\n';
    }
    return out.str();
}

} // namespace

std::string emit_report(const ReductionPlan& plan, std::span<const SynthesisResult> results,
                        ReportFormat format, const ReportOptions& options)
{
    return format == ReportFormat::Json ? emit_json(plan, results, options)
                                        : emit_text(plan, results, options);
}

} // namespace decsynth

// decsynth command-line front end. Links only the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "decsynth/decsynth.h"

namespace {

enum Exit {
    kOk = 0,
    kInputError = 1,
    kPropertyFailed = 2,
    kNotApplicable = 3,
    kEmptySupervisor = 4,
    kSizeBound = 5,
};

struct Config {
    std::string format = "text";
    std::size_t bound = 0;
    bool deterministic = false;
    bool verbose = false;
};

// Owned C string from the library.
struct CString {
    char* p = nullptr;
    ~CString() { dcs_string_free(p); }
    char** out() { return &p; }
    std::string str() const { return p ? p : ""; }
};

using Problem = std::unique_ptr<dcs_problem, decltype(&dcs_problem_free)>;

int exit_for(dcs_status s)
{
    switch (s) {
    case DCS_OK: return kOk;
    case DCS_ERR_NOT_APPLICABLE: return kNotApplicable;
    case DCS_ERR_EMPTY_SUPERVISOR: return kEmptySupervisor;
    case DCS_ERR_SIZE_BOUND: return kSizeBound;
    default: return kInputError;
    }
}

int report_error(dcs_status s)
{
    std::cerr << "error: " << dcs_status_string(s);
    std::string detail = dcs_last_error();
    if (!detail.empty())
        std::cerr << ": " << detail;
    std::cerr << '\n';
    return exit_for(s);
}

dcs_format format_of(const Config& c)
{
    return c.format == "json" ? DCS_FORMAT_JSON : DCS_FORMAT_TEXT;
}

dcs_options options_of(const Config& c, const std::string& model)
{
    auto o = dcs_default_options();
    o.bound = c.bound;
    o.deterministic = c.deterministic;
    o.model = model.c_str();
    return o;
}

std::string model_name(const std::string& path)
{
    return std::filesystem::path(path).stem().string();
}

// Loads a model, echoing warnings (and info with --verbose) to stderr.
Problem load(const std::string& path, const Config& cfg, int& exit_code)
{
    dcs_problem* p = nullptr;
    CString diags;
    auto s = dcs_problem_load(path.c_str(), &p, diags.out());
    if (s != DCS_OK) {
        std::cerr << dcs_last_error() << '\n';
        exit_code = kInputError;
        return Problem(nullptr, dcs_problem_free);
    }
    std::istringstream lines(diags.str());
    for (std::string line; std::getline(lines, line);)
        if (cfg.verbose || line.find(": info[") == std::string::npos)
            std::cerr << line << '\n';
    exit_code = kOk;
    return Problem(p, dcs_problem_free);
}

bool write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        std::cerr << "error: cannot write '" << path.string() << "'\n";
        return false;
    }
    return true;
}

int cmd_check(const Config& cfg, const std::string& input)
{
    int rc;
    auto p = load(input, cfg, rc);
    if (!p)
        return rc;
    int cnms = 0, rcnms = 0;
    CString report;
    auto s = dcs_check(p.get(), format_of(cfg), &cnms, &rcnms, report.out());
    if (s != DCS_OK)
        return report_error(s);
    std::cout << report.str();
    return rcnms ? kOk : kPropertyFailed;
}

int cmd_graph(const Config& cfg, const std::string& input, const std::string& dot_path, bool plain)
{
    int rc;
    auto p = load(input, cfg, rc);
    if (!p)
        return rc;
    CString dot;
    auto s = dcs_graph_dot(p.get(), plain ? 0 : 1, dot.out());
    if (s != DCS_OK)
        return report_error(s);
    if (dot_path.empty()) {
        std::cout << dot.str();
        return kOk;
    }
    return write_file(dot_path, dot.str()) ? kOk : kInputError;
}

int cmd_reduce(const Config& cfg, const std::string& input)
{
    int rc;
    auto p = load(input, cfg, rc);
    if (!p)
        return rc;
    dcs_plan* plan = nullptr;
    auto s = dcs_plan_create(p.get(), &plan);
    if (s == DCS_ERR_NOT_APPLICABLE) {
        std::cerr << "note: " << dcs_last_error()
                  << "; the reduction does not apply, 'synth' falls back to monolithic synthesis\n";
        return kNotApplicable;
    }
    if (s != DCS_OK)
        return report_error(s);
    std::unique_ptr<dcs_plan, decltype(&dcs_plan_free)> guard(plan, dcs_plan_free);
    auto model = model_name(input);
    auto opts = options_of(cfg, model);
    CString report;
    s = dcs_plan_report(plan, format_of(cfg), &opts, report.out());
    if (s != DCS_OK)
        return report_error(s);
    std::cout << report.str();
    return kOk;
}

int cmd_synth(const Config& cfg, const std::string& input, const std::string& out_dir)
{
    int rc;
    auto p = load(input, cfg, rc);
    if (!p)
        return rc;
    auto model = model_name(input);
    auto opts = options_of(cfg, model);
    dcs_synthesis* syn = nullptr;
    auto s = dcs_synthesize(p.get(), &opts, 1, &syn);
    if (s != DCS_OK)
        return report_error(s);
    std::unique_ptr<dcs_synthesis, decltype(&dcs_synthesis_free)> guard(syn, dcs_synthesis_free);
    if (dcs_synthesis_fallback(syn))
        std::cerr << "warning: reduction not applicable; synthesized one monolithic supervisor\n";

    CString report;
    s = dcs_synthesis_report(syn, format_of(cfg), report.out());
    if (s != DCS_OK)
        return report_error(s);
    std::cout << report.str();

    std::filesystem::path dir(out_dir);
    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            std::cerr << "error: cannot create '" << out_dir << "': " << ec.message() << '\n';
            return kInputError;
        }
        auto ext = cfg.format == "json" ? "report.json" : "report.txt";
        if (!write_file(dir / ext, report.str()))
            return kInputError;
    }
    for (size_t i = 0; i < dcs_synthesis_supervisor_count(syn); ++i) {
        CString label, text;
        s = dcs_synthesis_supervisor(syn, i, label.out(), text.out());
        if (s != DCS_OK)
            return report_error(s);
        if (!out_dir.empty() && !write_file(dir / (label.str() + ".dcp"), text.str()))
            return kInputError;
        if (cfg.verbose)
            std::cerr << text.str();
    }
    return kOk;
}

int cmd_verify(const Config& cfg, const std::string& input, const std::vector<std::string>& sups)
{
    int rc;
    auto p = load(input, cfg, rc);
    if (!p)
        return rc;
    std::vector<std::string> texts;
    for (const auto& path : sups) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read '" << path << "'\n";
            return kInputError;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        texts.push_back(buf.str());
    }
    std::vector<const char*> ptrs;
    for (const auto& t : texts)
        ptrs.push_back(t.c_str());

    auto model = model_name(input);
    auto opts = options_of(cfg, model);
    int ok = 0;
    CString report;
    auto s = dcs_verify(p.get(), ptrs.data(), ptrs.size(), &opts, format_of(cfg), &ok, report.out());
    if (s != DCS_OK)
        return report_error(s);
    std::cout << report.str();
    return ok ? kOk : kPropertyFailed;
}

int cmd_gen(const std::string& kind, std::uint64_t seed, std::size_t plants, std::size_t reqs,
            const std::string& out)
{
    CString text;
    auto s = dcs_generate(kind.c_str(), seed, plants, reqs, text.out());
    if (s != DCS_OK)
        return report_error(s);
    if (out.empty()) {
        std::cout << text.str();
        return kOk;
    }
    return write_file(out, text.str()) ? kOk : kInputError;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Structural analysis, reduction and synthesis of modular supervisors"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", dcs_version());

    Config cfg;
    app.add_option("--format", cfg.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--bound", cfg.bound, "Product-state limit (default 10^7)")
        ->envname("DECSYNTH_BOUND")
        ->check(CLI::PositiveNumber);
    app.add_flag("--deterministic", cfg.deterministic, "Zero durations in reports");
    app.add_flag("-v,--verbose", cfg.verbose, "Print info diagnostics and supervisors");

    std::string input;
    auto* check = app.add_subcommand("check", "Check the CNMS and RCNMS properties");
    check->add_option("input", input, "Model file (.dcp)")->required();

    std::string dot_path;
    bool plain = false;
    auto* graph = app.add_subcommand("graph", "Emit the dependency graph as DOT");
    graph->add_option("input", input, "Model file (.dcp)")->required();
    graph->add_option("--dot", dot_path, "Write DOT to this file instead of stdout");
    graph->add_flag("--plain", plain, "Omit component coloring");

    auto* reduce = app.add_subcommand("reduce", "Decide whether and where synthesis is needed");
    reduce->add_option("input", input, "Model file (.dcp)")->required();

    std::string out_dir;
    auto* synth = app.add_subcommand("synth", "Reduce, then synthesize modular supervisors");
    synth->add_option("input", input, "Model file (.dcp)")->required();
    synth->add_option("--out", out_dir, "Directory for supervisor files and the report");

    std::vector<std::string> sups;
    auto* verify = app.add_subcommand("verify", "Verify the closed loop under given supervisors");
    verify->add_option("input", input, "Model file (.dcp)")->required();
    verify->add_option("supervisors", sups, "Supervisor files (.dcp)");

    std::string kind = "cnms", gen_out;
    std::uint64_t seed = 0;
    std::size_t plants = 3, reqs = 2;
    auto* gen = app.add_subcommand("gen", "Generate a random model");
    gen->add_option("--kind", kind, "Generator")
        ->check(CLI::IsMember({"cnms", "acyclic", "cyclic", "small"}));
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--plants", plants, "Number of plants")->check(CLI::PositiveNumber);
    gen->add_option("--requirements", reqs, "Number of requirements");
    gen->add_option("-o,--output", gen_out, "Output file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    if (*check)
        return cmd_check(cfg, input);
    if (*graph)
        return cmd_graph(cfg, input, dot_path, plain);
    if (*reduce)
        return cmd_reduce(cfg, input);
    if (*synth)
        return cmd_synth(cfg, input, out_dir);
    if (*verify)
        return cmd_verify(cfg, input, sups);
    if (*gen)
        return cmd_gen(kind, seed, plants, reqs, gen_out);
    return kInputError;
}

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decsynth/problem.hpp"
#include "decsynth/synthesis.hpp"

namespace decsynth {

enum class Severity { Error, Warning, Info };

const char* to_string(Severity s);

/// Byte range in the source text. Lines and columns are 1-based.
struct Span {
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t offset = 0;
    std::size_t length = 0;
};

struct Diagnostic {
    Severity severity = Severity::Error;
    Span span;
    std::string code; // stable, e.g. E-DUP-PLANT
    std::string message;
};

struct ParseResult {
    std::optional<ControlProblem> problem;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return problem.has_value(); }
};

/// Parses and validates a model. Never throws on malformed input: either a
/// problem is returned or at least one error diagnostic.
ParseResult parse_model(std::string_view text);

/// Reads a file and parses it. An unreadable file yields an E-IO diagnostic.
ParseResult parse_model_file(const std::filesystem::path& path);

/// "origin:line:column: severity[code]: message"
std::string format_diagnostic(const Diagnostic& d, std::string_view origin);

/// Canonical model text: plants in order, then requirements. Reparses to an
/// equal problem.
std::string pretty_print(const ControlProblem& cp);

/// A single plant block.
std::string print_plant(const Automaton& a);

/// Identifier as written in model text, quoted when needed.
std::string format_identifier(std::string_view id);

enum class ReportFormat { Text, Json };

struct ReportOptions {
    std::string model = "model";
    /// Zero all durations so reports are byte-identical across runs.
    bool deterministic = false;
    /// The reduction did not apply and results come from monolithic synthesis.
    bool fallback = false;
    std::vector<std::string> warnings;
    std::vector<Diagnostic> diagnostics;
};

/// Table of partial problems with uncontrolled size, controlled size and
/// duration, preceded by the verdict and reduction statistics. For
/// Sectionalize, results[i] belongs to plan.classes[i].
std::string emit_report(const ReductionPlan& plan, std::span<const SynthesisResult> results,
                        ReportFormat format, const ReportOptions& options = {});

} // namespace decsynth

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "decsynth/depgraph.hpp"
#include "decsynth/problem.hpp"

namespace decsynth {

inline constexpr std::size_t kDefaultSynthesisBound = 10'000'000;

struct SynthesisOptions {
    /// Maximum number of explicit product states explored.
    std::size_t bound = kDefaultSynthesisBound;
    /// Let execute_plan synthesize partial problems concurrently.
    bool parallel = true;
};

struct RemovedTransition {
    std::string state;
    std::string event;

    friend bool operator==(const RemovedTransition&, const RemovedTransition&) = default;
};

struct SynthesisResult {
    std::string label;
    /// Controllable, nonblocking, maximally permissive supervisor in the form
    /// P||S: its states are composed plant states.
    Automaton supervisor;
    /// Reachable states of the plant composition.
    std::size_t uncontrolled_size = 0;
    /// Reachable states of plant || requirements before pruning.
    std::size_t closed_loop_size = 0;
    /// States of the supervisor.
    std::size_t controlled_size = 0;
    /// Transitions of plant || requirements cut by synthesis. All controllable.
    std::vector<RemovedTransition> removed_transitions;
    std::size_t iterations = 0;
    double duration_ms = 0.0;

    bool pruned() const
    {
        return !removed_transitions.empty() || controlled_size != closed_loop_size;
    }
};

/// Monolithic synthesis of the supremal controllable and nonblocking
/// supervisor for P || R. Throws EmptySupervisor when the initial state is
/// pruned and SizeBoundExceeded when the explored product exceeds the bound.
SynthesisResult sup_cn(const ControlProblem& cp, const SynthesisOptions& options = {});

/// One sup_cn per requirement, each against the full plant.
std::vector<SynthesisResult> sup_cn_modular(const ControlProblem& cp,
                                            const SynthesisOptions& options = {});

enum class Verdict { SkipByCNMS, SkipByAcyclic, Sectionalize };

const char* to_string(Verdict v);

struct ReductionPlan {
    Verdict verdict = Verdict::SkipByCNMS;
    std::vector<ControlProblem> partial_problems;
    /// Plant indices (in the original problem) of each partial problem.
    std::vector<VertexSet> classes;
    /// Plants that need no synthesis.
    VertexSet residual;

    PropertyReport cnms;
    PropertyReport rcnms;
    std::optional<DependencyGraph> graph;
    std::optional<SccAnalysis> analysis;
    /// Remarks such as negated literals weakened by simplification.
    std::vector<std::string> notes;

    std::size_t plant_count = 0;
    std::size_t requirement_count = 0;
};

/// Three-step decision: CNMS, then acyclic RCNMS, then sectionalization into
/// one simplified partial problem per quotient class. Throws NotApplicable
/// when RCNMS does not hold.
ReductionPlan plan_reduction(const ControlProblem& cp);

/// Empty for the skip verdicts; one sup_cn per partial problem otherwise,
/// labelled S1..Sk.
std::vector<SynthesisResult> execute_plan(const ControlProblem& cp, const ReductionPlan& plan,
                                          const SynthesisOptions& options = {});

} // namespace decsynth

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "decsynth/problem.hpp"

namespace decsynth {

using VertexSet = std::vector<PlantIndex>; // sorted, duplicate-free

struct DependencyEdge {
    PlantIndex init;
    PlantIndex ter;
    std::string requirement;

    friend bool operator==(const DependencyEdge&, const DependencyEdge&) = default;
};

/// Directed multigraph over the plants of a control problem. Each
/// requirement contributes one edge from the plant owning its event to every
/// plant referenced in its condition.
struct DependencyGraph {
    std::vector<std::string> vertices; // plant names, indexed by PlantIndex
    std::vector<DependencyEdge> edges;

    std::size_t vertex_count() const { return vertices.size(); }
};

/// One quotient class: the member extended sets (indices into
/// SccAnalysis::extended) and the union of their vertices.
struct VertexClass {
    std::vector<std::size_t> members;
    VertexSet vertices;

    friend bool operator==(const VertexClass&, const VertexClass&) = default;
};

struct SccAnalysis {
    std::vector<VertexSet> phis;
    std::vector<VertexSet> extended;
    std::vector<VertexClass> partition;
    VertexSet residual;
};

/// Edges are ordered by requirement, then by plant index of the referenced
/// plant. Throws AmbiguousOwner if a requirement event is owned by more than
/// one plant.
DependencyGraph build_graph(const ControlProblem& cp);

/// No cycle of length >= 2 and no self-loop.
bool is_acyclic_selfloop_free(const DependencyGraph& g);

/// All strongly connected components, by iterative Tarjan. Components come
/// out sorted, ordered by their smallest vertex.
std::vector<VertexSet> strongly_connected_components(const DependencyGraph& g);

/// Components with at least two vertices, plus singletons carrying a
/// self-loop. Ordered by smallest contained vertex.
std::vector<VertexSet> cyclic_sccs(const DependencyGraph& g);

/// All vertices with a (possibly empty) path into phi.
VertexSet extend(const DependencyGraph& g, const VertexSet& phi);

/// Classes of the transitive closure of the overlap relation on vsets,
/// ordered by their first member.
std::vector<VertexClass> quotient(const std::vector<VertexSet>& vsets);

SccAnalysis analyze(const DependencyGraph& g);

/// Restriction of a control problem to the kept plants: requirements whose
/// event is owned by a kept plant survive, and every literal referring to a
/// dropped plant becomes T. Throws OutOfRange for an invalid plant index.
ControlProblem simplify_partial_problem(const ControlProblem& cp, const VertexSet& keep);

/// Negated literals that simplify_partial_problem would weaken to T, as
/// human-readable remarks.
std::vector<std::string> weakened_negations(const ControlProblem& cp, const VertexSet& keep);

/// Graphviz DOT rendering. With an analysis, component vertices and edges are
/// red, extension-only vertices purple, and the rest blue.
std::string emit_dot(const DependencyGraph& g, const SccAnalysis* analysis = nullptr);

inline constexpr const char* kRed = "#d62728";
inline constexpr const char* kPurple = "#9467bd";
inline constexpr const char* kBlue = "#1f77b4";

} // namespace decsynth

#pragma once

// Explicit-state exploration of plant || requirements over tuple states.
// Internal to the synthesis module.

#include <string>
#include <unordered_map>
#include <vector>

#include "decsynth/problem.hpp"

namespace decsynth::detail {

struct CompiledLiteral {
    Literal::Kind kind;
    std::uint32_t plant;
    StateIndex state;
    bool negated;
};

using CompiledCondition = std::vector<std::vector<CompiledLiteral>>;

class ProductSpace {
public:
    explicit ProductSpace(const ControlProblem& cp);

    struct Graph {
        std::size_t width = 0;
        std::vector<StateIndex> tuples; // flat, width entries per state
        std::vector<std::vector<Edge>> edges;
        /// States where a requirement disables a plant-enabled uncontrollable event.
        std::vector<bool> requirement_blocks_uncontrollable;
        std::vector<bool> marked;

        std::size_t size() const { return edges.size(); }
        const StateIndex* tuple(std::size_t id) const { return tuples.data() + id * width; }
    };

    /// Breadth-first exploration from the initial tuple. With requirements
    /// applied, guarded transitions whose condition is false are omitted.
    Graph explore(bool apply_requirements, std::size_t bound) const;

    /// Reachable state count of the plain plant composition.
    std::size_t count_plant_states(std::size_t bound) const;

    const std::vector<Event>& events() const { return events_; }
    std::string state_name(const StateIndex* tuple) const;

private:
    bool guard_holds(EventIndex e, const StateIndex* tuple) const;
    void enabled(const StateIndex* tuple, std::vector<std::pair<EventIndex, std::vector<StateIndex>>>& out,
                 std::vector<EventIndex>& scratch) const;

    const ControlProblem& cp_;
    std::vector<Event> events_;
    std::vector<std::vector<std::pair<std::size_t, EventIndex>>> owners_;
    std::vector<std::vector<EventIndex>> local_to_global_;
    std::vector<std::vector<CompiledCondition>> guards_;
};

} // namespace decsynth::detail

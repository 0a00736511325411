#pragma once

// Shared helpers for the test binaries.

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "decsynth/automaton.hpp"
#include "decsynth/model_io.hpp"
#include "decsynth/problem.hpp"
#include "decsynth/synthesis.hpp"

#ifndef DECSYNTH_FIXTURE_DIR
#error "DECSYNTH_FIXTURE_DIR must be defined"
#endif

namespace testsupport {

inline std::string fixture_path(const std::string& name)
{
    return std::string(DECSYNTH_FIXTURE_DIR) + "/" + name;
}

inline decsynth::ControlProblem load_fixture(const std::string& name)
{
    auto r = decsynth::parse_model_file(fixture_path(name));
    if (!r.ok()) {
        std::string msg = "fixture " + name + " failed to parse";
        for (const auto& d : r.diagnostics)
            msg += "\n" + decsynth::format_diagnostic(d, name);
        throw std::runtime_error(msg);
    }
    return std::move(*r.problem);
}

struct EventSpec {
    std::string name;
    bool controllable;
};

// Random deterministic automaton over the given events. Every state is
// present; density is the probability that a (state, event) pair has an edge.
inline decsynth::Automaton random_automaton(std::mt19937_64& rng, const std::string& name,
                                            std::size_t states,
                                            const std::vector<EventSpec>& events, double density)
{
    decsynth::AutomatonBuilder b(name);
    std::bernoulli_distribution mark(0.4), edge(density);
    std::uniform_int_distribution<std::size_t> pick(0, states - 1);
    for (std::size_t i = 0; i < states; ++i)
        b.add_state(name + "_s" + std::to_string(i), mark(rng));
    for (const auto& e : events)
        b.add_event(e.name, e.controllable);
    for (std::size_t i = 0; i < states; ++i)
        for (std::size_t e = 0; e < events.size(); ++e)
            if (edge(rng))
                b.add_transition(i, e, pick(rng));
    b.set_initial(0);
    return std::move(b).build();
}

// Sub-problem over the named plants and requirements, taken verbatim.
inline decsynth::ControlProblem subproblem(const decsynth::ControlProblem& cp,
                                           const std::vector<std::string>& plants,
                                           const std::vector<std::string>& reqs)
{
    std::vector<decsynth::Automaton> ps;
    for (const auto& n : plants)
        ps.push_back(cp.plant(*cp.find_plant(n)));
    std::vector<decsynth::StateEventInvariant> rs;
    for (const auto& id : reqs)
        for (const auto& r : cp.requirements())
            if (r.id == id)
                rs.push_back(r);
    return decsynth::ControlProblem(std::move(ps), std::move(rs));
}

// The two modular supervisors of the six-plant conflict example. Each
// partial problem keeps the R5 variant on its own side of the graph.
struct ConflictPair {
    decsynth::ControlProblem left, right;
    decsynth::SynthesisResult s1, s2;
};

inline ConflictPair conflict_pair(const decsynth::ControlProblem& cp)
{
    auto left = subproblem(cp, {"P1", "P2", "P5", "P6"}, {"R1", "R2", "R5p", "R6"});
    auto right = subproblem(cp, {"P3", "P4", "P5", "P6"}, {"R3", "R4", "R5pp", "R6"});
    auto s1 = decsynth::sup_cn(left);
    auto s2 = decsynth::sup_cn(right);
    return {std::move(left), std::move(right), std::move(s1), std::move(s2)};
}

} // namespace testsupport

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decsynth/problem.hpp"

namespace decsynth {

inline constexpr std::size_t kDefaultVerifyBound = 1'000'000;

/// A counterexample: a path of the closed loop from its initial state.
/// `states` has one more entry than `events`. For a controllability
/// violation, `blocked_event` names the uncontrollable event the plant
/// allows at the last state but the closed loop does not.
struct Witness {
    std::string property; // "safety", "controllability" or "nonblocking"
    std::vector<std::string> events;
    std::vector<std::string> states;
    std::string blocked_event;
    /// Plant states at the last state of the path, by plant name.
    GlobalState plant_state;
};

struct VerificationVerdict {
    bool safe = true;
    bool controllable = true;
    bool nonblocking = true;
    std::optional<bool> maximally_permissive;
    std::vector<Witness> witnesses;

    bool ok() const
    {
        return safe && controllable && nonblocking && maximally_permissive.value_or(true);
    }
};

struct VerifyOptions {
    std::size_t bound = kDefaultVerifyBound;
    /// Compare against the exhaustive supremum. Only for small instances.
    bool check_maximal_permissiveness = false;
};

/// P || R || S1 || ... || Sn built from public operations. With no
/// supervisors this is P || R itself.
Automaton closed_loop(const ControlProblem& cp, std::span<const Automaton> supervisors,
                      std::size_t bound = kDefaultVerifyBound);

/// Decodes a closed-loop state name into plant states.
GlobalState closed_loop_plant_state(const ControlProblem& cp, std::string_view state,
                                    std::size_t supervisor_count);

/// Checks safety, controllability with respect to the plant and
/// nonblockingness of the closed loop; optionally maximal permissiveness.
/// Throws SizeBoundExceeded.
VerificationVerdict verify_closed_loop(const ControlProblem& cp,
                                       std::span<const Automaton> supervisors,
                                       const VerifyOptions& options = {});

/// True iff the composition of the supervisors is nonblocking.
bool is_nonconflicting(std::span<const Automaton> supervisors,
                       std::size_t bound = kDefaultVerifyBound);

struct SupremumSearch {
    /// Supremal controllable nonblocking sub-automaton of P || R, absent when
    /// no candidate is valid.
    std::optional<Automaton> supremum;
    std::size_t candidates = 0;
    std::size_t valid = 0;
    std::size_t controllable_transitions = 0;
};

/// Exhaustive search over every subset of controllable transitions of the
/// reachable P || R. Exponential; throws OutOfRange when P || R has more than
/// max_states states or more than max_controllable controllable transitions.
SupremumSearch exhaustive_supremum(const ControlProblem& cp, std::size_t max_states = 10,
                                   std::size_t max_controllable = 16);

// Generators -----------------------------------------------------------------
// Deterministic per seed. Components have 2 to 4 states.

/// Satisfies every CNMS property by construction.
ControlProblem generate_cnms_instance(std::uint64_t seed, std::size_t plants,
                                      std::size_t requirements);

/// Satisfies RCNMS with an acyclic, self-loop free dependency graph.
ControlProblem generate_acyclic_rcnms_instance(std::uint64_t seed, std::size_t plants,
                                               std::size_t requirements);

/// Satisfies RCNMS; the dependency graph contains at least one 2-cycle.
/// Needs at least 2 plants.
ControlProblem generate_cyclic_rcnms_instance(std::uint64_t seed, std::size_t plants,
                                              std::size_t requirements);

/// Unconstrained problem whose plant composition has at most max_states
/// states, for the exhaustive oracle.
ControlProblem generate_small_instance(std::uint64_t seed, std::size_t max_states = 10);

} // namespace decsynth

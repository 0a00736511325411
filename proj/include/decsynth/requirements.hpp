#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "decsynth/automaton.hpp"

namespace decsynth {

/// Atom of a requirement condition: a state reference "P.q" (optionally
/// negated) or one of the constants T and F.
struct Literal {
    enum class Kind { StateRef, True, False };

    Kind kind = Kind::True;
    std::string plant;
    std::string state;
    bool negated = false;

    static Literal ref(std::string plant, std::string state, bool negated = false)
    {
        return Literal{Kind::StateRef, std::move(plant), std::move(state), negated};
    }
    static Literal truth() { return Literal{Kind::True, {}, {}, false}; }
    static Literal falsity() { return Literal{Kind::False, {}, {}, false}; }

    friend bool operator==(const Literal&, const Literal&) = default;
};

using Conjunction = std::vector<Literal>;

/// Condition in disjunctive normal form. Only DNF is representable.
class Condition {
public:
    /// Throws InvalidModel if there are no disjuncts or a disjunct is empty.
    explicit Condition(std::vector<Conjunction> disjuncts);

    static Condition always() { return Condition({{Literal::truth()}}); }

    const std::vector<Conjunction>& disjuncts() const { return disjuncts_; }

    friend bool operator==(const Condition&, const Condition&) = default;

private:
    std::vector<Conjunction> disjuncts_;
};

/// A requirement "event needs condition".
struct StateEventInvariant {
    std::string id;
    Event event;
    Condition condition;

    friend bool operator==(const StateEventInvariant&, const StateEventInvariant&) = default;
};

/// Evaluates a condition under a global state. Throws UnknownReference when a
/// state reference names a plant missing from the assignment.
bool eval_condition(const Condition& c, const GlobalState& gs);

inline const Event& restricted_event(const StateEventInvariant& r) { return r.event; }

/// Plants referenced by the condition, sorted by name.
std::set<std::string> condition_plants(const StateEventInvariant& r);

/// Maps a composed state of compose_all(plants) back to a global state.
/// Decoding is positional over plant_names; throws UnknownReference when the
/// state name is not a tuple of the right arity.
GlobalState decode_global_state(std::string_view state, std::span<const std::string> plant_names);

/// Synchronous composition of a composed plant with state-event invariants.
/// A transition (q, e) is removed iff some requirement on e evaluates to false
/// in the decoded global state of q. The result is restricted to its
/// reachable part. Throws UnknownReference if a requirement's event is not in
/// the plant's alphabet.
Automaton compose_plant_with_requirements(const Automaton& plant,
                                          std::span<const StateEventInvariant> requirements,
                                          std::span<const std::string> plant_names);

std::string to_string(const Condition& c);
std::string to_string(const StateEventInvariant& r);

} // namespace decsynth

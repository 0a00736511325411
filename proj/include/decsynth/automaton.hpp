#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "decsynth/error.hpp"

namespace decsynth {

using StateIndex = std::uint32_t;
using EventIndex = std::uint32_t;

/// An event label. Two events are the same event iff their names are equal.
struct Event {
    std::string name;
    bool controllable = true;

    friend bool operator==(const Event&, const Event&) = default;
};

struct Edge {
    EventIndex event;
    StateIndex target;
};

/// Assignment of a current state to every plant of a control problem.
using GlobalState = std::map<std::string, std::string>;

/// Deterministic finite automaton with a partial transition function.
///
/// Immutable once built; construct through AutomatonBuilder. State and event
/// indices are dense and stable, and name lookups are case-sensitive.
class Automaton {
public:
    const std::string& name() const { return name_; }

    std::size_t state_count() const { return states_.size(); }
    std::size_t event_count() const { return alphabet_.size(); }
    std::size_t transition_count() const;

    const std::vector<std::string>& states() const { return states_; }
    const std::vector<Event>& alphabet() const { return alphabet_; }
    const std::string& state_name(StateIndex s) const { return states_.at(s); }
    const Event& event(EventIndex e) const { return alphabet_.at(e); }

    std::optional<StateIndex> find_state(std::string_view name) const;
    std::optional<EventIndex> find_event(std::string_view name) const;
    bool has_state(std::string_view name) const { return find_state(name).has_value(); }
    bool has_event(std::string_view name) const { return find_event(name).has_value(); }

    StateIndex initial() const { return initial_; }
    bool is_marked(StateIndex s) const { return marked_.at(s); }
    std::vector<StateIndex> marked_states() const;

    /// Outgoing edges of a state, sorted by event index.
    std::span<const Edge> out(StateIndex s) const { return out_.at(s); }
    std::optional<StateIndex> step(StateIndex s, EventIndex e) const;

    /// Name-based transition lookup. Throws UnknownReference if the state or
    /// the event does not belong to this automaton.
    std::optional<std::string> step(std::string_view state, std::string_view event) const;

    /// Structural equality: same name, same ordered state list, same initial
    /// state, and equal sets of events, transitions and marked states.
    friend bool operator==(const Automaton& a, const Automaton& b);

private:
    friend class AutomatonBuilder;
    Automaton() = default;

    std::string name_;
    std::vector<std::string> states_;
    std::vector<Event> alphabet_;
    std::unordered_map<std::string, StateIndex> state_index_;
    std::unordered_map<std::string, EventIndex> event_index_;
    std::vector<std::vector<Edge>> out_;
    std::vector<bool> marked_;
    StateIndex initial_ = 0;
};

/// Incremental construction of an Automaton. build() validates every
/// invariant and throws Error(InvalidModel) on violation.
class AutomatonBuilder {
public:
    explicit AutomatonBuilder(std::string name);

    StateIndex add_state(std::string name, bool marked = false);
    EventIndex add_event(std::string name, bool controllable);
    EventIndex add_event(const Event& e) { return add_event(e.name, e.controllable); }

    void add_transition(StateIndex from, EventIndex event, StateIndex to);
    void add_transition(std::string_view from, std::string_view event, std::string_view to);
    void set_initial(StateIndex s);
    void set_initial(std::string_view s);
    void set_marked(StateIndex s, bool marked = true);

    std::optional<StateIndex> find_state(std::string_view name) const;
    std::optional<EventIndex> find_event(std::string_view name) const;

    Automaton build() &&;

private:
    Automaton a_;
    bool has_initial_ = false;
};

// Structural predicates ------------------------------------------------------

std::vector<bool> reachable_mask(const Automaton& a);
std::vector<bool> coreachable_mask(const Automaton& a);

/// Names of the reachable states, in breadth-first discovery order.
std::vector<std::string> reachable_states(const Automaton& a);
/// Names of the coreachable states, in state order.
std::vector<std::string> coreachable_states(const Automaton& a);

bool is_nonblocking(const Automaton& a);
bool is_trim(const Automaton& a);
bool is_strongly_connected(const Automaton& a);

/// True iff K is controllable with respect to G. Both must have the same
/// alphabet (names and controllability flags); throws AlphabetMismatch
/// otherwise.
bool is_controllable(const Automaton& k, const Automaton& g);

/// Restriction of an automaton to its reachable part. State order follows
/// breadth-first discovery from the initial state.
Automaton reachable_part(const Automaton& a);

// Composition -----------------------------------------------------------------

/// Synchronous composition over the reachable part of the product. Composed
/// states are named "(left,right)". Throws ControllabilityConflict when a
/// shared event carries different controllability flags.
Automaton compose(const Automaton& g1, const Automaton& g2);

/// Synchronous composition of several automata with flattened state names
/// "(s1,...,sn)". A single input is returned unchanged. Throws
/// SizeBoundExceeded once more than max_states states are discovered.
Automaton compose_all(std::span<const Automaton> automata,
                      std::size_t max_states = SIZE_MAX);

/// Deterministic language comparison by synchronized exploration of the two
/// reachable parts. Compares generated languages and, when compare_marked is
/// set, marked languages as well.
bool language_equal(const Automaton& a, const Automaton& b, bool compare_marked = true);

/// Split a composed state name "(x,y,...)" at its top-level commas. Returns
/// nullopt when the name is not a tuple.
std::optional<std::vector<std::string>> split_tuple(std::string_view name);

std::string make_tuple_name(std::span<const std::string> parts);

} // namespace decsynth

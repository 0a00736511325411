#include "decsynth/automaton.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

namespace decsynth {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidModel: return "invalid model";
    case ErrorCode::UnknownReference: return "unknown reference";
    case ErrorCode::ControllabilityConflict: return "controllability conflict";
    case ErrorCode::AlphabetMismatch: return "alphabet mismatch";
    case ErrorCode::AmbiguousOwner: return "ambiguous event owner";
    case ErrorCode::OutOfRange: return "out of range";
    case ErrorCode::EmptySupervisor: return "empty supervisor";
    case ErrorCode::NotApplicable: return "not applicable";
    case ErrorCode::SizeBoundExceeded: return "size bound exceeded";
    }
    return "unknown error";
}

// Automaton ------------------------------------------------------------------

std::size_t Automaton::transition_count() const
{
    std::size_t n = 0;
    for (const auto& edges : out_)
        n += edges.size();
    return n;
}

std::optional<StateIndex> Automaton::find_state(std::string_view name) const
{
    auto it = state_index_.find(std::string(name));
    if (it == state_index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<EventIndex> Automaton::find_event(std::string_view name) const
{
    auto it = event_index_.find(std::string(name));
    if (it == event_index_.end())
        return std::nullopt;
    return it->second;
}

std::vector<StateIndex> Automaton::marked_states() const
{
    std::vector<StateIndex> result;
    for (StateIndex s = 0; s < marked_.size(); ++s)
        if (marked_[s])
            result.push_back(s);
    return result;
}

std::optional<StateIndex> Automaton::step(StateIndex s, EventIndex e) const
{
    const auto& edges = out_.at(s);
    auto it = std::lower_bound(edges.begin(), edges.end(), e,
                               [](const Edge& edge, EventIndex ev) { return edge.event < ev; });
    if (it == edges.end() || it->event != e)
        return std::nullopt;
    return it->target;
}

std::optional<std::string> Automaton::step(std::string_view state, std::string_view event) const
{
    auto s = find_state(state);
    if (!s)
        throw Error(ErrorCode::UnknownReference,
                    "state '" + std::string(state) + "' is not a state of " + name_);
    auto e = find_event(event);
    if (!e)
        throw Error(ErrorCode::UnknownReference,
                    "event '" + std::string(event) + "' is not in the alphabet of " + name_);
    auto t = step(*s, *e);
    if (!t)
        return std::nullopt;
    return states_[*t];
}

bool operator==(const Automaton& a, const Automaton& b)
{
    if (a.name_ != b.name_ || a.states_ != b.states_ || a.initial_ != b.initial_ ||
        a.marked_ != b.marked_)
        return false;

    auto event_set = [](const Automaton& x) {
        std::set<std::pair<std::string, bool>> r;
        for (const auto& e : x.alphabet_)
            r.emplace(e.name, e.controllable);
        return r;
    };
    if (event_set(a) != event_set(b))
        return false;

    auto transition_set = [](const Automaton& x) {
        std::set<std::tuple<StateIndex, std::string, StateIndex>> r;
        for (StateIndex s = 0; s < x.out_.size(); ++s)
            for (const auto& edge : x.out_[s])
                r.emplace(s, x.alphabet_[edge.event].name, edge.target);
        return r;
    };
    return transition_set(a) == transition_set(b);
}

// AutomatonBuilder -----------------------------------------------------------

AutomatonBuilder::AutomatonBuilder(std::string name)
{
    if (name.empty())
        throw Error(ErrorCode::InvalidModel, "automaton name must not be empty");
    a_.name_ = std::move(name);
}

StateIndex AutomatonBuilder::add_state(std::string name, bool marked)
{
    if (name.empty())
        throw Error(ErrorCode::InvalidModel, "empty state name in " + a_.name_);
    auto idx = static_cast<StateIndex>(a_.states_.size());
    auto [it, inserted] = a_.state_index_.emplace(name, idx);
    if (!inserted)
        throw Error(ErrorCode::InvalidModel,
                    "duplicate state '" + name + "' in " + a_.name_);
    a_.states_.push_back(std::move(name));
    a_.out_.emplace_back();
    a_.marked_.push_back(marked);
    return idx;
}

EventIndex AutomatonBuilder::add_event(std::string name, bool controllable)
{
    if (name.empty())
        throw Error(ErrorCode::InvalidModel, "empty event name in " + a_.name_);
    if (auto existing = find_event(name)) {
        if (a_.alphabet_[*existing].controllable != controllable)
            throw Error(ErrorCode::ControllabilityConflict,
                        "event '" + name + "' declared both controllable and uncontrollable");
        return *existing;
    }
    auto idx = static_cast<EventIndex>(a_.alphabet_.size());
    a_.event_index_.emplace(name, idx);
    a_.alphabet_.push_back(Event{std::move(name), controllable});
    return idx;
}

void AutomatonBuilder::add_transition(StateIndex from, EventIndex event, StateIndex to)
{
    if (from >= a_.states_.size() || to >= a_.states_.size() || event >= a_.alphabet_.size())
        throw Error(ErrorCode::OutOfRange, "transition index out of range in " + a_.name_);
    for (const auto& edge : a_.out_[from]) {
        if (edge.event != event)
            continue;
        if (edge.target == to)
            return;
        throw Error(ErrorCode::InvalidModel,
                    "nondeterministic transitions from '" + a_.states_[from] + "' on '" +
                        a_.alphabet_[event].name + "' in " + a_.name_);
    }
    a_.out_[from].push_back(Edge{event, to});
}

void AutomatonBuilder::add_transition(std::string_view from, std::string_view event,
                                      std::string_view to)
{
    auto f = find_state(from);
    auto t = find_state(to);
    auto e = find_event(event);
    if (!f || !t)
        throw Error(ErrorCode::UnknownReference,
                    "transition endpoint is not a state of " + a_.name_);
    if (!e)
        throw Error(ErrorCode::UnknownReference,
                    "transition label '" + std::string(event) + "' not in alphabet of " + a_.name_);
    add_transition(*f, *e, *t);
}

void AutomatonBuilder::set_initial(StateIndex s)
{
    if (s >= a_.states_.size())
        throw Error(ErrorCode::OutOfRange, "initial state out of range in " + a_.name_);
    a_.initial_ = s;
    has_initial_ = true;
}

void AutomatonBuilder::set_initial(std::string_view s)
{
    auto idx = find_state(s);
    if (!idx)
        throw Error(ErrorCode::UnknownReference,
                    "initial state '" + std::string(s) + "' unknown in " + a_.name_);
    set_initial(*idx);
}

void AutomatonBuilder::set_marked(StateIndex s, bool marked)
{
    if (s >= a_.states_.size())
        throw Error(ErrorCode::OutOfRange, "marked state out of range in " + a_.name_);
    a_.marked_[s] = marked;
}

std::optional<StateIndex> AutomatonBuilder::find_state(std::string_view name) const
{
    return a_.find_state(name);
}

std::optional<EventIndex> AutomatonBuilder::find_event(std::string_view name) const
{
    return a_.find_event(name);
}

Automaton AutomatonBuilder::build() &&
{
    if (a_.states_.empty())
        throw Error(ErrorCode::InvalidModel, a_.name_ + " has no states");
    if (a_.alphabet_.empty())
        throw Error(ErrorCode::InvalidModel, a_.name_ + " has an empty alphabet");
    if (!has_initial_)
        throw Error(ErrorCode::InvalidModel, a_.name_ + " has no initial state");
    for (auto& edges : a_.out_)
        std::sort(edges.begin(), edges.end(),
                  [](const Edge& x, const Edge& y) { return x.event < y.event; });
    return std::move(a_);
}

// Predicates -----------------------------------------------------------------

std::vector<bool> reachable_mask(const Automaton& a)
{
    std::vector<bool> seen(a.state_count(), false);
    std::deque<StateIndex> queue{a.initial()};
    seen[a.initial()] = true;
    while (!queue.empty()) {
        StateIndex s = queue.front();
        queue.pop_front();
        for (const auto& edge : a.out(s)) {
            if (!seen[edge.target]) {
                seen[edge.target] = true;
                queue.push_back(edge.target);
            }
        }
    }
    return seen;
}

namespace {

std::vector<std::vector<StateIndex>> predecessors(const Automaton& a)
{
    std::vector<std::vector<StateIndex>> pred(a.state_count());
    for (StateIndex s = 0; s < a.state_count(); ++s)
        for (const auto& edge : a.out(s))
            pred[edge.target].push_back(s);
    return pred;
}

std::vector<bool> backward_closure(const std::vector<std::vector<StateIndex>>& pred,
                                   std::vector<StateIndex> seeds)
{
    std::vector<bool> seen(pred.size(), false);
    std::deque<StateIndex> queue;
    for (auto s : seeds) {
        if (!seen[s]) {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        StateIndex s = queue.front();
        queue.pop_front();
        for (auto p : pred[s]) {
            if (!seen[p]) {
                seen[p] = true;
                queue.push_back(p);
            }
        }
    }
    return seen;
}

} // namespace

std::vector<bool> coreachable_mask(const Automaton& a)
{
    return backward_closure(predecessors(a), a.marked_states());
}

std::vector<std::string> reachable_states(const Automaton& a)
{
    std::vector<std::string> result;
    std::vector<bool> seen(a.state_count(), false);
    std::deque<StateIndex> queue{a.initial()};
    seen[a.initial()] = true;
    while (!queue.empty()) {
        StateIndex s = queue.front();
        queue.pop_front();
        result.push_back(a.state_name(s));
        for (const auto& edge : a.out(s)) {
            if (!seen[edge.target]) {
                seen[edge.target] = true;
                queue.push_back(edge.target);
            }
        }
    }
    return result;
}

std::vector<std::string> coreachable_states(const Automaton& a)
{
    auto mask = coreachable_mask(a);
    std::vector<std::string> result;
    for (StateIndex s = 0; s < mask.size(); ++s)
        if (mask[s])
            result.push_back(a.state_name(s));
    return result;
}

bool is_nonblocking(const Automaton& a)
{
    auto reach = reachable_mask(a);
    auto coreach = coreachable_mask(a);
    for (std::size_t s = 0; s < reach.size(); ++s)
        if (reach[s] && !coreach[s])
            return false;
    return true;
}

bool is_trim(const Automaton& a)
{
    auto reach = reachable_mask(a);
    auto coreach = coreachable_mask(a);
    return std::all_of(reach.begin(), reach.end(), [](bool b) { return b; }) &&
           std::all_of(coreach.begin(), coreach.end(), [](bool b) { return b; });
}

bool is_strongly_connected(const Automaton& a)
{
    if (a.state_count() <= 1)
        return true;
    // Every state reachable from state 0 and state 0 reachable from every state.
    std::vector<bool> forward(a.state_count(), false);
    std::deque<StateIndex> queue{0};
    forward[0] = true;
    while (!queue.empty()) {
        StateIndex s = queue.front();
        queue.pop_front();
        for (const auto& edge : a.out(s)) {
            if (!forward[edge.target]) {
                forward[edge.target] = true;
                queue.push_back(edge.target);
            }
        }
    }
    auto backward = backward_closure(predecessors(a), {0});
    for (std::size_t s = 0; s < a.state_count(); ++s)
        if (!forward[s] || !backward[s])
            return false;
    return true;
}

namespace {

// Maps each event of `from` to the index of the same-named event in `to`.
std::vector<std::optional<EventIndex>> event_mapping(const Automaton& from, const Automaton& to)
{
    std::vector<std::optional<EventIndex>> map(from.event_count());
    for (EventIndex e = 0; e < from.event_count(); ++e)
        map[e] = to.find_event(from.event(e).name);
    return map;
}

struct PairHash {
    std::size_t operator()(const std::pair<StateIndex, StateIndex>& p) const noexcept
    {
        return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
    }
};

} // namespace

bool is_controllable(const Automaton& k, const Automaton& g)
{
    if (k.event_count() != g.event_count())
        throw Error(ErrorCode::AlphabetMismatch,
                    "alphabets of " + k.name() + " and " + g.name() + " differ");
    for (const auto& e : k.alphabet()) {
        auto ge = g.find_event(e.name);
        if (!ge || g.event(*ge).controllable != e.controllable)
            throw Error(ErrorCode::AlphabetMismatch,
                        "event '" + e.name + "' differs between " + k.name() + " and " + g.name());
    }

    auto g_to_k = event_mapping(g, k);
    std::unordered_map<std::pair<StateIndex, StateIndex>, bool, PairHash> seen;
    std::deque<std::pair<StateIndex, StateIndex>> queue;
    queue.emplace_back(k.initial(), g.initial());
    seen.emplace(queue.front(), true);
    while (!queue.empty()) {
        auto [ks, gs] = queue.front();
        queue.pop_front();
        for (const auto& edge : g.out(gs)) {
            EventIndex ke = *g_to_k[edge.event];
            auto kt = k.step(ks, ke);
            if (!kt) {
                if (!g.event(edge.event).controllable)
                    return false;
                continue;
            }
            std::pair<StateIndex, StateIndex> next{*kt, edge.target};
            if (seen.emplace(next, true).second)
                queue.push_back(next);
        }
    }
    return true;
}

Automaton reachable_part(const Automaton& a)
{
    std::vector<StateIndex> order;
    std::vector<std::optional<StateIndex>> renumber(a.state_count());
    std::deque<StateIndex> queue{a.initial()};
    renumber[a.initial()] = 0;
    order.push_back(a.initial());
    while (!queue.empty()) {
        StateIndex s = queue.front();
        queue.pop_front();
        for (const auto& edge : a.out(s)) {
            if (!renumber[edge.target]) {
                renumber[edge.target] = static_cast<StateIndex>(order.size());
                order.push_back(edge.target);
                queue.push_back(edge.target);
            }
        }
    }

    AutomatonBuilder b(a.name());
    for (const auto& e : a.alphabet())
        b.add_event(e);
    for (auto s : order)
        b.add_state(a.state_name(s), a.is_marked(s));
    for (auto s : order)
        for (const auto& edge : a.out(s))
            b.add_transition(*renumber[s], edge.event, *renumber[edge.target]);
    b.set_initial(StateIndex{0});
    return std::move(b).build();
}

// Composition ----------------------------------------------------------------

std::string make_tuple_name(std::span<const std::string> parts)
{
    std::string name = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            name += ',';
        name += parts[i];
    }
    name += ')';
    return name;
}

std::optional<std::vector<std::string>> split_tuple(std::string_view name)
{
    if (name.size() < 2 || name.front() != '(' || name.back() != ')')
        return std::nullopt;
    std::vector<std::string> parts;
    int depth = 0;
    std::size_t start = 1;
    for (std::size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
            if (depth < 0 || (depth == 0 && i + 1 != name.size()))
                return std::nullopt;
        } else if (c == ',' && depth == 1) {
            parts.emplace_back(name.substr(start, i - start));
            start = i + 1;
        }
    }
    if (depth != 0)
        return std::nullopt;
    parts.emplace_back(name.substr(start, name.size() - 1 - start));
    return parts;
}

namespace {

// Global alphabet of several automata with, per event, the list of
// (component, local event) pairs that own it.
struct SharedAlphabet {
    std::vector<Event> events;
    std::vector<std::vector<std::pair<std::size_t, EventIndex>>> owners;
    std::vector<std::vector<EventIndex>> local_to_global;
};

SharedAlphabet merge_alphabets(std::span<const Automaton> automata)
{
    SharedAlphabet sa;
    std::unordered_map<std::string, EventIndex> index;
    sa.local_to_global.resize(automata.size());
    for (std::size_t i = 0; i < automata.size(); ++i) {
        const auto& a = automata[i];
        for (EventIndex e = 0; e < a.event_count(); ++e) {
            const auto& ev = a.event(e);
            auto [it, inserted] = index.emplace(ev.name, static_cast<EventIndex>(sa.events.size()));
            if (inserted) {
                sa.events.push_back(ev);
                sa.owners.emplace_back();
            } else if (sa.events[it->second].controllable != ev.controllable) {
                throw Error(ErrorCode::ControllabilityConflict,
                            "event '" + ev.name + "' has conflicting controllability flags");
            }
            sa.owners[it->second].emplace_back(i, e);
            sa.local_to_global[i].push_back(it->second);
        }
    }
    return sa;
}

std::string tuple_key(std::span<const StateIndex> t)
{
    return std::string(reinterpret_cast<const char*>(t.data()), t.size() * sizeof(StateIndex));
}

Automaton compose_tuples(std::span<const Automaton> automata, std::string name,
                         std::size_t max_states)
{
    const std::size_t n = automata.size();
    SharedAlphabet sa = merge_alphabets(automata);

    AutomatonBuilder b(std::move(name));
    for (const auto& e : sa.events)
        b.add_event(e);

    std::vector<std::vector<StateIndex>> tuples;
    std::unordered_map<std::string, StateIndex> index;
    std::deque<StateIndex> queue;

    auto intern = [&](std::vector<StateIndex> t) -> StateIndex {
        auto key = tuple_key(t);
        auto it = index.find(key);
        if (it != index.end())
            return it->second;
        if (tuples.size() >= max_states)
            throw Error(ErrorCode::SizeBoundExceeded,
                        "composition exceeds " + std::to_string(max_states) + " states");
        std::vector<std::string> names;
        bool marked = true;
        for (std::size_t i = 0; i < n; ++i) {
            names.push_back(automata[i].state_name(t[i]));
            marked = marked && automata[i].is_marked(t[i]);
        }
        StateIndex id = b.add_state(make_tuple_name(names), marked);
        index.emplace(std::move(key), id);
        tuples.push_back(std::move(t));
        queue.push_back(id);
        return id;
    };

    std::vector<StateIndex> init(n);
    for (std::size_t i = 0; i < n; ++i)
        init[i] = automata[i].initial();
    b.set_initial(intern(std::move(init)));

    std::vector<EventIndex> candidates;
    while (!queue.empty()) {
        StateIndex id = queue.front();
        queue.pop_front();
        std::vector<StateIndex> current = tuples[id];

        candidates.clear();
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& edge : automata[i].out(current[i]))
                candidates.push_back(sa.local_to_global[i][edge.event]);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        for (EventIndex g : candidates) {
            std::vector<StateIndex> next = current;
            bool enabled = true;
            for (const auto& [comp, local] : sa.owners[g]) {
                auto t = automata[comp].step(current[comp], local);
                if (!t) {
                    enabled = false;
                    break;
                }
                next[comp] = *t;
            }
            if (!enabled)
                continue;
            StateIndex target = intern(std::move(next));
            b.add_transition(id, g, target);
        }
    }
    return std::move(b).build();
}

} // namespace

Automaton compose(const Automaton& g1, const Automaton& g2)
{
    std::vector<Automaton> pair{g1, g2};
    return compose_tuples(pair, g1.name() + "||" + g2.name(), SIZE_MAX);
}

Automaton compose_all(std::span<const Automaton> automata, std::size_t max_states)
{
    if (automata.empty())
        throw Error(ErrorCode::InvalidModel, "compose_all needs at least one automaton");
    if (automata.size() == 1) {
        if (automata[0].state_count() > max_states)
            throw Error(ErrorCode::SizeBoundExceeded,
                        "composition exceeds " + std::to_string(max_states) + " states");
        return automata[0];
    }
    std::string name;
    for (std::size_t i = 0; i < automata.size(); ++i) {
        if (i)
            name += "||";
        name += automata[i].name();
    }
    return compose_tuples(automata, std::move(name), max_states);
}

bool language_equal(const Automaton& a, const Automaton& b, bool compare_marked)
{
    auto a_to_b = event_mapping(a, b);
    std::unordered_map<std::pair<StateIndex, StateIndex>, bool, PairHash> seen;
    std::deque<std::pair<StateIndex, StateIndex>> queue;
    queue.emplace_back(a.initial(), b.initial());
    seen.emplace(queue.front(), true);
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        if (compare_marked && a.is_marked(x) != b.is_marked(y))
            return false;
        if (a.out(x).size() != b.out(y).size())
            return false;
        for (const auto& edge : a.out(x)) {
            if (!a_to_b[edge.event])
                return false;
            auto t = b.step(y, *a_to_b[edge.event]);
            if (!t)
                return false;
            std::pair<StateIndex, StateIndex> next{edge.target, *t};
            if (seen.emplace(next, true).second)
                queue.push_back(next);
        }
    }
    return true;
}

} // namespace decsynth

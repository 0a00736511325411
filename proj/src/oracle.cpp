#include "decsynth/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace decsynth {

namespace {

Automaton plant_with_requirements(const ControlProblem& cp, const Automaton& plant)
{
    auto names = cp.plant_names();
    return compose_plant_with_requirements(plant, cp.requirements(), names);
}

struct Explored {
    std::vector<StateIndex> order;
    // parent[s] = (predecessor, event), valid for every reached s but the initial state
    std::vector<std::pair<StateIndex, EventIndex>> parent;
    std::vector<bool> reached;
};

Explored explore(const Automaton& a)
{
    Explored x;
    x.parent.resize(a.state_count());
    x.reached.assign(a.state_count(), false);
    x.reached[a.initial()] = true;
    x.order.push_back(a.initial());
    for (std::size_t head = 0; head < x.order.size(); ++head) {
        auto s = x.order[head];
        for (const auto& e : a.out(s)) {
            if (!x.reached[e.target]) {
                x.reached[e.target] = true;
                x.parent[e.target] = {s, e.event};
                x.order.push_back(e.target);
            }
        }
    }
    return x;
}

Witness path_to(const Automaton& a, const Explored& x, StateIndex s, std::string property)
{
    Witness w;
    w.property = std::move(property);
    for (auto cur = s; cur != a.initial(); cur = x.parent[cur].first) {
        w.states.push_back(a.state_name(cur));
        w.events.push_back(a.event(x.parent[cur].second).name);
    }
    w.states.push_back(a.state_name(a.initial()));
    std::reverse(w.states.begin(), w.states.end());
    std::reverse(w.events.begin(), w.events.end());
    return w;
}

// The P || R component of a closed-loop state name.
std::string plant_part(std::string_view state, std::size_t supervisor_count)
{
    if (supervisor_count == 0)
        return std::string(state);
    auto parts = split_tuple(state);
    if (!parts || parts->size() != supervisor_count + 1)
        throw Error(ErrorCode::UnknownReference,
                    "closed-loop state '" + std::string(state) + "' has the wrong shape");
    return parts->front();
}

} // namespace

Automaton closed_loop(const ControlProblem& cp, std::span<const Automaton> supervisors,
                      std::size_t bound)
{
    auto plant = compose_all(cp.plants(), bound);
    std::vector<Automaton> parts{plant_with_requirements(cp, plant)};
    parts.insert(parts.end(), supervisors.begin(), supervisors.end());
    return compose_all(parts, bound);
}

GlobalState closed_loop_plant_state(const ControlProblem& cp, std::string_view state,
                                    std::size_t supervisor_count)
{
    auto names = cp.plant_names();
    return decode_global_state(plant_part(state, supervisor_count), names);
}

VerificationVerdict verify_closed_loop(const ControlProblem& cp,
                                       std::span<const Automaton> supervisors,
                                       const VerifyOptions& options)
{
    auto plant = compose_all(cp.plants(), options.bound);
    std::vector<Automaton> parts{plant_with_requirements(cp, plant)};
    parts.insert(parts.end(), supervisors.begin(), supervisors.end());
    auto loop = compose_all(parts, options.bound);

    VerificationVerdict verdict;
    auto x = explore(loop);

    for (auto s : x.order) {
        auto gs = closed_loop_plant_state(cp, loop.state_name(s), supervisors.size());
        auto ps = plant.find_state(plant_part(loop.state_name(s), supervisors.size()));
        if (!ps)
            throw Error(ErrorCode::UnknownReference,
                        "closed-loop state '" + loop.state_name(s) + "' has no plant state");

        if (verdict.safe) {
            for (const auto& e : loop.out(s)) {
                const auto& ev = loop.event(e.event).name;
                auto pe = plant.find_event(ev);
                bool allowed = pe && plant.step(*ps, *pe).has_value();
                for (const auto& r : cp.requirements())
                    if (r.event.name == ev && !eval_condition(r.condition, gs))
                        allowed = false;
                if (!allowed) {
                    verdict.safe = false;
                    auto w = path_to(loop, x, s, "safety");
                    w.events.push_back(ev);
                    w.states.push_back(loop.state_name(e.target));
                    w.plant_state = gs;
                    verdict.witnesses.push_back(std::move(w));
                    break;
                }
            }
        }

        if (verdict.controllable) {
            for (const auto& e : plant.out(*ps)) {
                const auto& ev = plant.event(e.event);
                if (ev.controllable)
                    continue;
                if (!loop.step(loop.state_name(s), ev.name)) {
                    verdict.controllable = false;
                    auto w = path_to(loop, x, s, "controllability");
                    w.blocked_event = ev.name;
                    w.plant_state = gs;
                    verdict.witnesses.push_back(std::move(w));
                    break;
                }
            }
        }
    }

    auto coreach = coreachable_mask(loop);
    for (auto s : x.order) {
        if (!coreach[s]) {
            verdict.nonblocking = false;
            auto w = path_to(loop, x, s, "nonblocking");
            w.plant_state = closed_loop_plant_state(cp, loop.state_name(s), supervisors.size());
            verdict.witnesses.push_back(std::move(w));
            break;
        }
    }

    if (options.check_maximal_permissiveness && verdict.safe && verdict.controllable &&
        verdict.nonblocking) {
        auto search = exhaustive_supremum(cp);
        verdict.maximally_permissive =
            search.supremum.has_value() && language_equal(loop, *search.supremum);
    }
    return verdict;
}

bool is_nonconflicting(std::span<const Automaton> supervisors, std::size_t bound)
{
    if (supervisors.empty())
        return true;
    return is_nonblocking(compose_all(supervisors, bound));
}

SupremumSearch exhaustive_supremum(const ControlProblem& cp, std::size_t max_states,
                                   std::size_t max_controllable)
{
    auto plant = compose_all(cp.plants(), kDefaultVerifyBound);
    auto pr = plant_with_requirements(cp, plant);
    if (pr.state_count() > max_states)
        throw Error(ErrorCode::OutOfRange, "P||R has more than " + std::to_string(max_states) +
                                               " states");

    const std::size_t n = pr.state_count();
    struct T {
        StateIndex from;
        EventIndex event;
        StateIndex to;
        bool controllable;
    };
    std::vector<T> transitions;
    std::vector<std::size_t> bit_of;
    std::size_t k = 0;
    for (StateIndex s = 0; s < n; ++s) {
        for (const auto& e : pr.out(s)) {
            bool c = pr.event(e.event).controllable;
            transitions.push_back({s, e.event, e.target, c});
            bit_of.push_back(c ? k++ : SIZE_MAX);
        }
    }
    if (k > max_controllable)
        throw Error(ErrorCode::OutOfRange, std::to_string(k) + " controllable transitions exceed " +
                                               std::to_string(max_controllable));

    // A state may survive only if every uncontrollable event the plant allows
    // there is still present in P || R.
    std::vector<bool> uncontrollable_ok(n, true);
    for (StateIndex s = 0; s < n; ++s) {
        auto ps = *plant.find_state(pr.state_name(s));
        for (const auto& e : plant.out(ps)) {
            const auto& ev = plant.event(e.event);
            if (!ev.controllable && !pr.step(pr.state_name(s), ev.name))
                uncontrollable_ok[s] = false;
        }
    }

    SupremumSearch search;
    search.controllable_transitions = k;
    std::set<std::vector<bool>> valid_sets;
    std::vector<bool> united(transitions.size(), false);

    std::vector<bool> reach(n), coreach(n), kept(transitions.size());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        ++search.candidates;
        for (std::size_t t = 0; t < transitions.size(); ++t)
            kept[t] = bit_of[t] == SIZE_MAX || !((mask >> bit_of[t]) & 1U);

        std::fill(reach.begin(), reach.end(), false);
        reach[pr.initial()] = true;
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t t = 0; t < transitions.size(); ++t) {
                if (kept[t] && reach[transitions[t].from] && !reach[transitions[t].to]) {
                    reach[transitions[t].to] = true;
                    grew = true;
                }
            }
        }
        bool ok = true;
        for (StateIndex s = 0; s < n && ok; ++s)
            ok = !reach[s] || uncontrollable_ok[s];
        if (!ok)
            continue;

        for (StateIndex s = 0; s < n; ++s)
            coreach[s] = reach[s] && pr.is_marked(s);
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t t = 0; t < transitions.size(); ++t) {
                const auto& tr = transitions[t];
                if (kept[t] && reach[tr.from] && coreach[tr.to] && !coreach[tr.from]) {
                    coreach[tr.from] = true;
                    grew = true;
                }
            }
        }
        for (StateIndex s = 0; s < n && ok; ++s)
            ok = !reach[s] || coreach[s];
        if (!ok)
            continue;

        ++search.valid;
        std::vector<bool> used(transitions.size());
        for (std::size_t t = 0; t < transitions.size(); ++t) {
            used[t] = kept[t] && reach[transitions[t].from];
            if (used[t])
                united[t] = true;
        }
        valid_sets.insert(std::move(used));
    }

    if (search.valid == 0)
        return search;
    if (!valid_sets.contains(united))
        throw Error(ErrorCode::InvalidModel,
                    "union of valid candidates is not itself a valid candidate");

    AutomatonBuilder b(pr.name());
    for (const auto& e : pr.alphabet())
        b.add_event(e);
    std::vector<std::optional<StateIndex>> index(n);
    auto state = [&](StateIndex s) {
        if (!index[s])
            index[s] = b.add_state(pr.state_name(s), pr.is_marked(s));
        return *index[s];
    };
    state(pr.initial());
    for (std::size_t t = 0; t < transitions.size(); ++t)
        if (united[t])
            b.add_transition(state(transitions[t].from), transitions[t].event,
                             state(transitions[t].to));
    b.set_initial(*index[pr.initial()]);
    search.supremum = std::move(b).build();
    return search;
}

} // namespace decsynth

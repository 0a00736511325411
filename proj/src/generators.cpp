#include <algorithm>
#include <numeric>
#include <random>

#include "decsynth/oracle.hpp"

namespace decsynth {

namespace {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p)
{
    return std::bernoulli_distribution(p)(rng);
}

std::string state_name(std::size_t i)
{
    return "s" + std::to_string(i);
}

// Strongly connected plant: a cycle over all states plus an optional chord,
// every transition with its own event. The initial state s0 is marked.
Automaton cyclic_plant(Rng& rng, const std::string& name, std::size_t states, PlantKind kind)
{
    AutomatonBuilder b(name);
    for (std::size_t i = 0; i < states; ++i)
        b.add_state(state_name(i), i == 0 || chance(rng, 0.3));

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < states; ++i)
        edges.emplace_back(i, (i + 1) % states);
    if (states > 2 && chance(rng, 0.5))
        edges.emplace_back(uniform(rng, 0, states - 1), uniform(rng, 0, states - 1));

    std::vector<bool> controllable(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        switch (kind) {
        case PlantKind::Sensor: controllable[i] = false; break;
        case PlantKind::Actuator: controllable[i] = true; break;
        case PlantKind::Mixed: controllable[i] = i % 2 == 0; break;
        }
    }

    std::string prefix = name;
    std::transform(prefix.begin(), prefix.end(), prefix.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto ev = b.add_event(prefix + "_" + static_cast<char>('a' + i), controllable[i]);
        b.add_transition(static_cast<StateIndex>(edges[i].first), ev,
                         static_cast<StateIndex>(edges[i].second));
    }
    b.set_initial(StateIndex{0});
    return std::move(b).build();
}

std::string plant_name(std::size_t i)
{
    return "P" + std::to_string(i + 1);
}

PlantKind random_kind(Rng& rng)
{
    switch (uniform(rng, 0, 2)) {
    case 0: return PlantKind::Sensor;
    case 1: return PlantKind::Actuator;
    default: return PlantKind::Mixed;
    }
}

std::vector<Event> controllable_events(const Automaton& p)
{
    std::vector<Event> out;
    for (const auto& e : p.alphabet())
        if (e.controllable)
            out.push_back(e);
    return out;
}

// DNF over the given plants: 1 or 2 disjuncts, each a conjunction of 1 or 2
// literals on distinct plants. Negation is used only on plants with at
// least two states.
Condition random_condition(Rng& rng, const std::vector<Automaton>& plants,
                           const std::vector<std::size_t>& pool, bool allow_negation = true)
{
    std::vector<Conjunction> disjuncts;
    std::size_t d = uniform(rng, 1, 2);
    for (std::size_t i = 0; i < d; ++i) {
        auto chosen = pool;
        std::shuffle(chosen.begin(), chosen.end(), rng);
        chosen.resize(std::min<std::size_t>(chosen.size(), uniform(rng, 1, 2)));
        Conjunction c;
        for (auto pi : chosen) {
            const auto& p = plants[pi];
            auto q = p.state_name(static_cast<StateIndex>(uniform(rng, 0, p.state_count() - 1)));
            bool neg = allow_negation && p.state_count() > 1 && chance(rng, 0.25);
            c.push_back(Literal::ref(p.name(), q, neg));
        }
        disjuncts.push_back(std::move(c));
    }
    return Condition(std::move(disjuncts));
}

std::string requirement_id(std::size_t i)
{
    return "R" + std::to_string(i + 1);
}

// Plants P1..Pn with the given kinds.
std::vector<Automaton> make_plants(Rng& rng, const std::vector<PlantKind>& kinds)
{
    std::vector<Automaton> plants;
    for (std::size_t i = 0; i < kinds.size(); ++i)
        plants.push_back(cyclic_plant(rng, plant_name(i), uniform(rng, 2, 4), kinds[i]));
    return plants;
}

struct AcyclicBuilder {
    std::vector<Automaton> plants;
    std::vector<std::size_t> position; // topological position of each plant
    std::vector<std::vector<Event>> free; // unused controllable events per plant
    std::vector<StateEventInvariant> requirements;

    AcyclicBuilder(Rng& rng, std::vector<PlantKind> kinds)
        : plants(make_plants(rng, kinds)), position(plants.size())
    {
        std::vector<std::size_t> order(plants.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i = 0; i < order.size(); ++i)
            position[order[i]] = i;
        for (const auto& p : plants)
            free.push_back(controllable_events(p));
    }

    std::optional<Event> take_event(Rng& rng, std::size_t owner)
    {
        if (free[owner].empty())
            return std::nullopt;
        auto i = uniform(rng, 0, free[owner].size() - 1);
        auto e = free[owner][i];
        free[owner].erase(free[owner].begin() + static_cast<std::ptrdiff_t>(i));
        return e;
    }

    // One requirement from a random owner onto plants later in the order.
    bool add_forward(Rng& rng)
    {
        std::vector<std::size_t> owners;
        for (std::size_t i = 0; i < plants.size(); ++i)
            if (!free[i].empty() && position[i] + 1 < plants.size())
                owners.push_back(i);
        if (owners.empty())
            return false;
        auto owner = owners[uniform(rng, 0, owners.size() - 1)];
        std::vector<std::size_t> later;
        for (std::size_t i = 0; i < plants.size(); ++i)
            if (position[i] > position[owner])
                later.push_back(i);
        auto e = *take_event(rng, owner);
        requirements.push_back(
            {requirement_id(requirements.size()), e, random_condition(rng, plants, later)});
        return true;
    }

    ControlProblem finish() { return ControlProblem(std::move(plants), std::move(requirements)); }
};

} // namespace

ControlProblem generate_cnms_instance(std::uint64_t seed, std::size_t plant_count,
                                      std::size_t requirement_count)
{
    Rng rng(seed);
    plant_count = std::max<std::size_t>(plant_count, 1);
    std::vector<PlantKind> kinds(plant_count, PlantKind::Actuator);
    std::size_t sensors = plant_count == 1 ? 0 : uniform(rng, 1, plant_count - 1);
    for (std::size_t i = 0; i < sensors; ++i)
        kinds[i] = PlantKind::Sensor;
    std::shuffle(kinds.begin(), kinds.end(), rng);
    auto plants = make_plants(rng, kinds);

    std::vector<std::size_t> sensor_pool;
    std::vector<Event> events;
    for (std::size_t i = 0; i < plant_count; ++i) {
        if (kinds[i] == PlantKind::Sensor)
            sensor_pool.push_back(i);
        else
            for (auto& e : controllable_events(plants[i]))
                events.push_back(e);
    }
    std::shuffle(events.begin(), events.end(), rng);

    std::vector<StateEventInvariant> requirements;
    if (!sensor_pool.empty())
        for (std::size_t i = 0; i < std::min(requirement_count, events.size()); ++i)
            requirements.push_back(
                {requirement_id(i), events[i], random_condition(rng, plants, sensor_pool)});
    return ControlProblem(std::move(plants), std::move(requirements));
}

ControlProblem generate_acyclic_rcnms_instance(std::uint64_t seed, std::size_t plant_count,
                                               std::size_t requirement_count)
{
    Rng rng(seed);
    plant_count = std::max<std::size_t>(plant_count, 1);
    std::vector<PlantKind> kinds;
    for (std::size_t i = 0; i < plant_count; ++i)
        kinds.push_back(random_kind(rng));
    AcyclicBuilder b(rng, std::move(kinds));
    for (std::size_t i = 0; i < requirement_count; ++i)
        if (!b.add_forward(rng))
            break;
    return b.finish();
}

ControlProblem generate_cyclic_rcnms_instance(std::uint64_t seed, std::size_t plant_count,
                                              std::size_t requirement_count)
{
    Rng rng(seed);
    plant_count = std::max<std::size_t>(plant_count, 2);
    std::vector<PlantKind> kinds;
    for (std::size_t i = 0; i < plant_count; ++i)
        kinds.push_back(i < 2 ? PlantKind::Actuator : random_kind(rng));
    AcyclicBuilder b(rng, std::move(kinds));

    // Planted 2-cycles between plants that still have controllable events.
    std::size_t cycles = plant_count >= 4 ? uniform(rng, 1, 2) : 1;
    for (std::size_t c = 0; c < cycles; ++c) {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < plant_count; ++i)
            if (!b.free[i].empty())
                candidates.push_back(i);
        if (candidates.size() < 2)
            break;
        std::shuffle(candidates.begin(), candidates.end(), rng);
        auto x = candidates[0], y = candidates[1];
        for (auto [owner, other] : {std::pair{x, y}, std::pair{y, x}}) {
            auto e = *b.take_event(rng, owner);
            b.requirements.push_back({requirement_id(b.requirements.size()), e,
                                      random_condition(rng, b.plants, {other}, false)});
        }
    }
    while (b.requirements.size() < requirement_count)
        if (!b.add_forward(rng))
            break;
    return b.finish();
}

ControlProblem generate_small_instance(std::uint64_t seed, std::size_t max_states)
{
    Rng rng(seed);
    max_states = std::max<std::size_t>(max_states, 1);
    for (;;) {
        // Plant sizes whose product stays within max_states.
        std::vector<std::size_t> sizes;
        std::size_t product = 1;
        std::size_t count = uniform(rng, 1, 3);
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t room = max_states / product;
            if (room < 1 || (i > 0 && room < 2))
                break;
            auto s = uniform(rng, i > 0 ? 2 : 1, std::min<std::size_t>(room, 5));
            sizes.push_back(s);
            product *= s;
        }

        std::vector<Automaton> plants;
        bool trapped = false;
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            AutomatonBuilder b(plant_name(i));
            // Optional trap: a dead, unmarked last state entered only by
            // controllable events, so synthesis has something to cut.
            std::size_t trap = sizes[i] > 1 && chance(rng, 0.35) ? sizes[i] - 1 : SIZE_MAX;
            trapped |= trap != SIZE_MAX;
            for (std::size_t q = 0; q < sizes[i]; ++q)
                b.add_state(state_name(q), q != trap && chance(rng, q == 0 ? 0.8 : 0.4));
            std::size_t events = uniform(rng, 1, 3);
            for (std::size_t e = 0; e < events; ++e) {
                bool controllable = chance(rng, 0.6);
                auto ev = b.add_event("e" + std::to_string(i + 1) + static_cast<char>('a' + e), controllable);
                for (std::size_t q = 0; q < sizes[i]; ++q) {
                    if (q == trap || !chance(rng, 0.7))
                        continue;
                    auto to = uniform(rng, 0, sizes[i] - 1);
                    if (to == trap && !controllable)
                        to = 0;
                    b.add_transition(static_cast<StateIndex>(q), ev, static_cast<StateIndex>(to));
                }
            }
            b.set_initial(StateIndex{0});
            plants.push_back(std::move(b).build());
        }

        std::vector<std::size_t> all(plants.size());
        std::iota(all.begin(), all.end(), 0);
        std::vector<StateEventInvariant> requirements;
        std::size_t rcount = uniform(rng, 1, 3);
        for (std::size_t r = 0; r < rcount; ++r) {
            const auto& owner = plants[uniform(rng, 0, plants.size() - 1)];
            auto ev = owner.event(static_cast<EventIndex>(uniform(rng, 0, owner.event_count() - 1)));
            // Requirements on uncontrollable events mostly empty the supervisor.
            if (!ev.controllable && chance(rng, 0.7)) {
                for (const auto& e : owner.alphabet())
                    if (e.controllable)
                        ev = e;
            }
            auto cond = chance(rng, 0.1) ? Condition({{Literal::falsity()}})
                                         : random_condition(rng, plants, all);
            requirements.push_back({requirement_id(r), ev, std::move(cond)});
        }

        ControlProblem cp(std::move(plants), std::move(requirements));
        // Keep the exhaustive search affordable but not trivial. A blocking
        // plant mostly yields an empty supervisor, so those are kept rarely.
        auto composed = compose_all(cp.plants());
        std::size_t controllable = 0;
        for (StateIndex s = 0; s < composed.state_count(); ++s)
            for (const auto& e : composed.out(s))
                controllable += composed.event(e.event).controllable ? 1 : 0;
        bool affordable = composed.state_count() <= max_states && controllable <= 12;
        bool interesting = controllable >= std::min<std::size_t>(2, max_states) &&
                           (trapped || is_nonblocking(composed) || chance(rng, 0.15));
        if (affordable && interesting)
            return cp;
    }
}

} // namespace decsynth

#include "decsynth/requirements.hpp"

#include <unordered_map>

namespace decsynth {

Condition::Condition(std::vector<Conjunction> disjuncts) : disjuncts_(std::move(disjuncts))
{
    if (disjuncts_.empty())
        throw Error(ErrorCode::InvalidModel, "condition needs at least one disjunct");
    for (const auto& conj : disjuncts_)
        if (conj.empty())
            throw Error(ErrorCode::InvalidModel, "empty conjunction in condition");
}

namespace {

bool eval_literal(const Literal& lit, const GlobalState& gs)
{
    switch (lit.kind) {
    case Literal::Kind::True: return true;
    case Literal::Kind::False: return false;
    case Literal::Kind::StateRef: break;
    }
    auto it = gs.find(lit.plant);
    if (it == gs.end())
        throw Error(ErrorCode::UnknownReference,
                    "condition references plant '" + lit.plant + "' absent from the global state");
    bool holds = it->second == lit.state;
    return lit.negated ? !holds : holds;
}

} // namespace

bool eval_condition(const Condition& c, const GlobalState& gs)
{
    for (const auto& conj : c.disjuncts()) {
        bool all = true;
        for (const auto& lit : conj) {
            if (!eval_literal(lit, gs)) {
                all = false;
                break;
            }
        }
        if (all)
            return true;
    }
    return false;
}

std::set<std::string> condition_plants(const StateEventInvariant& r)
{
    std::set<std::string> plants;
    for (const auto& conj : r.condition.disjuncts())
        for (const auto& lit : conj)
            if (lit.kind == Literal::Kind::StateRef)
                plants.insert(lit.plant);
    return plants;
}

GlobalState decode_global_state(std::string_view state, std::span<const std::string> plant_names)
{
    GlobalState gs;
    if (plant_names.size() == 1) {
        gs.emplace(plant_names[0], std::string(state));
        return gs;
    }
    auto parts = split_tuple(state);
    if (!parts || parts->size() != plant_names.size())
        throw Error(ErrorCode::UnknownReference,
                    "state '" + std::string(state) + "' does not decode over " +
                        std::to_string(plant_names.size()) + " plants");
    for (std::size_t i = 0; i < plant_names.size(); ++i)
        gs.emplace(plant_names[i], (*parts)[i]);
    return gs;
}

Automaton compose_plant_with_requirements(const Automaton& plant,
                                          std::span<const StateEventInvariant> requirements,
                                          std::span<const std::string> plant_names)
{
    std::unordered_map<EventIndex, std::vector<const StateEventInvariant*>> guards;
    for (const auto& r : requirements) {
        auto e = plant.find_event(r.event.name);
        if (!e)
            throw Error(ErrorCode::UnknownReference,
                        "requirement " + r.id + " restricts event '" + r.event.name +
                            "' which is not in the plant alphabet");
        guards[*e].push_back(&r);
    }

    AutomatonBuilder b(plant.name());
    for (const auto& e : plant.alphabet())
        b.add_event(e);
    for (StateIndex s = 0; s < plant.state_count(); ++s)
        b.add_state(plant.state_name(s), plant.is_marked(s));
    b.set_initial(plant.initial());

    for (StateIndex s = 0; s < plant.state_count(); ++s) {
        std::optional<GlobalState> gs;
        for (const auto& edge : plant.out(s)) {
            auto it = guards.find(edge.event);
            bool enabled = true;
            if (it != guards.end()) {
                if (!gs)
                    gs = decode_global_state(plant.state_name(s), plant_names);
                for (const auto* r : it->second) {
                    if (!eval_condition(r->condition, *gs)) {
                        enabled = false;
                        break;
                    }
                }
            }
            if (enabled)
                b.add_transition(s, edge.event, edge.target);
        }
    }
    return reachable_part(std::move(b).build());
}

std::string to_string(const Condition& c)
{
    std::string out;
    bool first_disjunct = true;
    for (const auto& conj : c.disjuncts()) {
        if (!first_disjunct)
            out += " or ";
        first_disjunct = false;
        bool first_literal = true;
        for (const auto& lit : conj) {
            if (!first_literal)
                out += " and ";
            first_literal = false;
            switch (lit.kind) {
            case Literal::Kind::True: out += "T"; break;
            case Literal::Kind::False: out += "F"; break;
            case Literal::Kind::StateRef:
                if (lit.negated)
                    out += "not ";
                out += lit.plant + "." + lit.state;
                break;
            }
        }
    }
    return out;
}

std::string to_string(const StateEventInvariant& r)
{
    return r.event.name + " needs " + to_string(r.condition);
}

} // namespace decsynth

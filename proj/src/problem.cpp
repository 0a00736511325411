#include "decsynth/problem.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace decsynth {

ControlProblem::ControlProblem(std::vector<Automaton> plants,
                               std::vector<StateEventInvariant> requirements)
    : plants_(std::move(plants)), requirements_(std::move(requirements))
{
    if (plants_.empty())
        throw Error(ErrorCode::InvalidModel, "a control problem needs at least one plant");

    std::set<std::string> names;
    std::unordered_map<std::string, bool> flags;
    for (const auto& p : plants_) {
        if (!names.insert(p.name()).second)
            throw Error(ErrorCode::InvalidModel, "duplicate plant name '" + p.name() + "'");
        for (const auto& e : p.alphabet()) {
            auto [it, inserted] = flags.emplace(e.name, e.controllable);
            if (!inserted && it->second != e.controllable)
                throw Error(ErrorCode::ControllabilityConflict,
                            "event '" + e.name + "' has conflicting controllability flags");
        }
    }

    std::set<std::string> ids;
    for (const auto& r : requirements_) {
        if (r.id.empty())
            throw Error(ErrorCode::InvalidModel, "requirement with empty id");
        if (!ids.insert(r.id).second)
            throw Error(ErrorCode::InvalidModel, "duplicate requirement id '" + r.id + "'");
        auto flag = flags.find(r.event.name);
        if (flag == flags.end())
            throw Error(ErrorCode::UnknownReference,
                        "requirement " + r.id + " restricts unknown event '" + r.event.name + "'");
        if (flag->second != r.event.controllable)
            throw Error(ErrorCode::ControllabilityConflict,
                        "requirement " + r.id + " disagrees on controllability of '" +
                            r.event.name + "'");
        for (const auto& conj : r.condition.disjuncts()) {
            for (const auto& lit : conj) {
                if (lit.kind != Literal::Kind::StateRef)
                    continue;
                auto pi = find_plant(lit.plant);
                if (!pi)
                    throw Error(ErrorCode::UnknownReference,
                                "requirement " + r.id + " references unknown plant '" + lit.plant + "'");
                if (!plants_[*pi].has_state(lit.state))
                    throw Error(ErrorCode::UnknownReference,
                                "requirement " + r.id + " references unknown state '" + lit.plant +
                                    "." + lit.state + "'");
            }
        }
    }
}

std::optional<PlantIndex> ControlProblem::find_plant(std::string_view name) const
{
    for (PlantIndex i = 0; i < plants_.size(); ++i)
        if (plants_[i].name() == name)
            return i;
    return std::nullopt;
}

std::vector<std::string> ControlProblem::plant_names() const
{
    std::vector<std::string> names;
    names.reserve(plants_.size());
    for (const auto& p : plants_)
        names.push_back(p.name());
    return names;
}

std::vector<PlantIndex> ControlProblem::owners(std::string_view event) const
{
    std::vector<PlantIndex> result;
    for (PlantIndex i = 0; i < plants_.size(); ++i)
        if (plants_[i].has_event(event))
            result.push_back(i);
    return result;
}

const char* to_string(PlantKind kind)
{
    switch (kind) {
    case PlantKind::Sensor: return "sensor";
    case PlantKind::Actuator: return "actuator";
    case PlantKind::Mixed: return "mixed";
    }
    return "?";
}

PlantKind classify_plant(const Automaton& p)
{
    bool any_controllable = false;
    bool any_uncontrollable = false;
    for (const auto& e : p.alphabet()) {
        if (e.controllable)
            any_controllable = true;
        else
            any_uncontrollable = true;
    }
    if (!any_controllable)
        return PlantKind::Sensor;
    if (!any_uncontrollable)
        return PlantKind::Actuator;
    return PlantKind::Mixed;
}

bool is_product_system(const ControlProblem& cp)
{
    std::set<std::string> seen;
    for (const auto& p : cp.plants())
        for (const auto& e : p.alphabet())
            if (!seen.insert(e.name).second)
                return false;
    return true;
}

const char* to_string(Property p)
{
    switch (p) {
    case Property::P1: return "P1";
    case Property::P2: return "P2";
    case Property::P3a: return "P3a";
    case Property::P3b: return "P3b";
    case Property::P3c: return "P3c";
    case Property::P3d: return "P3d";
    case Property::P3e: return "P3e";
    case Property::P3f: return "P3f";
    case Property::P3g: return "P3g";
    }
    return "?";
}

namespace {

PropertyReport check_properties(const ControlProblem& cp, bool sensor_conditions)
{
    PropertyReport report;
    const auto& plants = cp.plants();

    // Property 1: pairwise disjoint alphabets.
    std::map<std::string, std::string> owner;
    for (const auto& p : plants) {
        std::vector<std::string> shared;
        for (const auto& e : p.alphabet()) {
            auto [it, inserted] = owner.emplace(e.name, p.name());
            if (!inserted)
                shared.push_back(e.name + " (with " + it->second + ")");
        }
        if (!shared.empty()) {
            std::string msg = "shares events with other plants:";
            for (const auto& s : shared)
                msg += " " + s;
            report.violations.push_back({Property::P1, p.name(), msg});
        }
    }

    // Property 2: strongly connected with at least one marked state.
    for (const auto& p : plants) {
        std::string msg;
        if (!is_strongly_connected(p))
            msg = "not strongly connected";
        if (p.marked_states().empty())
            msg += std::string(msg.empty() ? "" : "; ") + "no marked state";
        if (!msg.empty())
            report.violations.push_back({Property::P2, p.name(), msg});
    }

    std::map<std::string, int> per_event;
    for (const auto& r : cp.requirements())
        ++per_event[r.event.name];

    for (const auto& r : cp.requirements()) {
        if (!r.event.controllable)
            report.violations.push_back(
                {Property::P3b, r.id, "restricted event '" + r.event.name + "' is uncontrollable"});

        if (per_event[r.event.name] > 1)
            report.violations.push_back(
                {Property::P3c, r.id, "another requirement also restricts '" + r.event.name + "'"});

        bool constant = false;
        bool repeated = false;
        std::set<std::string> negated_single;
        std::set<std::string> non_sensor;
        for (const auto& conj : r.condition.disjuncts()) {
            std::set<std::string> in_conj;
            for (const auto& lit : conj) {
                if (lit.kind != Literal::Kind::StateRef) {
                    constant = true;
                    continue;
                }
                if (!in_conj.insert(lit.plant).second)
                    repeated = true;
                const auto& p = cp.plant(*cp.find_plant(lit.plant));
                if (p.state_count() == 1) {
                    if (lit.negated)
                        negated_single.insert(lit.plant);
                    else
                        report.notes.push_back("requirement " + r.id + ": literal " + lit.plant +
                                               "." + lit.state +
                                               " refers to a single-state plant and is always true");
                }
                if (classify_plant(p) != PlantKind::Sensor)
                    non_sensor.insert(lit.plant);
            }
        }
        if (constant)
            report.violations.push_back(
                {Property::P3d, r.id, "condition contains a constant literal instead of a state reference"});
        if (repeated)
            report.violations.push_back(
                {Property::P3e, r.id, "a conjunction references the same plant more than once"});
        for (const auto& name : negated_single)
            report.violations.push_back(
                {Property::P3f, r.id, "negated literal on single-state plant " + name});
        if (sensor_conditions) {
            for (const auto& name : non_sensor)
                report.violations.push_back(
                    {Property::P3g, r.id, "condition references non-sensor plant " + name});
        }
    }
    return report;
}

} // namespace

PropertyReport check_cnms(const ControlProblem& cp)
{
    return check_properties(cp, true);
}

PropertyReport check_rcnms(const ControlProblem& cp)
{
    return check_properties(cp, false);
}

} // namespace decsynth

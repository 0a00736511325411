#pragma once

#include <optional>
#include <string>
#include <vector>

#include "decsynth/automaton.hpp"
#include "decsynth/requirements.hpp"

namespace decsynth {

using PlantIndex = std::size_t;

/// A modular plant together with its state-event invariant requirements.
///
/// The constructor enforces the well-formedness assumptions: at least one
/// plant, unique plant names and requirement ids, consistent controllability
/// flags for shared event names, every requirement event in some plant
/// alphabet, and every state reference resolvable. Violations throw
/// Error(InvalidModel) or Error(UnknownReference).
class ControlProblem {
public:
    ControlProblem(std::vector<Automaton> plants, std::vector<StateEventInvariant> requirements);

    const std::vector<Automaton>& plants() const { return plants_; }
    const std::vector<StateEventInvariant>& requirements() const { return requirements_; }
    const Automaton& plant(PlantIndex i) const { return plants_.at(i); }
    std::size_t plant_count() const { return plants_.size(); }

    std::optional<PlantIndex> find_plant(std::string_view name) const;
    std::vector<std::string> plant_names() const;

    /// Plants whose alphabet contains the named event, in plant order.
    std::vector<PlantIndex> owners(std::string_view event) const;

    friend bool operator==(const ControlProblem&, const ControlProblem&) = default;

private:
    std::vector<Automaton> plants_;
    std::vector<StateEventInvariant> requirements_;
};

enum class PlantKind { Sensor, Actuator, Mixed };

const char* to_string(PlantKind kind);

PlantKind classify_plant(const Automaton& p);

bool is_product_system(const ControlProblem& cp);

/// Tags of the structural properties checked by check_cnms / check_rcnms.
enum class Property { P1, P2, P3a, P3b, P3c, P3d, P3e, P3f, P3g };

const char* to_string(Property p);

struct Violation {
    Property property;
    std::string subject; // plant name or requirement id
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct PropertyReport {
    std::vector<Violation> violations;
    /// Informational remarks that do not affect satisfaction.
    std::vector<std::string> notes;

    bool satisfied() const { return violations.empty(); }
};

/// Structural CNMS check. Never builds a product state space. Violations are
/// ordered by property, then plant order, then requirement order.
PropertyReport check_cnms(const ControlProblem& cp);

/// As check_cnms with the sensor-only-condition property (P3g) skipped.
PropertyReport check_rcnms(const ControlProblem& cp);

} // namespace decsynth

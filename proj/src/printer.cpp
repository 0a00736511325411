#include <sstream>

#include "decsynth/model_io.hpp"

namespace decsynth {

namespace {

void print_names(std::ostream& out, const char* keyword, const std::vector<std::string>& names)
{
    out << "  " << keyword;
    for (const auto& n : names)
        out << ' ' << format_identifier(n);
    out << '\n';
}

std::string print_literal(const Literal& l)
{
    switch (l.kind) {
    case Literal::Kind::True: return "T";
    case Literal::Kind::False: return "F";
    case Literal::Kind::StateRef: break;
    }
    return std::string(l.negated ? "not " : "") + format_identifier(l.plant) + "." +
           format_identifier(l.state);
}

} // namespace

std::string print_plant(const Automaton& a)
{
    std::ostringstream out;
    out << "plant " << format_identifier(a.name()) << " {\n";
    print_names(out, "states", a.states());
    // Always explicit: an omitted list would default to the initial state.
    std::vector<std::string> marked;
    for (auto s : a.marked_states())
        marked.push_back(a.state_name(s));
    print_names(out, "marked", marked);
    out << "  initial " << format_identifier(a.state_name(a.initial())) << '\n';

    std::vector<std::string> c, u;
    for (const auto& e : a.alphabet())
        (e.controllable ? c : u).push_back(e.name);
    if (!c.empty())
        print_names(out, "controllable", c);
    if (!u.empty())
        print_names(out, "uncontrollable", u);

    for (StateIndex s = 0; s < a.state_count(); ++s)
        for (const auto& e : a.out(s))
            out << "  trans " << format_identifier(a.state_name(s)) << " - "
                << format_identifier(a.event(e.event).name) << " -> "
                << format_identifier(a.state_name(e.target)) << '\n';
    out << "}\n";
    return out.str();
}

std::string pretty_print(const ControlProblem& cp)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < cp.plant_count(); ++i) {
        if (i)
            out << '\n';
        out << print_plant(cp.plant(i));
    }
    if (!cp.requirements().empty())
        out << '\n';
    for (const auto& r : cp.requirements()) {
        out << "requirement " << format_identifier(r.id) << ": " << format_identifier(r.event.name)
            << " needs ";
        const auto& d = r.condition.disjuncts();
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (i)
                out << " or ";
            for (std::size_t j = 0; j < d[i].size(); ++j) {
                if (j)
                    out << " and ";
                out << print_literal(d[i][j]);
            }
        }
        out << '\n';
    }
    return out.str();
}

} // namespace decsynth

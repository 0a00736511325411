#include "product_space.hpp"

#include <algorithm>
#include <deque>

namespace decsynth::detail {

ProductSpace::ProductSpace(const ControlProblem& cp) : cp_(cp)
{
    std::unordered_map<std::string, EventIndex> index;
    local_to_global_.resize(cp.plant_count());
    for (std::size_t i = 0; i < cp.plant_count(); ++i) {
        const auto& p = cp.plant(i);
        for (EventIndex e = 0; e < p.event_count(); ++e) {
            auto [it, inserted] =
                index.emplace(p.event(e).name, static_cast<EventIndex>(events_.size()));
            if (inserted) {
                events_.push_back(p.event(e));
                owners_.emplace_back();
            }
            owners_[it->second].emplace_back(i, e);
            local_to_global_[i].push_back(it->second);
        }
    }

    guards_.resize(events_.size());
    for (const auto& r : cp.requirements()) {
        CompiledCondition cond;
        for (const auto& conj : r.condition.disjuncts()) {
            std::vector<CompiledLiteral> c;
            for (const auto& lit : conj) {
                CompiledLiteral cl{lit.kind, 0, 0, lit.negated};
                if (lit.kind == Literal::Kind::StateRef) {
                    auto pi = *cp.find_plant(lit.plant);
                    cl.plant = static_cast<std::uint32_t>(pi);
                    cl.state = *cp.plant(pi).find_state(lit.state);
                }
                c.push_back(cl);
            }
            cond.push_back(std::move(c));
        }
        guards_[index.at(r.event.name)].push_back(std::move(cond));
    }
}

bool ProductSpace::guard_holds(EventIndex e, const StateIndex* tuple) const
{
    for (const auto& cond : guards_[e]) {
        bool any = false;
        for (const auto& conj : cond) {
            bool all = true;
            for (const auto& lit : conj) {
                bool v;
                switch (lit.kind) {
                case Literal::Kind::True: v = true; break;
                case Literal::Kind::False: v = false; break;
                default: v = (tuple[lit.plant] == lit.state) != lit.negated; break;
                }
                if (!v) {
                    all = false;
                    break;
                }
            }
            if (all) {
                any = true;
                break;
            }
        }
        if (!any)
            return false;
    }
    return true;
}

void ProductSpace::enabled(const StateIndex* tuple,
                           std::vector<std::pair<EventIndex, std::vector<StateIndex>>>& out,
                           std::vector<EventIndex>& scratch) const
{
    const std::size_t n = cp_.plant_count();
    out.clear();
    scratch.clear();
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& edge : cp_.plant(i).out(tuple[i]))
            scratch.push_back(local_to_global_[i][edge.event]);
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());

    for (EventIndex g : scratch) {
        std::vector<StateIndex> next(tuple, tuple + n);
        bool ok = true;
        for (const auto& [comp, local] : owners_[g]) {
            auto t = cp_.plant(comp).step(tuple[comp], local);
            if (!t) {
                ok = false;
                break;
            }
            next[comp] = *t;
        }
        if (ok)
            out.emplace_back(g, std::move(next));
    }
}

namespace {

std::string key_of(const StateIndex* t, std::size_t n)
{
    return std::string(reinterpret_cast<const char*>(t), n * sizeof(StateIndex));
}

} // namespace

ProductSpace::Graph ProductSpace::explore(bool apply_requirements, std::size_t bound) const
{
    const std::size_t n = cp_.plant_count();
    Graph g;
    g.width = n;
    std::unordered_map<std::string, StateIndex> index;
    std::deque<StateIndex> queue;

    auto intern = [&](const StateIndex* t) -> StateIndex {
        auto key = key_of(t, n);
        auto it = index.find(key);
        if (it != index.end())
            return it->second;
        if (g.size() >= bound)
            throw Error(ErrorCode::SizeBoundExceeded,
                        "explored product exceeds " + std::to_string(bound) + " states");
        auto id = static_cast<StateIndex>(g.size());
        index.emplace(std::move(key), id);
        g.tuples.insert(g.tuples.end(), t, t + n);
        g.edges.emplace_back();
        g.requirement_blocks_uncontrollable.push_back(false);
        bool marked = true;
        for (std::size_t i = 0; i < n; ++i)
            marked = marked && cp_.plant(i).is_marked(t[i]);
        g.marked.push_back(marked);
        queue.push_back(id);
        return id;
    };

    std::vector<StateIndex> init(n);
    for (std::size_t i = 0; i < n; ++i)
        init[i] = cp_.plant(i).initial();
    intern(init.data());

    std::vector<std::pair<EventIndex, std::vector<StateIndex>>> moves;
    std::vector<EventIndex> scratch;
    std::vector<StateIndex> current(n);
    while (!queue.empty()) {
        StateIndex id = queue.front();
        queue.pop_front();
        std::copy_n(g.tuple(id), n, current.begin());
        enabled(current.data(), moves, scratch);
        for (auto& [ev, next] : moves) {
            if (apply_requirements && !guard_holds(ev, current.data())) {
                if (!events_[ev].controllable)
                    g.requirement_blocks_uncontrollable[id] = true;
                continue;
            }
            StateIndex target = intern(next.data());
            g.edges[id].push_back(Edge{ev, target});
        }
    }
    return g;
}

std::size_t ProductSpace::count_plant_states(std::size_t bound) const
{
    return explore(false, bound).size();
}

std::string ProductSpace::state_name(const StateIndex* tuple) const
{
    const std::size_t n = cp_.plant_count();
    if (n == 1)
        return cp_.plant(0).state_name(tuple[0]);
    std::vector<std::string> parts;
    parts.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        parts.push_back(cp_.plant(i).state_name(tuple[i]));
    return make_tuple_name(parts);
}

} // namespace decsynth::detail

#include "decsynth/depgraph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace decsynth {

DependencyGraph build_graph(const ControlProblem& cp)
{
    DependencyGraph g;
    g.vertices = cp.plant_names();
    for (const auto& r : cp.requirements()) {
        auto owners = cp.owners(r.event.name);
        if (owners.size() != 1)
            throw Error(ErrorCode::AmbiguousOwner,
                        "event '" + r.event.name + "' of requirement " + r.id + " is owned by " +
                            std::to_string(owners.size()) + " plants");
        VertexSet targets;
        for (const auto& name : condition_plants(r))
            targets.push_back(*cp.find_plant(name));
        std::sort(targets.begin(), targets.end());
        for (auto t : targets)
            g.edges.push_back({owners.front(), t, r.id});
    }
    return g;
}

namespace {

std::vector<std::vector<PlantIndex>> successors(const DependencyGraph& g)
{
    std::vector<std::vector<PlantIndex>> succ(g.vertex_count());
    for (const auto& e : g.edges)
        succ[e.init].push_back(e.ter);
    for (auto& s : succ) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return succ;
}

} // namespace

std::vector<VertexSet> strongly_connected_components(const DependencyGraph& g)
{
    const std::size_t n = g.vertex_count();
    const auto succ = successors(g);
    constexpr std::size_t unvisited = SIZE_MAX;

    std::vector<std::size_t> index(n, unvisited);
    std::vector<std::size_t> lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<PlantIndex> stack;
    std::vector<VertexSet> components;
    std::size_t counter = 0;

    // Explicit DFS frames: (vertex, position in its successor list).
    std::vector<std::pair<PlantIndex, std::size_t>> frames;
    for (PlantIndex root = 0; root < n; ++root) {
        if (index[root] != unvisited)
            continue;
        frames.emplace_back(root, 0);
        index[root] = lowlink[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            if (pos < succ[v].size()) {
                PlantIndex w = succ[v][pos++];
                if (index[w] == unvisited) {
                    index[w] = lowlink[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
                continue;
            }
            PlantIndex done = v;
            frames.pop_back();
            if (!frames.empty()) {
                PlantIndex parent = frames.back().first;
                lowlink[parent] = std::min(lowlink[parent], lowlink[done]);
            }
            if (lowlink[done] == index[done]) {
                VertexSet component;
                PlantIndex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    component.push_back(w);
                } while (w != done);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
        }
    }
    std::sort(components.begin(), components.end(),
              [](const VertexSet& a, const VertexSet& b) { return a.front() < b.front(); });
    return components;
}

std::vector<VertexSet> cyclic_sccs(const DependencyGraph& g)
{
    std::vector<bool> self_loop(g.vertex_count(), false);
    for (const auto& e : g.edges)
        if (e.init == e.ter)
            self_loop[e.init] = true;

    std::vector<VertexSet> result;
    for (auto& c : strongly_connected_components(g))
        if (c.size() >= 2 || self_loop[c.front()])
            result.push_back(std::move(c));
    return result;
}

bool is_acyclic_selfloop_free(const DependencyGraph& g)
{
    return cyclic_sccs(g).empty();
}

VertexSet extend(const DependencyGraph& g, const VertexSet& phi)
{
    std::vector<std::vector<PlantIndex>> pred(g.vertex_count());
    for (const auto& e : g.edges)
        pred[e.ter].push_back(e.init);

    std::vector<bool> in(g.vertex_count(), false);
    std::deque<PlantIndex> queue;
    for (auto v : phi) {
        if (v >= g.vertex_count())
            throw Error(ErrorCode::OutOfRange, "vertex " + std::to_string(v) + " out of range");
        if (!in[v]) {
            in[v] = true;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        for (auto p : pred[v]) {
            if (!in[p]) {
                in[p] = true;
                queue.push_back(p);
            }
        }
    }
    VertexSet result;
    for (PlantIndex v = 0; v < in.size(); ++v)
        if (in[v])
            result.push_back(v);
    return result;
}

std::vector<VertexClass> quotient(const std::vector<VertexSet>& vsets)
{
    std::vector<std::size_t> parent(vsets.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };

    for (std::size_t i = 0; i < vsets.size(); ++i) {
        for (std::size_t j = i + 1; j < vsets.size(); ++j) {
            VertexSet common;
            std::set_intersection(vsets[i].begin(), vsets[i].end(), vsets[j].begin(),
                                  vsets[j].end(), std::back_inserter(common));
            if (!common.empty()) {
                auto a = find(i), b = find(j);
                if (a != b)
                    parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }

    std::vector<VertexClass> classes;
    std::vector<std::size_t> slot(vsets.size(), SIZE_MAX);
    for (std::size_t i = 0; i < vsets.size(); ++i) {
        auto root = find(i);
        if (slot[root] == SIZE_MAX) {
            slot[root] = classes.size();
            classes.emplace_back();
        }
        auto& cls = classes[slot[root]];
        cls.members.push_back(i);
        VertexSet merged;
        std::set_union(cls.vertices.begin(), cls.vertices.end(), vsets[i].begin(), vsets[i].end(),
                       std::back_inserter(merged));
        cls.vertices = std::move(merged);
    }
    return classes;
}

SccAnalysis analyze(const DependencyGraph& g)
{
    SccAnalysis a;
    a.phis = cyclic_sccs(g);
    for (const auto& phi : a.phis)
        a.extended.push_back(extend(g, phi));
    a.partition = quotient(a.extended);

    std::vector<bool> covered(g.vertex_count(), false);
    for (const auto& cls : a.partition)
        for (auto v : cls.vertices)
            covered[v] = true;
    for (PlantIndex v = 0; v < covered.size(); ++v)
        if (!covered[v])
            a.residual.push_back(v);
    return a;
}

namespace {

std::vector<bool> keep_mask(const ControlProblem& cp, const VertexSet& keep)
{
    std::vector<bool> kept(cp.plant_count(), false);
    for (auto v : keep) {
        if (v >= cp.plant_count())
            throw Error(ErrorCode::OutOfRange,
                        "plant index " + std::to_string(v) + " out of range");
        kept[v] = true;
    }
    return kept;
}

bool owned_by_kept(const ControlProblem& cp, const std::vector<bool>& kept,
                   const StateEventInvariant& r)
{
    for (auto o : cp.owners(r.event.name))
        if (kept[o])
            return true;
    return false;
}

} // namespace

ControlProblem simplify_partial_problem(const ControlProblem& cp, const VertexSet& keep)
{
    auto kept = keep_mask(cp, keep);

    std::vector<Automaton> plants;
    for (PlantIndex i = 0; i < cp.plant_count(); ++i)
        if (kept[i])
            plants.push_back(cp.plant(i));

    std::vector<StateEventInvariant> requirements;
    for (const auto& r : cp.requirements()) {
        if (!owned_by_kept(cp, kept, r))
            continue;
        std::vector<Conjunction> disjuncts;
        for (const auto& conj : r.condition.disjuncts()) {
            Conjunction c;
            for (const auto& lit : conj) {
                if (lit.kind == Literal::Kind::StateRef && !kept[*cp.find_plant(lit.plant)])
                    c.push_back(Literal::truth());
                else
                    c.push_back(lit);
            }
            disjuncts.push_back(std::move(c));
        }
        requirements.push_back({r.id, r.event, Condition(std::move(disjuncts))});
    }
    return ControlProblem(std::move(plants), std::move(requirements));
}

std::vector<std::string> weakened_negations(const ControlProblem& cp, const VertexSet& keep)
{
    auto kept = keep_mask(cp, keep);
    std::vector<std::string> notes;
    for (const auto& r : cp.requirements()) {
        if (!owned_by_kept(cp, kept, r))
            continue;
        for (const auto& conj : r.condition.disjuncts())
            for (const auto& lit : conj)
                if (lit.kind == Literal::Kind::StateRef && lit.negated &&
                    !kept[*cp.find_plant(lit.plant)])
                    notes.push_back("requirement " + r.id + ": literal not " + lit.plant + "." +
                                    lit.state + " replaced by T");
    }
    return notes;
}

namespace {

std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string emit_dot(const DependencyGraph& g, const SccAnalysis* analysis)
{
    const std::size_t n = g.vertex_count();
    // Per vertex: index of its component (red), of its class (purple), or none.
    std::vector<std::size_t> phi_of(n, SIZE_MAX);
    std::vector<std::size_t> class_of(n, SIZE_MAX);
    if (analysis) {
        for (std::size_t i = 0; i < analysis->phis.size(); ++i)
            for (auto v : analysis->phis[i])
                phi_of[v] = i;
        for (std::size_t i = 0; i < analysis->partition.size(); ++i)
            for (auto v : analysis->partition[i].vertices)
                class_of[v] = i;
    }
    auto vertex_color = [&](PlantIndex v) {
        if (phi_of[v] != SIZE_MAX)
            return kRed;
        if (class_of[v] != SIZE_MAX)
            return kPurple;
        return kBlue;
    };
    auto edge_color = [&](const DependencyEdge& e) {
        if (phi_of[e.init] != SIZE_MAX && phi_of[e.init] == phi_of[e.ter])
            return kRed;
        if (class_of[e.init] != SIZE_MAX && class_of[e.init] == class_of[e.ter])
            return kPurple;
        return kBlue;
    };

    std::ostringstream out;
    out << "digraph dependencies {\n";
    out << "  node [shape=circle];\n";
    for (PlantIndex v = 0; v < n; ++v) {
        out << "  " << quoted(g.vertices[v]);
        if (analysis)
            out << " [color=\"" << vertex_color(v) << "\", fontcolor=\"" << vertex_color(v)
                << "\"]";
        out << ";\n";
    }
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        out << "  " << quoted(g.vertices[e.init]) << " -> " << quoted(g.vertices[e.ter])
            << " [id=\"e" << (i + 1) << "\", label=" << quoted(e.requirement);
        if (analysis)
            out << ", color=\"" << edge_color(e) << "\"";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace decsynth

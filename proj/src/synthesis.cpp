#include "decsynth/synthesis.hpp"

#include <chrono>
#include <deque>
#include <future>

#include "product_space.hpp"

namespace decsynth {

SynthesisResult sup_cn(const ControlProblem& cp, const SynthesisOptions& options)
{
    auto started = std::chrono::steady_clock::now();
    detail::ProductSpace space(cp);
    auto graph = space.explore(true, options.bound);
    const std::size_t n = graph.size();

    std::vector<std::vector<StateIndex>> pred(n);
    for (StateIndex s = 0; s < n; ++s)
        for (const auto& e : graph.edges[s])
            pred[e.target].push_back(s);

    std::vector<bool> alive(n, true);
    std::size_t iterations = 0;
    for (bool changed = true; changed;) {
        ++iterations;
        changed = false;

        // Remove states that cannot prevent an uncontrollable exit from the
        // surviving set, until none is left.
        for (bool removed = true; removed;) {
            removed = false;
            for (StateIndex s = 0; s < n; ++s) {
                if (!alive[s])
                    continue;
                bool bad = graph.requirement_blocks_uncontrollable[s];
                for (const auto& e : graph.edges[s]) {
                    if (bad)
                        break;
                    bad = !space.events()[e.event].controllable && !alive[e.target];
                }
                if (bad) {
                    alive[s] = false;
                    removed = changed = true;
                }
            }
        }

        // Remove surviving states that cannot reach a surviving marked state.
        std::vector<bool> coreach(n, false);
        std::deque<StateIndex> queue;
        for (StateIndex s = 0; s < n; ++s) {
            if (alive[s] && graph.marked[s]) {
                coreach[s] = true;
                queue.push_back(s);
            }
        }
        while (!queue.empty()) {
            auto s = queue.front();
            queue.pop_front();
            for (auto p : pred[s]) {
                if (alive[p] && !coreach[p]) {
                    coreach[p] = true;
                    queue.push_back(p);
                }
            }
        }
        for (StateIndex s = 0; s < n; ++s) {
            if (alive[s] && !coreach[s]) {
                alive[s] = false;
                changed = true;
            }
        }
    }

    if (!alive[0])
        throw Error(ErrorCode::EmptySupervisor,
                    "no controllable and nonblocking supervisor exists: the initial state is pruned");

    // Reachable part of the surviving set, in breadth-first order.
    std::vector<std::optional<StateIndex>> renumber(n);
    std::vector<StateIndex> order{0};
    renumber[0] = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (const auto& e : graph.edges[order[head]]) {
            if (alive[e.target] && !renumber[e.target]) {
                renumber[e.target] = static_cast<StateIndex>(order.size());
                order.push_back(e.target);
            }
        }
    }

    AutomatonBuilder b("sup");
    for (const auto& ev : space.events())
        b.add_event(ev);
    for (auto s : order)
        b.add_state(space.state_name(graph.tuple(s)), graph.marked[s]);
    for (auto s : order)
        for (const auto& e : graph.edges[s])
            if (alive[e.target])
                b.add_transition(*renumber[s], e.event, *renumber[e.target]);
    b.set_initial(StateIndex{0});
    SynthesisResult result{"sup", std::move(b).build(), 0, 0, 0, {}, 0, 0.0};
    for (auto s : order) {
        for (const auto& e : graph.edges[s]) {
            if (!alive[e.target])
                result.removed_transitions.push_back(
                    {space.state_name(graph.tuple(s)), space.events()[e.event].name});
        }
    }
    result.uncontrolled_size = space.count_plant_states(options.bound);
    result.closed_loop_size = n;
    result.controlled_size = order.size();
    result.iterations = iterations;
    result.duration_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return result;
}

std::vector<SynthesisResult> sup_cn_modular(const ControlProblem& cp, const SynthesisOptions& options)
{
    std::vector<SynthesisResult> results;
    for (const auto& r : cp.requirements()) {
        ControlProblem single(cp.plants(), {r});
        auto res = sup_cn(single, options);
        res.label = r.id;
        res.supervisor = [&] {
            // Rename the supervisor after its requirement.
            AutomatonBuilder b("S_" + r.id);
            const auto& s = res.supervisor;
            for (const auto& e : s.alphabet())
                b.add_event(e);
            for (StateIndex q = 0; q < s.state_count(); ++q)
                b.add_state(s.state_name(q), s.is_marked(q));
            for (StateIndex q = 0; q < s.state_count(); ++q)
                for (const auto& e : s.out(q))
                    b.add_transition(q, e.event, e.target);
            b.set_initial(s.initial());
            return std::move(b).build();
        }();
        results.push_back(std::move(res));
    }
    return results;
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::SkipByCNMS: return "SkipByCNMS";
    case Verdict::SkipByAcyclic: return "SkipByAcyclic";
    case Verdict::Sectionalize: return "Sectionalize";
    }
    return "?";
}

ReductionPlan plan_reduction(const ControlProblem& cp)
{
    ReductionPlan plan;
    plan.plant_count = cp.plant_count();
    plan.requirement_count = cp.requirements().size();
    plan.cnms = check_cnms(cp);
    plan.rcnms = check_rcnms(cp);

    VertexSet all(cp.plant_count());
    for (PlantIndex i = 0; i < all.size(); ++i)
        all[i] = i;

    if (!plan.rcnms.satisfied()) {
        std::string msg = "RCNMS does not hold:";
        for (const auto& v : plan.rcnms.violations)
            msg += std::string(" ") + to_string(v.property) + "(" + v.subject + ")";
        throw Error(ErrorCode::NotApplicable, msg);
    }

    plan.graph = build_graph(cp);
    plan.analysis = analyze(*plan.graph);
    if (plan.cnms.satisfied() || plan.analysis->phis.empty()) {
        plan.verdict = plan.cnms.satisfied() ? Verdict::SkipByCNMS : Verdict::SkipByAcyclic;
        plan.residual = all;
        return plan;
    }

    plan.verdict = Verdict::Sectionalize;
    plan.residual = plan.analysis->residual;
    for (const auto& cls : plan.analysis->partition) {
        plan.classes.push_back(cls.vertices);
        plan.partial_problems.push_back(simplify_partial_problem(cp, cls.vertices));
        for (auto& note : weakened_negations(cp, cls.vertices))
            plan.notes.push_back(std::move(note));
    }
    return plan;
}

std::vector<SynthesisResult> execute_plan(const ControlProblem& cp, const ReductionPlan& plan,
                                          const SynthesisOptions& options)
{
    (void)cp;
    std::vector<SynthesisResult> results;
    if (plan.verdict != Verdict::Sectionalize)
        return results;

    if (options.parallel && plan.partial_problems.size() > 1) {
        std::vector<std::future<SynthesisResult>> futures;
        for (const auto& partial : plan.partial_problems)
            futures.push_back(std::async(std::launch::async,
                                         [&partial, &options] { return sup_cn(partial, options); }));
        // get() rethrows the first failure in class order.
        for (auto& f : futures)
            results.push_back(f.get());
    } else {
        for (const auto& partial : plan.partial_problems)
            results.push_back(sup_cn(partial, options));
    }
    for (std::size_t i = 0; i < results.size(); ++i)
        results[i].label = "S" + std::to_string(i + 1);
    return results;
}

} // namespace decsynth

#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "decsynth/depgraph.hpp"
#include "decsynth/error.hpp"
#include "decsynth/oracle.hpp"
#include "support.hpp"

using namespace decsynth;
using testsupport::load_fixture;

namespace {

VertexSet ids(const DependencyGraph& g, std::initializer_list<const char*> names)
{
    VertexSet out;
    for (const auto* n : names) {
        auto it = std::find(g.vertices.begin(), g.vertices.end(), n);
        REQUIRE(it != g.vertices.end());
        out.push_back(static_cast<PlantIndex>(it - g.vertices.begin()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t count(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
        ++n;
    return n;
}

DependencyGraph graph(std::size_t n, std::vector<std::pair<PlantIndex, PlantIndex>> edges)
{
    DependencyGraph g;
    for (std::size_t i = 0; i < n; ++i)
        g.vertices.push_back("V" + std::to_string(i));
    for (const auto& [a, b] : edges)
        g.edges.push_back({a, b, "R"});
    return g;
}

} // namespace

TEST_CASE("graph construction")
{
    SUBCASE("Fig. 3")
    {
        auto g = build_graph(load_fixture("fig3.dcp"));
        CHECK(g.vertex_count() == 3);
        REQUIRE(g.edges.size() == 2);
        CHECK(g.edges[0] == DependencyEdge{0, 1, "R"});
        CHECK(g.edges[1] == DependencyEdge{0, 2, "R"});
        CHECK(is_acyclic_selfloop_free(g));
    }
    SUBCASE("Fig. 5 CP1 is a 2-cycle")
    {
        auto g = build_graph(load_fixture("fig5_cp1.dcp"));
        REQUIRE(g.edges.size() == 2);
        CHECK(g.edges[0].init == 0);
        CHECK(g.edges[0].ter == 1);
        CHECK(g.edges[1].init == 1);
        CHECK(g.edges[1].ter == 0);
        CHECK_FALSE(is_acyclic_selfloop_free(g));
    }
    SUBCASE("Fig. 4 is acyclic")
    {
        CHECK(is_acyclic_selfloop_free(build_graph(load_fixture("fig4.dcp"))));
    }
    SUBCASE("Fig. 2 has a self-loop")
    {
        auto g = build_graph(load_fixture("fig2.dcp"));
        REQUIRE(g.edges.size() == 1);
        CHECK(g.edges[0].init == g.edges[0].ter);
        CHECK_FALSE(is_acyclic_selfloop_free(g));
        CHECK(cyclic_sccs(g) == std::vector<VertexSet>{{0}});
    }
    SUBCASE("no requirements")
    {
        auto g = build_graph(ControlProblem(load_fixture("fig4.dcp").plants(), {}));
        CHECK(g.edges.empty());
        CHECK(is_acyclic_selfloop_free(g));
    }
}

TEST_CASE("edge count equals the number of condition plants")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        for (const auto& cp : {generate_cnms_instance(seed, 6, 5), generate_acyclic_rcnms_instance(seed, 6, 5),
                               generate_cyclic_rcnms_instance(seed, 6, 5)}) {
            std::size_t expect = 0;
            for (const auto& r : cp.requirements())
                expect += condition_plants(r).size();
            CHECK(build_graph(cp).edges.size() == expect);
        }
        CHECK(is_acyclic_selfloop_free(build_graph(generate_cnms_instance(seed, 6, 5))));
        CHECK(is_acyclic_selfloop_free(build_graph(generate_acyclic_rcnms_instance(seed, 6, 5))));
        CHECK_FALSE(is_acyclic_selfloop_free(build_graph(generate_cyclic_rcnms_instance(seed, 6, 5))));
    }
}

TEST_CASE("Fig. 6 analysis matches the stated sets")
{
    auto g = build_graph(load_fixture("fig6.dcp"));
    auto a = analyze(g);
    CHECK(a.phis == std::vector<VertexSet>{ids(g, {"P1", "P2"}), ids(g, {"P3", "P4"})});
    CHECK(a.extended == std::vector<VertexSet>{ids(g, {"P1", "P2", "P5", "P6"}), ids(g, {"P3", "P4", "P5", "P6"})});
    REQUIRE(a.partition.size() == 1);
    CHECK(a.partition[0].vertices == ids(g, {"P1", "P2", "P3", "P4", "P5", "P6"}));
    CHECK(a.partition[0].members == std::vector<std::size_t>{0, 1});
    CHECK(a.residual.empty());
    CHECK(extend(g, {}) == VertexSet{});
}

TEST_CASE("FESTO-shaped analysis")
{
    auto g = build_graph(load_fixture("festo_shape.dcp"));
    auto a = analyze(g);
    REQUIRE(a.phis.size() == 5);
    CHECK(a.phis[4] == ids(g, {"P58", "P59", "P60", "P61", "P62"}));
    REQUIRE(a.partition.size() == 5);
    std::vector<std::size_t> sizes;
    for (const auto& c : a.partition)
        sizes.push_back(c.vertices.size());
    CHECK(sizes == std::vector<std::size_t>{3, 2, 2, 2, 5});
    CHECK(a.partition[0].vertices == ids(g, {"P21", "P22", "P23"}));
    CHECK(a.residual == ids(g, {"S1", "S2"}));
}

TEST_CASE("SCCs on hand-made graphs")
{
    // 0 <-> 1, 1 -> 2, 2 -> 3 -> 4 -> 2, 5 self-loop, 6 isolated
    auto g = graph(7, {{0, 1}, {1, 0}, {1, 2}, {2, 3}, {3, 4}, {4, 2}, {5, 5}});
    auto sccs = strongly_connected_components(g);
    CHECK(sccs.size() == 4);
    CHECK(cyclic_sccs(g) == std::vector<VertexSet>{{0, 1}, {2, 3, 4}, {5}});
    CHECK(extend(g, {2, 3, 4}) == VertexSet{0, 1, 2, 3, 4});
    CHECK(extend(g, {0, 1}) == VertexSet{0, 1});
    CHECK(extend(g, {6}) == VertexSet{6});
    CHECK(cyclic_sccs(graph(3, {{0, 1}, {1, 2}})).empty());
}

TEST_CASE("long chains do not exhaust the stack")
{
    std::vector<std::pair<PlantIndex, PlantIndex>> edges;
    const std::size_t n = 20000;
    for (PlantIndex i = 0; i + 1 < n; ++i)
        edges.push_back({i, i + 1});
    edges.push_back({static_cast<PlantIndex>(n - 1), 0});
    auto g = graph(n, edges);
    auto phis = cyclic_sccs(g);
    REQUIRE(phis.size() == 1);
    CHECK(phis[0].size() == n);
}

TEST_CASE("graph invariants on random graphs")
{
    std::mt19937_64 rng(11);
    for (int round = 0; round < 200; ++round) {
        std::uniform_int_distribution<std::size_t> nd(1, 9);
        std::size_t n = nd(rng);
        std::uniform_int_distribution<PlantIndex> vd(0, static_cast<PlantIndex>(n - 1));
        std::vector<std::pair<PlantIndex, PlantIndex>> edges;
        std::uniform_int_distribution<int> md(0, 12);
        for (int m = md(rng); m > 0; --m)
            edges.push_back({vd(rng), vd(rng)});
        auto g = graph(n, edges);
        auto a = analyze(g);

        // disjoint phis, every 2-cycle covered
        std::vector<int> seen(n, 0);
        for (const auto& phi : a.phis)
            for (auto v : phi)
                CHECK(++seen[v] == 1);
        for (const auto& [x, y] : edges) {
            bool back = std::find(edges.begin(), edges.end(), std::make_pair(y, x)) != edges.end();
            if (back)
                CHECK(seen[x] == 1);
        }
        // extend contains phi, monotone and idempotent
        for (std::size_t i = 0; i < a.phis.size(); ++i) {
            const auto& v = a.extended[i];
            CHECK(std::includes(v.begin(), v.end(), a.phis[i].begin(), a.phis[i].end()));
            CHECK(extend(g, v) == v);
        }
        // classes disjoint, union of inputs, residual the complement
        std::vector<int> cover(n, 0);
        for (const auto& c : a.partition)
            for (auto v : c.vertices)
                CHECK(++cover[v] == 1);
        VertexSet in_union;
        for (const auto& v : a.extended)
            in_union.insert(in_union.end(), v.begin(), v.end());
        std::sort(in_union.begin(), in_union.end());
        in_union.erase(std::unique(in_union.begin(), in_union.end()), in_union.end());
        VertexSet covered, residual;
        for (PlantIndex v = 0; v < n; ++v)
            (cover[v] ? covered : residual).push_back(v);
        CHECK(covered == in_union);
        CHECK(a.residual == residual);
        CHECK(is_acyclic_selfloop_free(g) == a.phis.empty());
    }
}

TEST_CASE("quotient merges overlapping sets transitively")
{
    auto w = quotient({{0, 1}, {5}, {1, 2}, {2, 3}, {6, 7}});
    REQUIRE(w.size() == 3);
    CHECK(w[0].vertices == VertexSet{0, 1, 2, 3});
    CHECK(w[0].members == std::vector<std::size_t>{0, 2, 3});
    CHECK(w[1].vertices == VertexSet{5});
    CHECK(w[2].vertices == VertexSet{6, 7});
    CHECK(quotient({}).empty());
}

TEST_CASE("partial problem simplification")
{
    auto cp = load_fixture("fig6.dcp");
    VertexSet all{0, 1, 2, 3, 4, 5};
    CHECK(simplify_partial_problem(cp, all) == cp);

    auto g = build_graph(cp);
    auto sub = simplify_partial_problem(cp, ids(g, {"P5", "P6"}));
    CHECK(sub.plant_names() == std::vector<std::string>{"P5", "P6"});
    REQUIRE(sub.requirements().size() == 2);
    CHECK(sub.requirements()[0].id == "R5");
    CHECK(to_string(sub.requirements()[0].condition) == "T or T");
    CHECK(sub.requirements()[1].id == "R6");
    CHECK(to_string(sub.requirements()[1].condition) == "P5.q9");
    CHECK_THROWS_AS(simplify_partial_problem(cp, {9}), Error);

    auto ctx = load_fixture("cycle_in_context.dcp");
    auto cg = build_graph(ctx);
    auto keep = ids(cg, {"P1", "P2", "P4"});
    auto notes = weakened_negations(ctx, keep);
    REQUIRE(notes.size() == 1);
    CHECK(notes[0].find("R5") != std::string::npos);
}

TEST_CASE("DOT output")
{
    SUBCASE("Fig. 3 plain")
    {
        auto dot = emit_dot(build_graph(load_fixture("fig3.dcp")));
        CHECK(dot.rfind("digraph", 0) == 0);
        CHECK(count(dot, " -> ") == 2);
        CHECK(count(dot, "id=\"e1\"") == 1);
        CHECK(count(dot, "id=\"e2\"") == 1);
        CHECK(count(dot, "color") == 0);
    }
    SUBCASE("Fig. 6 colored")
    {
        auto g = build_graph(load_fixture("fig6.dcp"));
        auto a = analyze(g);
        auto dot = emit_dot(g, &a);
        std::size_t red = 0, purple = 0, blue = 0;
        std::istringstream lines(dot);
        for (std::string line; std::getline(lines, line);) {
            if (line.find(" -> ") != std::string::npos || line.find("[color=") == std::string::npos)
                continue;
            red += line.find("#d62728") != std::string::npos;
            purple += line.find("#9467bd") != std::string::npos;
            blue += line.find("#1f77b4") != std::string::npos;
        }
        CHECK(red == 4);
        CHECK(purple == 2);
        CHECK(blue == 0);
    }
    SUBCASE("edgeless graph")
    {
        auto dot = emit_dot(graph(2, {}));
        CHECK(count(dot, " -> ") == 0);
        CHECK(count(dot, "V0") == 1);
    }
}

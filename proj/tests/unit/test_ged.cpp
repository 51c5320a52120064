#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>

#include "bihyb/error.hpp"
#include "bihyb/ged.hpp"
#include "bihyb/generators.hpp"
#include "bihyb/rng.hpp"

using namespace bihyb;

namespace {

LabeledGraph graph(std::vector<int> labels, std::vector<std::pair<int, int>> edges) {
    LabeledGraph g(std::move(labels));
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

LabeledGraph triangle() { return graph({0, 0, 0}, {{0, 1}, {1, 2}, {0, 2}}); }
LabeledGraph path3() { return graph({0, 0, 0}, {{0, 1}, {1, 2}}); }

// Edit cost written from the definition, independent of the library.
Cost reference_cost(const LabeledGraph& g1, const LabeledGraph& g2, const std::vector<NodeId>& target,
                    const CostModel& c = {}) {
    Cost cost = 0;
    std::vector<char> hit(static_cast<std::size_t>(g2.node_count()), 0);
    for (NodeId i = 0; i < g1.node_count(); ++i) {
        const NodeId t = target[static_cast<std::size_t>(i)];
        if (t < 0) {
            cost += c.node_indel;
        } else {
            hit[static_cast<std::size_t>(t)] = 1;
            if (g1.label(i) != g2.label(t)) cost += c.node_sub;
        }
    }
    for (char h : hit)
        if (!h) cost += c.node_indel;
    std::vector<NodeId> source(static_cast<std::size_t>(g2.node_count()), -1);
    for (NodeId i = 0; i < g1.node_count(); ++i)
        if (target[static_cast<std::size_t>(i)] >= 0) source[static_cast<std::size_t>(target[static_cast<std::size_t>(i)])] = i;
    for (auto [u, v] : g1.edges()) {
        const NodeId a = target[static_cast<std::size_t>(u)];
        const NodeId b = target[static_cast<std::size_t>(v)];
        if (a < 0 || b < 0 || !g2.has_edge(a, b)) cost += c.edge_indel;
    }
    for (auto [a, b] : g2.edges()) {
        const NodeId u = source[static_cast<std::size_t>(a)];
        const NodeId v = source[static_cast<std::size_t>(b)];
        if (u < 0 || v < 0 || !g1.has_edge(u, v)) cost += c.edge_indel;
    }
    return cost;
}

// Minimum of reference_cost over every partial injection g1 -> g2.
Cost reference_ged(const LabeledGraph& g1, const LabeledGraph& g2) {
    std::vector<NodeId> target(static_cast<std::size_t>(g1.node_count()), -1);
    std::vector<char> used(static_cast<std::size_t>(g2.node_count()), 0);
    Cost best = std::numeric_limits<Cost>::max();
    std::function<void(int)> rec = [&](int i) {
        if (i == g1.node_count()) {
            best = std::min(best, reference_cost(g1, g2, target));
            return;
        }
        target[static_cast<std::size_t>(i)] = kEpsilon;
        rec(i + 1);
        for (NodeId t = 0; t < g2.node_count(); ++t) {
            if (used[static_cast<std::size_t>(t)]) continue;
            used[static_cast<std::size_t>(t)] = 1;
            target[static_cast<std::size_t>(i)] = t;
            rec(i + 1);
            used[static_cast<std::size_t>(t)] = 0;
        }
    };
    rec(0);
    return best;
}

GedPair random_small_pair(Rng& rng, int max_n) {
    GedGenOptions o;
    o.min_nodes = 1;
    o.max_nodes = max_n;
    o.label_types = 3;
    o.edits = static_cast<int>(rng.below(5));
    auto p = generate_ged_pair(rng.next(), o);
    // Occasionally an unrelated second graph.
    if (rng.below(3) == 0) p.g2 = generate_molecule(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n))), 3, rng.next());
    return p;
}

NodeMapping identity(int n) {
    NodeMapping m;
    m.g2_size = n;
    for (int i = 0; i < n; ++i) m.target.push_back(i);
    return m;
}

}  // namespace

TEST_CASE("edit_cost examples") {
    CHECK(edit_cost(triangle(), triangle(), identity(3)) == 0);
    CHECK(edit_cost(graph({0}, {}), graph({1}, {}), identity(1)) == 1);
    CHECK(edit_cost(triangle(), path3(), identity(3)) == 1);
    NodeMapping del{{kEpsilon, kEpsilon, kEpsilon}, 0};
    CHECK(edit_cost(triangle(), LabeledGraph{}, del) == 6);
}

TEST_CASE("edit_cost follows the cost model") {
    const CostModel c{2, 3, 5};
    NodeMapping m{{kEpsilon, 0}, 2};
    const auto g1 = graph({0, 1}, {{0, 1}});
    const auto g2 = graph({2, 2}, {{0, 1}});
    // delete node 0 (3), relabel 1->0 (2), insert node 1 (3), delete edge (5), insert edge (5)
    CHECK(edit_cost(g1, g2, m, c) == 18);
    CHECK(reference_cost(g1, g2, m.target, c) == 18);
}

TEST_CASE("invalid mappings are rejected") {
    CHECK_THROWS_AS(edit_cost(triangle(), path3(), NodeMapping{{0, 0, 1}, 3}), ContractError);
    CHECK_THROWS_AS(edit_cost(triangle(), path3(), NodeMapping{{0, 1}, 3}), ContractError);
    CHECK_THROWS_AS(edit_cost(triangle(), path3(), NodeMapping{{0, 1, 3}, 3}), ContractError);
    CHECK_THROWS_AS(edit_cost(triangle(), path3(), NodeMapping{{0, 1, 2}, 4}), ContractError);
}

TEST_CASE("brute force examples") {
    CHECK(brute_force_ged(triangle(), triangle()).cost == 0);
    CHECK(brute_force_ged(triangle(), LabeledGraph{}).cost == 6);
    CHECK(brute_force_ged(triangle(), path3()).cost == 1);
    CHECK(reference_ged(triangle(), path3()) == 1);
    CHECK_THROWS_AS(brute_force_ged(generate_molecule(9, 2, 1), generate_molecule(8, 2, 2)), ContractError);
}

TEST_CASE("brute force agrees with the reference enumeration and is symmetric") {
    Rng rng(1234);
    for (int trial = 0; trial < 40; ++trial) {
        const auto p = random_small_pair(rng, 5);
        const auto r = brute_force_ged(p.g1, p.g2);
        CHECK(r.cost == reference_ged(p.g1, p.g2));
        CHECK(r.cost == reference_cost(p.g1, p.g2, r.mapping.target));
        if (trial < 20) CHECK(brute_force_ged(p.g2, p.g1).cost == r.cost);
    }
}

TEST_CASE("hungarian examples") {
    CHECK(hungarian_ged(triangle(), triangle()).cost == 0);
    CHECK(hungarian_ged(LabeledGraph{}, graph({0, 0}, {{0, 1}})).cost == 3);
    CHECK(hungarian_ged(LabeledGraph{}, LabeledGraph{}).cost == 0);
}

TEST_CASE("ipfp examples") {
    IpfpOptions opts;
    opts.init = padded_permutation(identity(3), 3);
    CHECK(ipfp_ged(triangle(), triangle(), {}, opts).cost == 0);
    const auto r = ipfp_ged(triangle(), path3());
    CHECK(r.cost == 1);
    CHECK(r.cost <= hungarian_ged(triangle(), path3()).cost);
}

TEST_CASE("heuristics are upper bounds and report exact costs") {
    Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const auto p = random_small_pair(rng, 7);
        const Cost opt = brute_force_ged(p.g1, p.g2).cost;
        for (auto h : {GedHeuristic::hungarian, GedHeuristic::ipfp}) {
            const auto r = solve_ged(p.g1, p.g2, h);
            CHECK(r.cost >= opt);
            CHECK(r.cost == reference_cost(p.g1, p.g2, r.mapping.target));
            CHECK(r.cost == edit_cost(p.g1, p.g2, r.mapping));
        }
    }
}

TEST_CASE("ipfp relaxed objective never increases") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        GedGenOptions o;
        o.min_nodes = 5;
        o.max_nodes = 15;
        const auto p = generate_ged_pair(rng.next(), o);
        IpfpTrace trace;
        ipfp_ged(p.g1, p.g2, {}, {}, &trace);
        REQUIRE(trace.relaxed_objective.size() >= 1);
        CHECK(trace.iterations <= 50);
        for (std::size_t i = 1; i < trace.relaxed_objective.size(); ++i) {
            CHECK(trace.relaxed_objective[i] <= trace.relaxed_objective[i - 1] + 1e-9);
        }
    }
}

TEST_CASE("zero cost exactly on label-preserving isomorphisms") {
    GedGenOptions o;
    o.min_nodes = 3;
    o.max_nodes = 6;
    o.edits = 0;
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = generate_ged_pair(rng.next(), o);
        const auto r = brute_force_ged(p.g1, p.g2);
        REQUIRE(r.cost == 0);
        // The zero-cost mapping is an isomorphism: labels and edges correspond.
        for (NodeId u = 0; u < p.g1.node_count(); ++u) {
            REQUIRE(r.mapping.target[static_cast<std::size_t>(u)] >= 0);
            CHECK(p.g1.label(u) == p.g2.label(r.mapping.target[static_cast<std::size_t>(u)]));
            for (NodeId v = 0; v < p.g1.node_count(); ++v) {
                if (u == v) continue;
                CHECK(p.g1.has_edge(u, v) ==
                      p.g2.has_edge(r.mapping.target[static_cast<std::size_t>(u)], r.mapping.target[static_cast<std::size_t>(v)]));
            }
        }
        // Any mapping with a relabel or a broken edge costs more than zero.
        auto m = r.mapping;
        if (p.g1.node_count() >= 2) {
            std::swap(m.target[0], m.target[1]);
            const bool iso = reference_cost(p.g1, p.g2, m.target) == 0;
            bool preserves = p.g1.label(0) == p.g2.label(m.target[0]) && p.g1.label(1) == p.g2.label(m.target[1]);
            for (NodeId u = 0; u < p.g1.node_count() && preserves; ++u)
                for (NodeId v = u + 1; v < p.g1.node_count(); ++v)
                    if (p.g1.has_edge(u, v) != p.g2.has_edge(m.target[static_cast<std::size_t>(u)], m.target[static_cast<std::size_t>(v)]))
                        preserves = false;
            CHECK(iso == preserves);
        }
    }
}

TEST_CASE("node edit costs add up to the total") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_small_pair(rng, 7);
        const auto r = hungarian_ged(p.g1, p.g2);
        const auto [c1, c2] = node_edit_costs(p.g1, p.g2, r.mapping);
        Cost sum = 0;
        for (Cost x : c1) sum += x;
        for (Cost x : c2) sum += x;
        // Node operations are counted once; each unmatched edge is charged to both endpoints.
        Cost node_ops = 0;
        for (NodeId i = 0; i < p.g1.node_count(); ++i) {
            const NodeId t = r.mapping.target[static_cast<std::size_t>(i)];
            node_ops += t < 0 ? 1 : (p.g1.label(i) != p.g2.label(t));
        }
        node_ops += static_cast<Cost>(r.mapping.inserted().size());
        CHECK(sum - node_ops == 2 * (r.cost - node_ops));
    }
}

TEST_CASE("ipfp is no worse than hungarian on average for 10-node pairs") {
    GedGenOptions o;
    o.min_nodes = 10;
    o.max_nodes = 10;
    const auto set = generate_ged_set(50, 2, o);
    double h = 0;
    double f = 0;
    for (const auto& p : set) {
        h += static_cast<double>(hungarian_ged(p.g1, p.g2).cost);
        f += static_cast<double>(ipfp_ged(p.g1, p.g2).cost);
    }
    CHECK(f <= h);
}

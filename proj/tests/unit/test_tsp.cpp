#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "bihyb/error.hpp"
#include "bihyb/generators.hpp"
#include "bihyb/rng.hpp"
#include "bihyb/tsp.hpp"

using namespace bihyb;

namespace {

HcpInstance cycle(int n) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return HcpInstance::from_edges(n, e);
}

HcpInstance complete(int n) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return HcpInstance::from_edges(n, e);
}

HcpInstance petersen() {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (int i = 0; i < 5; ++i) {
        e.emplace_back(i, (i + 1) % 5);          // outer cycle
        e.emplace_back(i, i + 5);                // spokes
        e.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
    }
    return HcpInstance::from_edges(10, e);
}

// Minimum tour length by enumerating all tours that start at node 0.
Weight exhaustive_min(const TspMatrix& m) {
    std::vector<NodeId> p(static_cast<std::size_t>(m.size()));
    std::iota(p.begin(), p.end(), 0);
    Weight best = std::numeric_limits<Weight>::max();
    do {
        Weight len = 0;
        for (std::size_t i = 0; i < p.size(); ++i) len += m.at(p[i], p[(i + 1) % p.size()]);
        best = std::min(best, len);
    } while (std::next_permutation(p.begin() + 1, p.end()));
    return best;
}

int count_zeros(const TspMatrix& m) {
    int z = 0;
    for (int u = 0; u < m.size(); ++u)
        for (int v = 0; v < m.size(); ++v)
            if (u != v && m.at(u, v) == 0) ++z;
    return z;
}

TspMatrix random01(Rng& rng, int n) {
    TspMatrix m(n, 1);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.below(2)) m.set(u, v, 0);
    return m;
}

}  // namespace

TEST_CASE("hcp_to_tsp") {
    CHECK(count_zeros(hcp_to_tsp(cycle(5))) == 10);
    CHECK(count_zeros(hcp_to_tsp(complete(4))) == 12);
    CHECK(count_zeros(hcp_to_tsp(HcpInstance::from_edges(3, {}))) == 0);
    const auto m = hcp_to_tsp(HcpInstance::from_edges(3, {}));
    for (int u = 0; u < 3; ++u) CHECK(m.at(u, u) == 0);
    CHECK_THROWS_AS(hcp_to_tsp(HcpInstance::from_edges(2, {{0, 1}})), ContractError);
}

TEST_CASE("tour length and Hamiltonicity on C5") {
    const auto c5 = cycle(5);
    const auto m = hcp_to_tsp(c5);
    CHECK(tour_length(m, {0, 1, 2, 3, 4}) == 0);
    CHECK(is_hamiltonian_cycle(c5, {0, 1, 2, 3, 4}));
    CHECK(tour_length(m, {0, 2, 4, 1, 3}) == 5);
    CHECK_FALSE(is_hamiltonian_cycle(c5, {0, 2, 4, 1, 3}));
    CHECK_THROWS_AS(tour_length(m, {0, 1, 2, 3}), ContractError);
    CHECK_THROWS_AS(tour_length(m, {0, 1, 2, 3, 3}), ContractError);
}

TEST_CASE("objective counts the non-edges used") {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = generate_planted_hcp(12, 0.5, rng.next());
        const auto m = hcp_to_tsp(p.instance);
        std::vector<NodeId> order(12);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        Weight non_edges = 0;
        for (std::size_t i = 0; i < order.size(); ++i) {
            auto e = std::minmax(order[i], order[(i + 1) % order.size()]);
            if (!std::binary_search(p.instance.edges.begin(), p.instance.edges.end(), std::pair{e.first, e.second}))
                ++non_edges;
        }
        CHECK(tour_length(m, order) == non_edges);
    }
}

TEST_CASE("constructive heuristics") {
    CHECK(nearest_neighbor(hcp_to_tsp(cycle(5)), 0).length == 0);
    CHECK(nearest_neighbor(TspMatrix(4, 1), 0).length == 4);
    CHECK(farthest_insertion(TspMatrix(6, 0)).length == 0);
    CHECK(farthest_insertion(TspMatrix(5, 1)).length == 5);
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = random01(rng, 8);
        const Weight opt = exhaustive_min(m);
        CHECK(farthest_insertion(m).length >= opt);
        CHECK(nearest_neighbor(m, 0).length >= opt);
        CHECK(farthest_insertion(m).length == tour_length(m, farthest_insertion(m).order));
    }
}

TEST_CASE("Petersen graph has no Hamiltonian cycle; best tour uses one non-edge") {
    const auto pg = petersen();
    const auto m = hcp_to_tsp(pg);
    CHECK(exhaustive_min(m) == 1);
    const auto nn = nearest_neighbor(m, 0);
    CHECK(nn.length >= 1);
    CHECK_FALSE(is_hamiltonian_cycle(pg, nn.order));
    CHECK(lk_search(m, 20, 1).length == 1);
}

TEST_CASE("local search") {
    CHECK(lk_search(hcp_to_tsp(cycle(6)), 1, 0).length == 0);
    LocalSearchStats stats;
    std::vector<NodeId> order(7);
    std::iota(order.begin(), order.end(), 0);
    const auto ones = improve_tour(TspMatrix(7, 1), order, &stats);
    CHECK(ones.length == 7);
    CHECK(stats.moves == 0);
    CHECK_THROWS_AS(lk_search(TspMatrix(4, 1), 0, 0), ContractError);
}

TEST_CASE("local search never worsens its start and tracks lengths exactly") {
    Rng rng(10);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 5 + static_cast<int>(rng.below(40));
        TspMatrix m(n, 1);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) m.set(u, v, static_cast<Weight>(rng.below(25)));
        std::vector<NodeId> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        const Weight start = tour_length(m, order);
        LocalSearchStats stats;
        const auto t = improve_tour(m, order, &stats);
        CHECK(t.length <= start);
        CHECK(t.length == tour_length(m, t.order));
        CHECK(stats.consistent);
        Weight prev = start;
        for (Weight len : stats.lengths) {
            CHECK(len < prev);
            prev = len;
        }
    }
}

TEST_CASE("local search reaches the optimum lower bound on small random 0/1 matrices") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = random01(rng, 8);
        CHECK(lk_search(m, 5, trial).length >= exhaustive_min(m));
    }
}

TEST_CASE("more restarts find planted cycles more often") {
    int fast = 0;
    int accurate = 0;
    const auto set = generate_hcp_set(20, 50, 2.0, 31);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto m = hcp_to_tsp(set[i].instance);
        if (solve_tsp(m, TspHeuristic::lk_fast, i).length == 0) ++fast;
        if (solve_tsp(m, TspHeuristic::lk_accu, i).length == 0) ++accurate;
    }
    MESSAGE("found with 5 restarts: " << fast << "/20, with 100: " << accurate << "/20");
    CHECK(fast < accurate);
}

TEST_CASE("lk_search is deterministic per seed") {
    const auto m = hcp_to_tsp(generate_planted_hcp(60, 1.0, 4).instance);
    CHECK(lk_search(m, 5, 9) == lk_search(m, 5, 9));
}

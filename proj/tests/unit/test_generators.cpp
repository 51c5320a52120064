#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "bihyb/dag_sched.hpp"
#include "bihyb/ged.hpp"
#include "bihyb/generators.hpp"
#include "bihyb/instance_io.hpp"
#include "bihyb/rng.hpp"
#include "bihyb/tsp.hpp"

using namespace bihyb;

TEST_CASE("job DAG statistics") {
    int min_n = 1000;
    int max_n = 0;
    double total = 0;
    const int jobs = 10000;
    const Rng root(1);
    for (int i = 0; i < jobs; ++i) {
        const auto d = generate_job_dag(root.split(static_cast<std::uint64_t>(i)).next());
        const int n = d.node_count();
        total += n;
        min_n = std::min(min_n, n);
        max_n = std::max(max_n, n);
        REQUIRE(is_acyclic(d.graph));
        REQUIRE(d.capacity == 6000);
        for (int u = 0; u < n; ++u) {
            REQUIRE(d.resource[u] >= 1);
            REQUIRE(d.resource[u] <= 593);
            REQUIRE(d.duration[u] >= 16'300'000);
            REQUIRE(d.duration[u] <= 4'964'500'000);
        }
        // Every non-source has a parent.
        if (i < 1000) CHECK_NOTHROW(d.validate());
    }
    CHECK(min_n >= 2);
    CHECK(max_n <= 18);
    CHECK(std::abs(total / jobs - 9.18) <= 1.0);
    MESSAGE("mean job size " << total / jobs);
}

TEST_CASE("durations are log-uniform") {
    // The log of a log-uniform duration is uniform, so its mean is the midpoint.
    double sum = 0;
    int count = 0;
    for (const auto& d : generate_dag_set(20, 50, 4)) {
        for (Micros us : d.duration) {
            sum += std::log(static_cast<double>(us) / 1e6);
            ++count;
        }
    }
    const double mid = 0.5 * (std::log(16.3) + std::log(4964.5));
    CHECK(std::abs(sum / count - mid) < 0.05);
}

TEST_CASE("size parameter reproduces the mean exactly") {
    const double p = job_size_parameter({});
    double mass = 0;
    double mean = 0;
    double prob = p;
    for (int k = 2; k <= 18; ++k) {
        mass += prob;
        mean += prob * k;
        prob *= 1 - p;
    }
    CHECK(mean / mass == doctest::Approx(9.18).epsilon(1e-9));
}

TEST_CASE("generation is deterministic per seed") {
    CHECK(generate_dag_set(3, 10, 5) == generate_dag_set(3, 10, 5));
    CHECK_FALSE(generate_dag_set(1, 10, 5) == generate_dag_set(1, 10, 6));
    CHECK(generate_ged_set(3, 5) == generate_ged_set(3, 5));
    const auto a = generate_hcp_set(3, 40, 1.0, 2);
    const auto b = generate_hcp_set(3, 40, 1.0, 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].instance == b[i].instance);
        CHECK(a[i].witness == b[i].witness);
    }
    // Written files are byte-identical too.
    const auto dir = std::filesystem::temp_directory_path() / "bihyb_gen_test";
    std::filesystem::create_directories(dir);
    save_instance(dir / "a.json", generate_dag_set(1, 5, 9)[0]);
    save_instance(dir / "b.json", generate_dag_set(1, 5, 9)[0]);
    std::ifstream fa(dir / "a.json");
    std::ifstream fb(dir / "b.json");
    std::stringstream sa;
    std::stringstream sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    std::filesystem::remove_all(dir);
}

TEST_CASE("multi-job instances are disjoint unions") {
    const auto d = generate_dag_instance(50, 3);
    CHECK_NOTHROW(d.validate());
    CHECK(d.node_count() > 100);
}

TEST_CASE("GED pairs") {
    GedGenOptions o;
    o.min_nodes = 20;
    o.max_nodes = 30;
    for (const auto& p : generate_ged_set(30, 1, o)) {
        CHECK(p.g1.node_count() >= 20);
        CHECK(p.g1.node_count() <= 30);
        CHECK(p.g2.node_count() >= 20);
        CHECK(p.g2.node_count() <= 30);
        for (NodeId u = 0; u < p.g1.node_count(); ++u) CHECK(p.g1.label(u) < 10);
    }
}

TEST_CASE("unedited copies have distance zero") {
    GedGenOptions o;
    o.min_nodes = 3;
    o.max_nodes = 7;
    o.edits = 0;
    for (const auto& p : generate_ged_set(10, 3, o)) CHECK(brute_force_ged(p.g1, p.g2).cost == 0);
}

TEST_CASE("k edge toggles bound the distance by k") {
    GedGenOptions o;
    o.min_nodes = 3;
    o.max_nodes = 7;
    o.edge_edits_only = true;
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        o.edits = static_cast<int>(rng.below(5));
        const auto p = generate_ged_pair(rng.next(), o);
        CHECK(brute_force_ged(p.g1, p.g2).cost <= o.edits);
    }
}

TEST_CASE("planted HCP instances contain their witness") {
    for (const auto& p : generate_hcp_set(10, 30, 2.0, 1)) {
        CHECK(is_hamiltonian_cycle(p.instance, p.witness));
        CHECK(p.instance.edges.size() == 30 + 60);
    }
}

TEST_CASE("noise 0 gives a bare cycle that nearest neighbour solves") {
    const auto p = generate_planted_hcp(25, 0.0, 7);
    CHECK(p.instance.edges.size() == 25);
    for (int start = 0; start < 25; ++start) CHECK(nearest_neighbor(hcp_to_tsp(p.instance), start).length == 0);
}

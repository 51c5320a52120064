#pragma once

#include <cstdint>
#include <vector>

#include "bihyb/graph.hpp"

namespace bihyb {

/// Query-plan-like job statistics: 2..18 nodes per job (mean 9.18), task
/// durations 16.3 s .. 4964.5 s, resource demand 1..593 units, 6000 units
/// shared by all jobs.
struct DagGenOptions {
    int min_nodes = 2;
    int max_nodes = 18;
    double mean_nodes = 9.18;
    double min_duration_s = 16.3;
    double max_duration_s = 4964.5;
    int min_resource = 1;
    int max_resource = 593;
    int capacity = 6000;
};

/// One job DAG: layered, every non-source node has a parent in the previous layer.
DagInstance generate_job_dag(std::uint64_t seed, const DagGenOptions& opts = {});

/// `n_dags` jobs joined as a disjoint union sharing one capacity.
DagInstance generate_dag_instance(int n_dags, std::uint64_t seed, const DagGenOptions& opts = {});

/// `count` instances; instance i is generated from an independent stream of `seed`.
std::vector<DagInstance> generate_dag_set(int count, int n_dags, std::uint64_t seed, const DagGenOptions& opts = {});

/// Parameter of the shifted geometric node-count law whose truncation to
/// [min_nodes, max_nodes] has the requested mean.
double job_size_parameter(const DagGenOptions& opts);

/// Molecule-like labelled graphs: a random tree with degree <= 4 plus a few
/// ring-closing edges, skewed label frequencies. The second graph is an edited
/// and relabelled-node-order copy of the first.
struct GedGenOptions {
    int min_nodes = 20;
    int max_nodes = 30;
    int label_types = 10;
    /// Number of random edit operations applied to the copy; -1 draws it
    /// uniformly from [n/2, n].
    int edits = -1;
    /// Restrict edits to edge toggles (no relabelling or node insertion/deletion).
    bool edge_edits_only = false;
    /// Shuffle node ids of the copy.
    bool shuffle = true;
};

LabeledGraph generate_molecule(int n, int label_types, std::uint64_t seed);
GedPair generate_ged_pair(std::uint64_t seed, const GedGenOptions& opts = {});
std::vector<GedPair> generate_ged_set(int count, std::uint64_t seed, const GedGenOptions& opts = {});

/// Hamiltonian cycle instance with a hidden cycle and round(noise * n) extra edges.
struct PlantedHcp {
    HcpInstance instance;
    std::vector<NodeId> witness;  ///< the planted cycle
};

PlantedHcp generate_planted_hcp(int n, double noise_factor, std::uint64_t seed);
std::vector<PlantedHcp> generate_hcp_set(int count, int n, double noise_factor, std::uint64_t seed);

}  // namespace bihyb

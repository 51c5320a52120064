#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bihyb {

using NodeId = int;
using Weight = std::int64_t;
/// Durations and makespans are fixed-point microseconds so that rewards add up exactly.
using Micros = std::int64_t;

inline constexpr Micros kMicrosPerSecond = 1'000'000;

struct Edge {
    NodeId src;
    NodeId dst;
    Weight weight;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple directed graph with non-negative edge weights.
///
/// Out-adjacency lists are kept sorted by destination, so iteration order and
/// therefore every algorithm built on top is deterministic. Copies are
/// independent; `with_edge` returns a modified copy.
class WeightedDigraph {
public:
    struct Arc {
        NodeId dst;
        Weight weight;
        friend bool operator==(const Arc&, const Arc&) = default;
    };

    WeightedDigraph() = default;
    explicit WeightedDigraph(int node_count);

    int node_count() const noexcept { return static_cast<int>(out_.size()); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Throws ContractError on self-loops, duplicates, bad ids or negative weight.
    void add_edge(NodeId src, NodeId dst, Weight weight = 0);
    WeightedDigraph with_edge(NodeId src, NodeId dst, Weight weight = 0) const;

    bool has_edge(NodeId src, NodeId dst) const;
    std::span<const Arc> out(NodeId u) const { return out_[static_cast<std::size_t>(u)]; }
    int out_degree(NodeId u) const { return static_cast<int>(out(u).size()); }

    /// All edges ordered by (src, dst).
    std::vector<Edge> edges() const;

    friend bool operator==(const WeightedDigraph&, const WeightedDigraph&) = default;

private:
    void check_node(NodeId u) const;

    std::vector<std::vector<Arc>> out_;
    std::size_t edge_count_ = 0;
};

bool is_acyclic(const WeightedDigraph& g);

/// True iff adding src->dst would close a directed cycle, i.e. dst already reaches src.
/// Throws InvalidAction when src == dst.
bool would_create_cycle(const WeightedDigraph& g, NodeId src, NodeId dst);

/// Kahn's algorithm with a min-heap, so ties go to the smallest id.
/// Throws CycleError naming one edge on a cycle.
std::vector<NodeId> topological_order(const WeightedDigraph& g);

WeightedDigraph reverse(const WeightedDigraph& g);

/// Reachability closure as packed bitsets, one row per node.
class Reachability {
public:
    explicit Reachability(const WeightedDigraph& g);

    /// True iff there is a non-empty path from u to v.
    bool reaches(NodeId u, NodeId v) const {
        return (desc_[row(u) + word(v)] >> bit(v)) & 1U;
    }
    /// True iff there is a non-empty path from v to u.
    bool reached_by(NodeId u, NodeId v) const {
        return (anc_[row(u) + word(v)] >> bit(v)) & 1U;
    }
    int ancestor_count(NodeId u) const;

private:
    std::size_t row(NodeId u) const { return static_cast<std::size_t>(u) * words_; }
    static std::size_t word(NodeId v) { return static_cast<std::size_t>(v) >> 6; }
    static unsigned bit(NodeId v) { return static_cast<unsigned>(v) & 63U; }

    std::size_t words_ = 0;
    std::vector<std::uint64_t> desc_;
    std::vector<std::uint64_t> anc_;
};

/// Simple undirected graph with one categorical label per node.
class LabeledGraph {
public:
    LabeledGraph() = default;
    explicit LabeledGraph(std::vector<int> labels);

    int node_count() const noexcept { return static_cast<int>(labels_.size()); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    int label(NodeId u) const { return labels_[static_cast<std::size_t>(u)]; }
    const std::vector<int>& labels() const noexcept { return labels_; }

    bool has_edge(NodeId u, NodeId v) const {
        return adj_[static_cast<std::size_t>(u) * labels_.size() + static_cast<std::size_t>(v)] != 0;
    }
    void add_edge(NodeId u, NodeId v);
    void remove_edge(NodeId u, NodeId v);
    /// Adds the edge if absent, deletes it otherwise.
    void toggle_edge(NodeId u, NodeId v);
    LabeledGraph with_toggled(NodeId u, NodeId v) const;

    int degree(NodeId u) const { return static_cast<int>(nbrs_[static_cast<std::size_t>(u)].size()); }
    /// Sorted neighbour list.
    std::span<const NodeId> neighbors(NodeId u) const { return nbrs_[static_cast<std::size_t>(u)]; }

    /// Unordered edges as (u, v) with u < v, lexicographically sorted.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

private:
    void check_pair(NodeId u, NodeId v) const;

    std::vector<int> labels_;
    std::vector<std::uint8_t> adj_;
    std::vector<std::vector<NodeId>> nbrs_;
    std::size_t edge_count_ = 0;
};

struct DagInstance {
    WeightedDigraph graph;        ///< precedence edges; weights unused
    std::vector<Micros> duration; ///< > 0
    std::vector<int> resource;    ///< in [1, capacity]
    int capacity = 0;

    int node_count() const noexcept { return graph.node_count(); }
    /// Throws ValidationError (or CycleError) if an invariant does not hold.
    void validate() const;

    friend bool operator==(const DagInstance&, const DagInstance&) = default;
};

struct GedPair {
    LabeledGraph g1;
    LabeledGraph g2;
    friend bool operator==(const GedPair&, const GedPair&) = default;
};

struct HcpInstance {
    int n = 0;
    std::vector<std::pair<NodeId, NodeId>> edges; ///< u < v, sorted, unique

    /// Normalises and deduplicates an arbitrary undirected edge list.
    static HcpInstance from_edges(int n, std::vector<std::pair<NodeId, NodeId>> edges);
    void validate() const;

    friend bool operator==(const HcpInstance&, const HcpInstance&) = default;
};

}  // namespace bihyb

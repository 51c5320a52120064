#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bihyb/graph.hpp"
#include "bihyb/lsap.hpp"

namespace bihyb {

using Cost = std::int64_t;

/// Uniform edit costs. The defaults are the unit costs used throughout:
/// relabelling, node insertion/deletion and edge insertion/deletion all cost 1.
struct CostModel {
    Cost node_sub = 1;
    Cost node_indel = 1;
    Cost edge_indel = 1;

    Cost substitution(int l1, int l2) const noexcept { return l1 == l2 ? 0 : node_sub; }
};

inline constexpr NodeId kEpsilon = -1;

/// Node edit operations from g1 to g2. `target[i]` is the g2 node that g1
/// node i is substituted with, or kEpsilon when i is deleted. g2 nodes not hit
/// by any target are inserted.
struct NodeMapping {
    std::vector<NodeId> target;
    int g2_size = 0;

    std::vector<NodeId> inserted() const;
    friend bool operator==(const NodeMapping&, const NodeMapping&) = default;
};

struct GedResult {
    NodeMapping mapping;
    Cost cost = 0;
};

/// Throws ContractError if the mapping has the wrong shape or is not injective.
void validate_mapping(const LabeledGraph& g1, const LabeledGraph& g2, const NodeMapping& m);

/// Total edit cost implied by a node mapping; edge edits are induced.
Cost edit_cost(const LabeledGraph& g1, const LabeledGraph& g2, const NodeMapping& m, const CostModel& c = {});

/// Per-node share of the edit cost: node operation cost plus the number of
/// unmatched incident edges times edge_indel. One entry per g1 node, then one
/// per g2 node.
std::pair<std::vector<Cost>, std::vector<Cost>> node_edit_costs(const LabeledGraph& g1, const LabeledGraph& g2,
                                                                const NodeMapping& m, const CostModel& c = {});

/// Bipartite GED upper bound: LSAP on the (n1+n2)x(n1+n2) substitution /
/// deletion / insertion matrix whose entries include half the degree
/// difference as a local edge term.
GedResult hungarian_ged(const LabeledGraph& g1, const LabeledGraph& g2, const CostModel& c = {});

struct IpfpOptions {
    int max_iters = 50;
    double tol = 1e-9;
    /// Starting point on the padded (n1+n2)x(n1+n2) assignment polytope.
    /// Defaults to the uniform-weight doubly-stochastic matrix supported on
    /// the admissible entries.
    std::optional<DenseMatrix> init;
};

struct IpfpTrace {
    std::vector<double> relaxed_objective;  ///< at the start point and after each step
    int iterations = 0;
};

/// Frank-Wolfe iteration on the quadratic relaxation of GED with LSAP
/// direction finding and exact line search, followed by LSAP rounding. The
/// best of the rounded point and the best visited LSAP vertex is returned.
GedResult ipfp_ged(const LabeledGraph& g1, const LabeledGraph& g2, const CostModel& c = {},
                   const IpfpOptions& opts = {}, IpfpTrace* trace = nullptr);

/// Exact GED by exhaustive search over all partial injections. Refuses
/// (ContractError) when n1 + n2 > 16.
GedResult brute_force_ged(const LabeledGraph& g1, const LabeledGraph& g2, const CostModel& c = {});

/// Padded permutation matrix encoding a mapping; usable as IPFP start point.
DenseMatrix padded_permutation(const NodeMapping& m, int g1_size);

enum class GedHeuristic { hungarian, ipfp };
std::string_view to_string(GedHeuristic h);

GedResult solve_ged(const LabeledGraph& g1, const LabeledGraph& g2, GedHeuristic h, const CostModel& c = {});

}  // namespace bihyb

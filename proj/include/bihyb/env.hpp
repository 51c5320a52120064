#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bihyb/dag_sched.hpp"
#include "bihyb/ged.hpp"
#include "bihyb/instance_io.hpp"
#include "bihyb/tsp.hpp"

namespace bihyb {

/// Upper-level objective value: microseconds (DAG), edit cost (GED) or tour
/// length on the 0/1 matrix (HCP). Always integral so rewards telescope exactly.
using Objective = std::int64_t;

enum class LowerHeuristic { critical_path, sjf, hungarian, ipfp, nn, fi, lk_fast, lk_accu };

std::string_view to_string(LowerHeuristic h);
/// Throws ContractError for unknown names.
LowerHeuristic heuristic_from_string(std::string_view name);
ProblemKind problem_of(LowerHeuristic h);
LowerHeuristic default_heuristic(ProblemKind p);
/// Maximum number of graph modifications per episode: 20 (DAG), 10 (GED), 8 (HCP).
int default_horizon(ProblemKind p);

struct EnvConfig {
    ProblemKind problem = ProblemKind::dag;
    int K = 20;
    LowerHeuristic heuristic = LowerHeuristic::critical_path;
    std::uint64_t seed = 0;
    CostModel ged_costs{};

    static EnvConfig defaults(ProblemKind p, std::uint64_t seed = 0);
    /// Throws ContractError if K < 1 or the heuristic belongs to another problem.
    void validate() const;
};

struct ActionPair {
    NodeId a1 = 0;
    NodeId a2 = 0;
    friend auto operator<=>(const ActionPair&, const ActionPair&) = default;
};

using Solution = std::variant<Schedule, NodeMapping, Tour>;
/// Modified graph G^k: extra precedence edges (DAG), edited copy of g1 (GED)
/// or the penalised distance matrix (HCP).
using ModifiedGraph = std::variant<WeightedDigraph, LabeledGraph, TspMatrix>;

struct EnvState {
    std::shared_ptr<const Instance> original;
    std::shared_ptr<const TspMatrix> pristine;  ///< HCP only
    EnvConfig config;
    ModifiedGraph current;
    int k = 0;
    bool done = false;
    Solution last_solution;          ///< lower-level solution on `current`
    Objective last_objective = 0;    ///< its objective on the original instance
    Solution incumbent_solution;     ///< feasible for the original instance
    Objective incumbent_objective = 0;
    std::vector<ActionPair> history;
    std::uint64_t history_hash = 0;
    std::int64_t lower_solves = 0;   ///< along this state's lineage, including reset
};

struct StepOutcome {
    Objective reward = 0;  ///< previous upper objective minus the new one
    EnvState state;
    bool done = false;
    Solution solution;
};

/// Legal (a1, a2) pairs of a state, grouped by first node.
class ActionSpace {
public:
    ActionSpace() = default;
    explicit ActionSpace(const EnvState& s);

    const std::vector<NodeId>& firsts() const noexcept { return firsts_; }
    /// Legal second nodes for a1, ascending; empty if a1 is not a legal first node.
    std::span<const NodeId> seconds(NodeId a1) const;
    std::size_t pair_count() const noexcept { return offsets_.empty() ? 0 : offsets_.back(); }
    bool empty() const noexcept { return pair_count() == 0; }
    /// The index-th pair in (a1, a2) lexicographic order.
    ActionPair pair_at(std::size_t index) const;
    bool contains(ActionPair a) const;

private:
    std::vector<NodeId> firsts_;
    std::vector<std::vector<NodeId>> seconds_;
    std::vector<std::size_t> offsets_;  ///< prefix sums, size firsts + 1
};

/// G^0 = G, one lower-level solve, incumbent = that baseline.
EnvState reset(const Instance& instance, const EnvConfig& cfg);
EnvState reset(std::shared_ptr<const Instance> instance, const EnvConfig& cfg);

/// Without a1: legal first nodes. With a1: legal second nodes given a1.
/// Throws ContractError on a finished episode.
std::vector<NodeId> legal_actions(const EnvState& s, std::optional<NodeId> a1 = std::nullopt);

/// Applies the edit, re-solves the lower level on the modified graph and
/// scores the solution on the original instance. Throws InvalidAction for an
/// illegal pair and ContractError when the episode is already done; the input
/// state is never modified.
StepOutcome step(const EnvState& s, ActionPair a);

/// Upper-level objective of a lower-level solution, computed from the
/// original instance only. For DAGs the solution's start sequence is replayed
/// as a priority list under the original precedence constraints.
Objective upper_objective(const Instance& original, const Solution& x);

/// Solution form that is scored on the original instance (the replayed
/// schedule for DAGs, `x` itself otherwise).
Solution upper_solution(const Instance& original, const Solution& x);

using Policy = std::function<std::optional<ActionPair>(const EnvState&, const ActionSpace&)>;

struct EpisodeResult {
    std::vector<Objective> rewards;
    Objective initial_objective = 0;
    Objective final_objective = 0;
    Objective incumbent_objective = 0;
    Solution incumbent_solution;
    EnvState final_state;
};

/// Rolls a policy out for at most K steps. A policy returning nullopt ends the
/// episode early; an illegal action aborts with InvalidAction.
EpisodeResult run_episode(const Instance& instance, const EnvConfig& cfg, const Policy& policy);

struct FeatureTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::int64_t>> rows;
    std::vector<std::array<std::int64_t, 3>> edges;  ///< (u, v, weight)
};

struct Observation {
    ProblemKind problem = ProblemKind::dag;
    int k = 0;
    int K = 0;
    bool done = false;
    Objective objective = 0;
    Objective incumbent = 0;
    std::vector<FeatureTable> graphs;  ///< one table, two for GED (g1^k, g2)
    std::vector<std::array<std::int64_t, 3>> reversed_edges;  ///< DAG only
    std::vector<NodeId> tour;                                 ///< HCP only
};

Observation observe(const EnvState& s);

/// Number of lower-level solves run by the calling thread so far.
std::int64_t lower_solve_counter() noexcept;

}  // namespace bihyb

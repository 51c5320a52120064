#pragma once

#include <string_view>
#include <vector>

#include "bihyb/graph.hpp"

namespace bihyb {

struct Schedule {
    std::vector<Micros> start;          ///< per node
    std::vector<NodeId> start_sequence; ///< nodes in the order the simulator launched them
    Micros makespan = 0;

    Micros finish(const DagInstance& inst, NodeId u) const {
        return start[static_cast<std::size_t>(u)] + inst.duration[static_cast<std::size_t>(u)];
    }
    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// A total order over nodes; earlier means higher priority.
struct PriorityOrder {
    std::vector<NodeId> nodes;
    friend bool operator==(const PriorityOrder&, const PriorityOrder&) = default;
};

enum class DagHeuristic { critical_path, sjf };

std::string_view to_string(DagHeuristic h);

/// Event-driven list scheduler with greedy backfill.
///
/// At t = 0 and at every completion time, ready jobs (all predecessors in
/// `precedence` finished) are scanned in priority order and started whenever
/// their resource fits into the remaining capacity; a job that does not fit
/// does not block lower-priority jobs behind it.
///
/// Throws ContractError if node sets differ or `order` is not a permutation,
/// CycleError if `precedence` has a cycle.
Schedule simulate_list_schedule(const DagInstance& inst, const PriorityOrder& order,
                                const WeightedDigraph& precedence);

/// Descending bottom level (longest duration-weighted path to a sink,
/// including the node itself); ties by ascending id.
PriorityOrder critical_path_priorities(const DagInstance& inst, const WeightedDigraph& precedence);

/// Ascending duration; ties by ascending id.
PriorityOrder sjf_priorities(const DagInstance& inst);

struct DagSolution {
    Schedule schedule;
    Micros objective = 0;  ///< makespan
};

DagSolution solve_dag(const DagInstance& inst, const WeightedDigraph& precedence, DagHeuristic heuristic);

/// Independent feasibility check: precedence, capacity at every start event,
/// and makespan consistency. Returns an empty string when feasible, otherwise
/// a description of the first violation.
std::string check_schedule(const DagInstance& inst, const WeightedDigraph& precedence, const Schedule& s);

}  // namespace bihyb

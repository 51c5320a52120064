#include "bihyb/dag_sched.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "bihyb/error.hpp"

namespace bihyb {

std::string_view to_string(DagHeuristic h) {
    return h == DagHeuristic::critical_path ? "critical_path" : "sjf";
}

Schedule simulate_list_schedule(const DagInstance& inst, const PriorityOrder& order,
                                const WeightedDigraph& precedence) {
    const int n = inst.node_count();
    if (precedence.node_count() != n) throw ContractError("precedence graph node count mismatch");
    if (static_cast<int>(order.nodes.size()) != n) throw ContractError("priority order is not a permutation");

    std::vector<int> rank(static_cast<std::size_t>(n), -1);
    for (int pos = 0; pos < n; ++pos) {
        const NodeId u = order.nodes[static_cast<std::size_t>(pos)];
        if (u < 0 || u >= n || rank[static_cast<std::size_t>(u)] != -1) {
            throw ContractError("priority order is not a permutation");
        }
        rank[static_cast<std::size_t>(u)] = pos;
    }

    std::vector<int> pending(static_cast<std::size_t>(n), 0);
    for (NodeId u = 0; u < n; ++u)
        for (const auto& a : precedence.out(u)) ++pending[static_cast<std::size_t>(a.dst)];

    // Ready jobs keyed by rank; `running` holds (finish time, node).
    std::vector<int> ready;
    for (NodeId u = 0; u < n; ++u)
        if (pending[static_cast<std::size_t>(u)] == 0) ready.push_back(rank[static_cast<std::size_t>(u)]);
    std::sort(ready.begin(), ready.end());

    using Running = std::pair<Micros, NodeId>;
    std::priority_queue<Running, std::vector<Running>, std::greater<>> running;

    Schedule s;
    s.start.assign(static_cast<std::size_t>(n), -1);
    s.start_sequence.reserve(static_cast<std::size_t>(n));
    Micros now = 0;
    int free_units = inst.capacity;
    int finished = 0;

    while (finished < n) {
        // Launch everything that fits, highest priority first.
        std::vector<int> still_ready;
        still_ready.reserve(ready.size());
        for (int r : ready) {
            const NodeId u = order.nodes[static_cast<std::size_t>(r)];
            const int need = inst.resource[static_cast<std::size_t>(u)];
            if (need <= free_units) {
                free_units -= need;
                s.start[static_cast<std::size_t>(u)] = now;
                s.start_sequence.push_back(u);
                running.emplace(now + inst.duration[static_cast<std::size_t>(u)], u);
            } else {
                still_ready.push_back(r);
            }
        }
        ready.swap(still_ready);

        if (running.empty()) {
            // Nothing runs and nothing fits: either a cycle or a job larger than capacity.
            if (!ready.empty()) throw ContractError("job resource exceeds capacity");
            topological_order(precedence);  // throws CycleError naming the cycle
            throw ContractError("scheduler stalled");
        }

        now = running.top().first;
        std::vector<int> released;
        while (!running.empty() && running.top().first == now) {
            const NodeId u = running.top().second;
            running.pop();
            ++finished;
            free_units += inst.resource[static_cast<std::size_t>(u)];
            for (const auto& a : precedence.out(u)) {
                if (--pending[static_cast<std::size_t>(a.dst)] == 0) {
                    released.push_back(rank[static_cast<std::size_t>(a.dst)]);
                }
            }
        }
        if (!released.empty()) {
            std::sort(released.begin(), released.end());
            std::vector<int> merged;
            merged.reserve(ready.size() + released.size());
            std::merge(ready.begin(), ready.end(), released.begin(), released.end(), std::back_inserter(merged));
            ready.swap(merged);
        }
    }
    s.makespan = now;
    return s;
}

PriorityOrder critical_path_priorities(const DagInstance& inst, const WeightedDigraph& precedence) {
    const int n = inst.node_count();
    if (precedence.node_count() != n) throw ContractError("precedence graph node count mismatch");
    const auto topo = topological_order(precedence);
    std::vector<Micros> bottom(static_cast<std::size_t>(n), 0);
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        const NodeId u = *it;
        Micros tail = 0;
        for (const auto& a : precedence.out(u)) tail = std::max(tail, bottom[static_cast<std::size_t>(a.dst)]);
        bottom[static_cast<std::size_t>(u)] = inst.duration[static_cast<std::size_t>(u)] + tail;
    }
    PriorityOrder order;
    order.nodes.resize(static_cast<std::size_t>(n));
    std::iota(order.nodes.begin(), order.nodes.end(), 0);
    std::stable_sort(order.nodes.begin(), order.nodes.end(), [&](NodeId a, NodeId b) {
        return bottom[static_cast<std::size_t>(a)] > bottom[static_cast<std::size_t>(b)];
    });
    return order;
}

PriorityOrder sjf_priorities(const DagInstance& inst) {
    PriorityOrder order;
    order.nodes.resize(static_cast<std::size_t>(inst.node_count()));
    std::iota(order.nodes.begin(), order.nodes.end(), 0);
    std::stable_sort(order.nodes.begin(), order.nodes.end(), [&](NodeId a, NodeId b) {
        return inst.duration[static_cast<std::size_t>(a)] < inst.duration[static_cast<std::size_t>(b)];
    });
    return order;
}

DagSolution solve_dag(const DagInstance& inst, const WeightedDigraph& precedence, DagHeuristic heuristic) {
    const auto order = heuristic == DagHeuristic::critical_path ? critical_path_priorities(inst, precedence)
                                                                 : sjf_priorities(inst);
    DagSolution sol;
    sol.schedule = simulate_list_schedule(inst, order, precedence);
    sol.objective = sol.schedule.makespan;
    return sol;
}

std::string check_schedule(const DagInstance& inst, const WeightedDigraph& precedence, const Schedule& s) {
    const auto n = static_cast<std::size_t>(inst.node_count());
    if (s.start.size() != n) return "start vector has wrong size";
    Micros makespan = 0;
    for (std::size_t u = 0; u < n; ++u) {
        if (s.start[u] < 0) return "node " + std::to_string(u) + " has negative start";
        makespan = std::max(makespan, s.start[u] + inst.duration[u]);
    }
    if (makespan != s.makespan) return "makespan mismatch";
    for (const Edge& e : precedence.edges()) {
        const auto src = static_cast<std::size_t>(e.src);
        const auto dst = static_cast<std::size_t>(e.dst);
        if (s.start[dst] < s.start[src] + inst.duration[src]) {
            return "precedence " + std::to_string(e.src) + "->" + std::to_string(e.dst) + " violated";
        }
    }
    // Resource usage only increases at start times, so checking those suffices.
    for (std::size_t t = 0; t < n; ++t) {
        const Micros at = s.start[t];
        long long used = 0;
        for (std::size_t u = 0; u < n; ++u) {
            if (s.start[u] <= at && at < s.start[u] + inst.duration[u]) used += inst.resource[u];
        }
        if (used > inst.capacity) return "capacity exceeded at t=" + std::to_string(at);
    }
    return {};
}

}  // namespace bihyb

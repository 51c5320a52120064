#include "bihyb/graph.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <queue>

#include "bihyb/error.hpp"

namespace bihyb {

WeightedDigraph::WeightedDigraph(int node_count) {
    if (node_count < 0) throw ContractError("negative node count");
    out_.resize(static_cast<std::size_t>(node_count));
}

void WeightedDigraph::check_node(NodeId u) const {
    if (u < 0 || u >= node_count()) {
        throw ContractError("node id " + std::to_string(u) + " out of range");
    }
}

void WeightedDigraph::add_edge(NodeId src, NodeId dst, Weight weight) {
    check_node(src);
    check_node(dst);
    if (src == dst) throw ContractError("self-loop on node " + std::to_string(src));
    if (weight < 0) throw ContractError("negative edge weight");
    auto& arcs = out_[static_cast<std::size_t>(src)];
    auto it = std::lower_bound(arcs.begin(), arcs.end(), dst,
                               [](const Arc& a, NodeId d) { return a.dst < d; });
    if (it != arcs.end() && it->dst == dst) {
        throw ContractError("duplicate edge " + std::to_string(src) + "->" + std::to_string(dst));
    }
    arcs.insert(it, Arc{dst, weight});
    ++edge_count_;
}

WeightedDigraph WeightedDigraph::with_edge(NodeId src, NodeId dst, Weight weight) const {
    WeightedDigraph copy = *this;
    copy.add_edge(src, dst, weight);
    return copy;
}

bool WeightedDigraph::has_edge(NodeId src, NodeId dst) const {
    check_node(src);
    const auto arcs = out(src);
    auto it = std::lower_bound(arcs.begin(), arcs.end(), dst,
                               [](const Arc& a, NodeId d) { return a.dst < d; });
    return it != arcs.end() && it->dst == dst;
}

std::vector<Edge> WeightedDigraph::edges() const {
    std::vector<Edge> result;
    result.reserve(edge_count_);
    for (NodeId u = 0; u < node_count(); ++u) {
        for (const Arc& a : out(u)) result.push_back({u, a.dst, a.weight});
    }
    return result;
}

namespace {

// Kahn's algorithm; returns the (possibly partial) order.
std::vector<NodeId> kahn(const WeightedDigraph& g) {
    const int n = g.node_count();
    std::vector<int> indeg(static_cast<std::size_t>(n), 0);
    for (NodeId u = 0; u < n; ++u)
        for (const auto& a : g.out(u)) ++indeg[static_cast<std::size_t>(a.dst)];
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId u = 0; u < n; ++u)
        if (indeg[static_cast<std::size_t>(u)] == 0) ready.push(u);
    std::vector<NodeId> order;
    order.reserve(static_cast<std::size_t>(n));
    while (!ready.empty()) {
        const NodeId u = ready.top();
        ready.pop();
        order.push_back(u);
        for (const auto& a : g.out(u))
            if (--indeg[static_cast<std::size_t>(a.dst)] == 0) ready.push(a.dst);
    }
    return order;
}

}  // namespace

bool is_acyclic(const WeightedDigraph& g) {
    return static_cast<int>(kahn(g).size()) == g.node_count();
}

bool would_create_cycle(const WeightedDigraph& g, NodeId src, NodeId dst) {
    if (src == dst) throw InvalidAction("self-loop " + std::to_string(src));
    if (src < 0 || dst < 0 || src >= g.node_count() || dst >= g.node_count()) {
        throw InvalidAction("node id out of range");
    }
    std::vector<char> seen(static_cast<std::size_t>(g.node_count()), 0);
    std::vector<NodeId> stack{dst};
    seen[static_cast<std::size_t>(dst)] = 1;
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        if (u == src) return true;
        for (const auto& a : g.out(u)) {
            if (!seen[static_cast<std::size_t>(a.dst)]) {
                seen[static_cast<std::size_t>(a.dst)] = 1;
                stack.push_back(a.dst);
            }
        }
    }
    return false;
}

std::vector<NodeId> topological_order(const WeightedDigraph& g) {
    auto order = kahn(g);
    if (static_cast<int>(order.size()) == g.node_count()) return order;

    // Every node left over lies on or downstream of a cycle; walking
    // backwards through unprocessed predecessors must revisit a node.
    const int n = g.node_count();
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    for (NodeId u : order) done[static_cast<std::size_t>(u)] = 1;
    std::vector<NodeId> pred(static_cast<std::size_t>(n), -1);
    for (NodeId u = 0; u < n; ++u) {
        if (done[static_cast<std::size_t>(u)]) continue;
        for (const auto& a : g.out(u))
            if (!done[static_cast<std::size_t>(a.dst)]) pred[static_cast<std::size_t>(a.dst)] = u;
    }
    NodeId start = 0;
    while (done[static_cast<std::size_t>(start)]) ++start;
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    NodeId v = start;
    while (!visited[static_cast<std::size_t>(v)]) {
        visited[static_cast<std::size_t>(v)] = 1;
        v = pred[static_cast<std::size_t>(v)];
    }
    throw CycleError(pred[static_cast<std::size_t>(v)], v);
}

WeightedDigraph reverse(const WeightedDigraph& g) {
    WeightedDigraph r(g.node_count());
    for (const Edge& e : g.edges()) r.add_edge(e.dst, e.src, e.weight);
    return r;
}

Reachability::Reachability(const WeightedDigraph& g) {
    const int n = g.node_count();
    words_ = (static_cast<std::size_t>(n) + 63) / 64;
    desc_.assign(static_cast<std::size_t>(n) * words_, 0);
    anc_.assign(static_cast<std::size_t>(n) * words_, 0);
    const auto order = topological_order(g);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const NodeId u = *it;
        std::uint64_t* du = &desc_[row(u)];
        for (const auto& a : g.out(u)) {
            const std::uint64_t* dv = &desc_[row(a.dst)];
            for (std::size_t w = 0; w < words_; ++w) du[w] |= dv[w];
            du[word(a.dst)] |= std::uint64_t{1} << bit(a.dst);
        }
    }
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = 0; v < n; ++v) {
            if (reaches(u, v)) anc_[row(v) + word(u)] |= std::uint64_t{1} << bit(u);
        }
    }
}

int Reachability::ancestor_count(NodeId u) const {
    int count = 0;
    for (std::size_t w = 0; w < words_; ++w) count += std::popcount(anc_[row(u) + w]);
    return count;
}

LabeledGraph::LabeledGraph(std::vector<int> labels)
    : labels_(std::move(labels)),
      adj_(labels_.size() * labels_.size(), 0),
      nbrs_(labels_.size()) {}

void LabeledGraph::check_pair(NodeId u, NodeId v) const {
    if (u < 0 || v < 0 || u >= node_count() || v >= node_count()) {
        throw ContractError("node id out of range");
    }
    if (u == v) throw ContractError("self-loop on node " + std::to_string(u));
}

void LabeledGraph::add_edge(NodeId u, NodeId v) {
    check_pair(u, v);
    if (has_edge(u, v)) {
        throw ContractError("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
    }
    const auto n = labels_.size();
    adj_[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)] = 1;
    adj_[static_cast<std::size_t>(v) * n + static_cast<std::size_t>(u)] = 1;
    auto& nu = nbrs_[static_cast<std::size_t>(u)];
    nu.insert(std::lower_bound(nu.begin(), nu.end(), v), v);
    auto& nv = nbrs_[static_cast<std::size_t>(v)];
    nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
    ++edge_count_;
}

void LabeledGraph::remove_edge(NodeId u, NodeId v) {
    check_pair(u, v);
    if (!has_edge(u, v)) {
        throw ContractError("missing edge " + std::to_string(u) + "-" + std::to_string(v));
    }
    const auto n = labels_.size();
    adj_[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)] = 0;
    adj_[static_cast<std::size_t>(v) * n + static_cast<std::size_t>(u)] = 0;
    auto& nu = nbrs_[static_cast<std::size_t>(u)];
    nu.erase(std::lower_bound(nu.begin(), nu.end(), v));
    auto& nv = nbrs_[static_cast<std::size_t>(v)];
    nv.erase(std::lower_bound(nv.begin(), nv.end(), u));
    --edge_count_;
}

void LabeledGraph::toggle_edge(NodeId u, NodeId v) {
    check_pair(u, v);
    if (has_edge(u, v)) {
        remove_edge(u, v);
    } else {
        add_edge(u, v);
    }
}

LabeledGraph LabeledGraph::with_toggled(NodeId u, NodeId v) const {
    LabeledGraph copy = *this;
    copy.toggle_edge(u, v);
    return copy;
}

std::vector<std::pair<NodeId, NodeId>> LabeledGraph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> result;
    result.reserve(edge_count_);
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v) result.emplace_back(u, v);
    return result;
}

void DagInstance::validate() const {
    const auto n = static_cast<std::size_t>(graph.node_count());
    if (duration.size() != n || resource.size() != n) {
        throw ValidationError("per-node attribute arrays do not match node count");
    }
    if (capacity < 1) throw ValidationError("capacity must be >= 1");
    for (std::size_t i = 0; i < n; ++i) {
        if (duration[i] <= 0) {
            throw ValidationError("node " + std::to_string(i) + ": duration must be > 0");
        }
        if (resource[i] < 1 || resource[i] > capacity) {
            throw ValidationError("node " + std::to_string(i) + ": resource outside [1, capacity]");
        }
    }
    if (!is_acyclic(graph)) {
        try {
            topological_order(graph);
        } catch (const CycleError& e) {
            throw ValidationError(std::string("precedence graph is cyclic: ") + e.what());
        }
    }
}

HcpInstance HcpInstance::from_edges(int n, std::vector<std::pair<NodeId, NodeId>> edges) {
    for (auto& [u, v] : edges)
        if (u > v) std::swap(u, v);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    HcpInstance h{n, std::move(edges)};
    h.validate();
    return h;
}

void HcpInstance::validate() const {
    if (n < 0) throw ValidationError("negative node count");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto [u, v] = edges[i];
        if (u < 0 || v >= n || u >= v) {
            throw ValidationError("edge " + std::to_string(i) + " is not a normalised pair in range");
        }
        if (i > 0 && !(edges[i - 1] < edges[i])) {
            throw ValidationError("edge list not sorted/unique at " + std::to_string(i));
        }
    }
}

}  // namespace bihyb

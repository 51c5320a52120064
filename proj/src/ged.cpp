#include "bihyb/ged.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "bihyb/error.hpp"

namespace bihyb {

std::vector<NodeId> NodeMapping::inserted() const {
    std::vector<char> hit(static_cast<std::size_t>(g2_size), 0);
    for (NodeId t : target)
        if (t != kEpsilon) hit[static_cast<std::size_t>(t)] = 1;
    std::vector<NodeId> result;
    for (NodeId j = 0; j < g2_size; ++j)
        if (!hit[static_cast<std::size_t>(j)]) result.push_back(j);
    return result;
}

void validate_mapping(const LabeledGraph& g1, const LabeledGraph& g2, const NodeMapping& m) {
    if (static_cast<int>(m.target.size()) != g1.node_count() || m.g2_size != g2.node_count()) {
        throw ContractError("mapping shape does not match graphs");
    }
    std::vector<char> hit(static_cast<std::size_t>(g2.node_count()), 0);
    for (NodeId t : m.target) {
        if (t == kEpsilon) continue;
        if (t < 0 || t >= g2.node_count()) throw ContractError("mapping target out of range");
        if (hit[static_cast<std::size_t>(t)]) throw ContractError("mapping is not injective");
        hit[static_cast<std::size_t>(t)] = 1;
    }
}

Cost edit_cost(const LabeledGraph& g1, const LabeledGraph& g2, const NodeMapping& m, const CostModel& c) {
    validate_mapping(g1, g2, m);
    std::vector<NodeId> preimage(static_cast<std::size_t>(g2.node_count()), kEpsilon);
    Cost cost = 0;
    for (NodeId i = 0; i < g1.node_count(); ++i) {
        const NodeId t = m.target[static_cast<std::size_t>(i)];
        if (t == kEpsilon) {
            cost += c.node_indel;
        } else {
            cost += c.substitution(g1.label(i), g2.label(t));
            preimage[static_cast<std::size_t>(t)] = i;
        }
    }
    for (NodeId p : preimage)
        if (p == kEpsilon) cost += c.node_indel;
    for (const auto& [u, v] : g1.edges()) {
        const NodeId a = m.target[static_cast<std::size_t>(u)];
        const NodeId b = m.target[static_cast<std::size_t>(v)];
        if (a == kEpsilon || b == kEpsilon || !g2.has_edge(a, b)) cost += c.edge_indel;
    }
    for (const auto& [a, b] : g2.edges()) {
        const NodeId u = preimage[static_cast<std::size_t>(a)];
        const NodeId v = preimage[static_cast<std::size_t>(b)];
        if (u == kEpsilon || v == kEpsilon || !g1.has_edge(u, v)) cost += c.edge_indel;
    }
    return cost;
}

std::pair<std::vector<Cost>, std::vector<Cost>> node_edit_costs(const LabeledGraph& g1, const LabeledGraph& g2,
                                                                const NodeMapping& m, const CostModel& c) {
    validate_mapping(g1, g2, m);
    std::vector<Cost> c1(static_cast<std::size_t>(g1.node_count()), 0);
    std::vector<Cost> c2(static_cast<std::size_t>(g2.node_count()), 0);
    std::vector<NodeId> preimage(static_cast<std::size_t>(g2.node_count()), kEpsilon);
    for (NodeId i = 0; i < g1.node_count(); ++i) {
        const NodeId t = m.target[static_cast<std::size_t>(i)];
        if (t == kEpsilon) {
            c1[static_cast<std::size_t>(i)] = c.node_indel;
        } else {
            c1[static_cast<std::size_t>(i)] = c.substitution(g1.label(i), g2.label(t));
            preimage[static_cast<std::size_t>(t)] = i;
        }
    }
    for (NodeId j = 0; j < g2.node_count(); ++j)
        if (preimage[static_cast<std::size_t>(j)] == kEpsilon) c2[static_cast<std::size_t>(j)] = c.node_indel;
    for (const auto& [u, v] : g1.edges()) {
        const NodeId a = m.target[static_cast<std::size_t>(u)];
        const NodeId b = m.target[static_cast<std::size_t>(v)];
        if (a == kEpsilon || b == kEpsilon || !g2.has_edge(a, b)) {
            c1[static_cast<std::size_t>(u)] += c.edge_indel;
            c1[static_cast<std::size_t>(v)] += c.edge_indel;
        }
    }
    for (const auto& [a, b] : g2.edges()) {
        const NodeId u = preimage[static_cast<std::size_t>(a)];
        const NodeId v = preimage[static_cast<std::size_t>(b)];
        if (u == kEpsilon || v == kEpsilon || !g1.has_edge(u, v)) {
            c2[static_cast<std::size_t>(a)] += c.edge_indel;
            c2[static_cast<std::size_t>(b)] += c.edge_indel;
        }
    }
    return {std::move(c1), std::move(c2)};
}

DenseMatrix padded_permutation(const NodeMapping& m, int g1_size) {
    const int n1 = g1_size;
    const int n2 = m.g2_size;
    const auto size = static_cast<std::size_t>(n1 + n2);
    DenseMatrix x(size, size, 0.0);
    std::vector<char> covered(static_cast<std::size_t>(n2), 0);
    std::vector<NodeId> deleted;
    for (int i = 0; i < n1; ++i) {
        const NodeId t = m.target[static_cast<std::size_t>(i)];
        if (t == kEpsilon) {
            x(static_cast<std::size_t>(i), static_cast<std::size_t>(n2 + i)) = 1.0;
            deleted.push_back(i);
        } else {
            x(static_cast<std::size_t>(i), static_cast<std::size_t>(t)) = 1.0;
            covered[static_cast<std::size_t>(t)] = 1;
        }
    }
    // Remaining dummy rows take the insertion diagonal or a free dummy column.
    std::vector<std::size_t> free_dummy_cols;
    for (int i = 0; i < n1; ++i)
        if (m.target[static_cast<std::size_t>(i)] != kEpsilon) free_dummy_cols.push_back(static_cast<std::size_t>(n2 + i));
    std::size_t next = 0;
    for (int j = 0; j < n2; ++j) {
        const auto r = static_cast<std::size_t>(n1 + j);
        if (!covered[static_cast<std::size_t>(j)]) {
            x(r, static_cast<std::size_t>(j)) = 1.0;
        } else {
            x(r, free_dummy_cols[next++]) = 1.0;
        }
    }
    return x;
}

namespace {

double bipartite_big(double max_entry, std::size_t size) {
    return 1.0 + max_entry * static_cast<double>(size + 1);
}

}  // namespace

GedResult hungarian_ged(const LabeledGraph& g1, const LabeledGraph& g2, const CostModel& c) {
    const int n1 = g1.node_count();
    const int n2 = g2.node_count();
    const auto size = static_cast<std::size_t>(n1 + n2);
    const double half_edge = 0.5 * static_cast<double>(c.edge_indel);

    DenseMatrix costs(size, size, 0.0);
    std::vector<char> allowed(size * size, 0);
    double max_entry = 0.0;
    auto set = [&](std::size_t r, std::size_t col, double v) {
        costs(r, col) = v;
        allowed[r * size + col] = 1;
        max_entry = std::max(max_entry, v);
    };
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            set(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                static_cast<double>(c.substitution(g1.label(i), g2.label(j))) +
                    half_edge * std::abs(g1.degree(i) - g2.degree(j)));
        }
        set(static_cast<std::size_t>(i), static_cast<std::size_t>(n2 + i),
            static_cast<double>(c.node_indel) + half_edge * g1.degree(i));
    }
    for (int j = 0; j < n2; ++j) {
        set(static_cast<std::size_t>(n1 + j), static_cast<std::size_t>(j),
            static_cast<double>(c.node_indel) + half_edge * g2.degree(j));
        for (int i = 0; i < n1; ++i) set(static_cast<std::size_t>(n1 + j), static_cast<std::size_t>(n2 + i), 0.0);
    }
    const double big = bipartite_big(max_entry, size);
    for (std::size_t k = 0; k < size * size; ++k)
        if (!allowed[k]) costs.flat()[k] = big;

    const auto lsap = hungarian_lsap(costs);
    GedResult result;
    result.mapping.g2_size = n2;
    result.mapping.target.assign(static_cast<std::size_t>(n1), kEpsilon);
    for (int i = 0; i < n1; ++i) {
        const int col = lsap.col_of_row[static_cast<std::size_t>(i)];
        if (col < n2) result.mapping.target[static_cast<std::size_t>(i)] = col;
    }
    result.cost = edit_cost(g1, g2, result.mapping, c);
    return result;
}

GedResult brute_force_ged(const LabeledGraph& g1, const LabeledGraph& g2, const CostModel& c) {
    const int n1 = g1.node_count();
    const int n2 = g2.node_count();
    if (n1 + n2 > 16) throw ContractError("brute_force_ged: n1 + n2 must be <= 16");

    std::vector<NodeId> target(static_cast<std::size_t>(n1), kEpsilon);
    std::vector<char> used(static_cast<std::size_t>(n2), 0);
    GedResult best;
    best.cost = std::numeric_limits<Cost>::max();
    best.mapping.g2_size = n2;

    // Cost of everything that becomes final once all g1 nodes are placed:
    // inserted nodes and g2 edges touching an inserted node.
    auto completion_cost = [&]() {
        Cost cost = 0;
        for (NodeId j = 0; j < n2; ++j)
            if (!used[static_cast<std::size_t>(j)]) cost += c.node_indel;
        for (const auto& [a, b] : g2.edges())
            if (!used[static_cast<std::size_t>(a)] || !used[static_cast<std::size_t>(b)]) cost += c.edge_indel;
        return cost;
    };

    auto recurse = [&](auto&& self, int i, Cost acc) -> void {
        if (acc >= best.cost) return;
        if (i == n1) {
            const Cost total = acc + completion_cost();
            if (total < best.cost) {
                best.cost = total;
                best.mapping.target = target;
            }
            return;
        }
        auto place = [&](NodeId t) {
            Cost delta = t == kEpsilon ? c.node_indel : c.substitution(g1.label(i), g2.label(t));
            for (int k = 0; k < i; ++k) {
                const NodeId tk = target[static_cast<std::size_t>(k)];
                const bool e1 = g1.has_edge(i, k);
                const bool e2 = t != kEpsilon && tk != kEpsilon && g2.has_edge(t, tk);
                if (e1 != e2) delta += c.edge_indel;
            }
            target[static_cast<std::size_t>(i)] = t;
            if (t != kEpsilon) used[static_cast<std::size_t>(t)] = 1;
            self(self, i + 1, acc + delta);
            if (t != kEpsilon) used[static_cast<std::size_t>(t)] = 0;
            target[static_cast<std::size_t>(i)] = kEpsilon;
        };
        for (NodeId t = 0; t < n2; ++t)
            if (!used[static_cast<std::size_t>(t)]) place(t);
        place(kEpsilon);
    };
    recurse(recurse, 0, 0);
    return best;
}

std::string_view to_string(GedHeuristic h) {
    return h == GedHeuristic::hungarian ? "hungarian" : "ipfp";
}

GedResult solve_ged(const LabeledGraph& g1, const LabeledGraph& g2, GedHeuristic h, const CostModel& c) {
    return h == GedHeuristic::hungarian ? hungarian_ged(g1, g2, c) : ipfp_ged(g1, g2, c);
}

}  // namespace bihyb

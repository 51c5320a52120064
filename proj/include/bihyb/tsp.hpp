#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "bihyb/graph.hpp"

namespace bihyb {

/// Symmetric non-negative integer distance matrix with zero diagonal.
class TspMatrix {
public:
    TspMatrix() = default;
    explicit TspMatrix(int n, Weight fill = 0);

    int size() const noexcept { return n_; }
    Weight at(NodeId u, NodeId v) const {
        return w_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)];
    }
    /// Sets both (u, v) and (v, u). u != v, weight >= 0.
    void set(NodeId u, NodeId v, Weight weight);
    void add(NodeId u, NodeId v, Weight delta) { set(u, v, at(u, v) + delta); }

    friend bool operator==(const TspMatrix&, const TspMatrix&) = default;

private:
    int n_ = 0;
    std::vector<Weight> w_;
};

/// Penalty added to an edge by one upper-level HCP action.
inline constexpr Weight kEdgePenalty = 10;

struct Tour {
    std::vector<NodeId> order;
    Weight length = 0;
    friend bool operator==(const Tour&, const Tour&) = default;
};

/// Binary TSP: 0 for graph edges, 1 for non-edges. Throws ContractError if n < 3.
TspMatrix hcp_to_tsp(const HcpInstance& h);

/// Throws ContractError if `order` is not a permutation of [0, n).
Weight tour_length(const TspMatrix& m, const std::vector<NodeId>& order);
bool is_hamiltonian_cycle(const HcpInstance& h, const std::vector<NodeId>& order);

Tour nearest_neighbor(const TspMatrix& m, NodeId start = 0);
Tour farthest_insertion(const TspMatrix& m);

struct LocalSearchStats {
    int moves = 0;
    /// Incrementally tracked length after every accepted move.
    std::vector<Weight> lengths;
    /// Whether each tracked length matched a full recomputation.
    bool consistent = true;
};

/// 2-opt and Or-opt (segments of 1 to 3 nodes, both orientations) with
/// first improvement and don't-look bits, until no improving move remains.
/// Passing `stats` enables full-length recomputation after every move.
Tour improve_tour(const TspMatrix& m, std::vector<NodeId> order, LocalSearchStats* stats = nullptr);

/// Randomised greedy construction followed by improve_tour, repeated
/// `restarts` times with independent streams derived from `seed`; returns the
/// shortest tour (earliest restart on ties) and stops early at length 0.
/// Throws ContractError if restarts < 1.
Tour lk_search(const TspMatrix& m, int restarts, std::uint64_t seed);

inline constexpr int kLkFastRestarts = 5;
inline constexpr int kLkAccurateRestarts = 100;

enum class TspHeuristic { nn, fi, lk_fast, lk_accu };
std::string_view to_string(TspHeuristic h);

Tour solve_tsp(const TspMatrix& m, TspHeuristic h, std::uint64_t seed);

}  // namespace bihyb

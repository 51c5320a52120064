#include "bihyb/tsp.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "bihyb/error.hpp"
#include "bihyb/rng.hpp"

namespace bihyb {

TspMatrix::TspMatrix(int n, Weight fill) : n_(n) {
    if (n < 0) throw ContractError("negative matrix size");
    w_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill);
    for (int i = 0; i < n; ++i) w_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n + 1)] = 0;
}

void TspMatrix::set(NodeId u, NodeId v, Weight weight) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw ContractError("node id out of range");
    if (u == v) throw ContractError("diagonal is fixed at zero");
    if (weight < 0) throw ContractError("negative weight");
    const auto n = static_cast<std::size_t>(n_);
    w_[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)] = weight;
    w_[static_cast<std::size_t>(v) * n + static_cast<std::size_t>(u)] = weight;
}

TspMatrix hcp_to_tsp(const HcpInstance& h) {
    if (h.n < 3) throw ContractError("hcp_to_tsp: need at least 3 nodes");
    TspMatrix m(h.n, 1);
    for (const auto& [u, v] : h.edges) m.set(u, v, 0);
    return m;
}

namespace {

void check_permutation(int n, const std::vector<NodeId>& order) {
    if (static_cast<int>(order.size()) != n) throw ContractError("tour is not a permutation");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (NodeId u : order) {
        if (u < 0 || u >= n || seen[static_cast<std::size_t>(u)]) throw ContractError("tour is not a permutation");
        seen[static_cast<std::size_t>(u)] = 1;
    }
}

Weight cycle_length(const TspMatrix& m, const std::vector<NodeId>& order) {
    Weight len = 0;
    const std::size_t n = order.size();
    for (std::size_t i = 0; i < n; ++i) len += m.at(order[i], order[(i + 1) % n]);
    return len;
}

}  // namespace

Weight tour_length(const TspMatrix& m, const std::vector<NodeId>& order) {
    check_permutation(m.size(), order);
    return cycle_length(m, order);
}

bool is_hamiltonian_cycle(const HcpInstance& h, const std::vector<NodeId>& order) {
    check_permutation(h.n, order);
    if (h.n < 3) return false;
    const std::size_t n = order.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto e = std::minmax(order[i], order[(i + 1) % n]);
        if (!std::binary_search(h.edges.begin(), h.edges.end(), std::pair<NodeId, NodeId>(e.first, e.second))) {
            return false;
        }
    }
    return true;
}

Tour nearest_neighbor(const TspMatrix& m, NodeId start) {
    const int n = m.size();
    if (n == 0) return {};
    if (start < 0 || start >= n) throw ContractError("start node out of range");
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    Tour t;
    t.order.reserve(static_cast<std::size_t>(n));
    NodeId cur = start;
    visited[static_cast<std::size_t>(cur)] = 1;
    t.order.push_back(cur);
    for (int step = 1; step < n; ++step) {
        NodeId next = -1;
        for (NodeId v = 0; v < n; ++v) {
            if (visited[static_cast<std::size_t>(v)]) continue;
            if (next < 0 || m.at(cur, v) < m.at(cur, next)) next = v;
        }
        visited[static_cast<std::size_t>(next)] = 1;
        t.order.push_back(next);
        cur = next;
    }
    t.length = cycle_length(m, t.order);
    return t;
}

Tour farthest_insertion(const TspMatrix& m) {
    const int n = m.size();
    if (n < 3) throw ContractError("farthest_insertion: need at least 3 nodes");
    NodeId a = 0;
    NodeId b = 1;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (m.at(u, v) > m.at(a, b)) {
                a = u;
                b = v;
            }
    std::vector<NodeId> tour{a, b};
    std::vector<char> in_tour(static_cast<std::size_t>(n), 0);
    in_tour[static_cast<std::size_t>(a)] = in_tour[static_cast<std::size_t>(b)] = 1;
    // dist[v] = min distance from v to any tour node
    std::vector<Weight> dist(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) dist[static_cast<std::size_t>(v)] = std::min(m.at(v, a), m.at(v, b));

    while (static_cast<int>(tour.size()) < n) {
        NodeId pick = -1;
        for (NodeId v = 0; v < n; ++v) {
            if (in_tour[static_cast<std::size_t>(v)]) continue;
            if (pick < 0 || dist[static_cast<std::size_t>(v)] > dist[static_cast<std::size_t>(pick)]) pick = v;
        }
        std::size_t best_pos = 0;
        Weight best_inc = std::numeric_limits<Weight>::max();
        for (std::size_t i = 0; i < tour.size(); ++i) {
            const NodeId p = tour[i];
            const NodeId q = tour[(i + 1) % tour.size()];
            const Weight inc = m.at(p, pick) + m.at(pick, q) - m.at(p, q);
            if (inc < best_inc) {
                best_inc = inc;
                best_pos = i + 1;
            }
        }
        tour.insert(tour.begin() + static_cast<std::ptrdiff_t>(best_pos), pick);
        in_tour[static_cast<std::size_t>(pick)] = 1;
        for (NodeId v = 0; v < n; ++v) {
            dist[static_cast<std::size_t>(v)] = std::min(dist[static_cast<std::size_t>(v)], m.at(v, pick));
        }
    }
    Tour t{std::move(tour), 0};
    t.length = cycle_length(m, t.order);
    return t;
}

namespace {

class LocalSearch {
public:
    LocalSearch(const TspMatrix& m, std::vector<NodeId> order, LocalSearchStats* stats)
        : m_(m), n_(m.size()), tour_(std::move(order)), pos_(static_cast<std::size_t>(n_)), stats_(stats) {
        for (int i = 0; i < n_; ++i) pos_[static_cast<std::size_t>(tour_[static_cast<std::size_t>(i)])] = i;
        length_ = cycle_length(m_, tour_);
    }

    Tour run() {
        if (n_ < 5) return {tour_, length_};  // no non-trivial moves on tiny cycles
        std::vector<NodeId> queue(tour_.begin(), tour_.end());
        std::vector<char> queued(static_cast<std::size_t>(n_), 1);
        std::size_t head = 0;
        while (head < queue.size() && length_ > 0) {
            const NodeId a = queue[head++];
            queued[static_cast<std::size_t>(a)] = 0;
            touched_.clear();
            if (two_opt(a) || or_opt(a)) {
                touched_.push_back(a);
                for (NodeId t : touched_) {
                    if (!queued[static_cast<std::size_t>(t)]) {
                        queued[static_cast<std::size_t>(t)] = 1;
                        queue.push_back(t);
                    }
                }
            }
            if (head > 4 * queue.size() / 5 && head > static_cast<std::size_t>(n_)) {
                queue.erase(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(head));
                head = 0;
            }
        }
        return {tour_, length_};
    }

private:
    NodeId at(int i) const { return tour_[static_cast<std::size_t>(((i % n_) + n_) % n_)]; }
    int pos(NodeId u) const { return pos_[static_cast<std::size_t>(u)]; }
    NodeId next(NodeId u) const { return at(pos(u) + 1); }
    NodeId prev(NodeId u) const { return at(pos(u) - 1); }
    Weight w(NodeId u, NodeId v) const { return m_.at(u, v); }

    // Reverses the cyclic stretch of positions i..j (inclusive).
    void reverse_positions(int i, int j) {
        int len = ((j - i) % n_ + n_) % n_ + 1;
        // Reversing the complement yields the same cycle; take the shorter side.
        if (2 * len > n_) {
            const int ni = j + 1;
            const int nj = i - 1;
            i = ni;
            j = nj;
            len = n_ - len;
        }
        for (int k = 0; k < len / 2; ++k) {
            const int pi = ((i + k) % n_ + n_) % n_;
            const int pj = ((j - k) % n_ + n_) % n_;
            std::swap(tour_[static_cast<std::size_t>(pi)], tour_[static_cast<std::size_t>(pj)]);
            pos_[static_cast<std::size_t>(tour_[static_cast<std::size_t>(pi)])] = pi;
            pos_[static_cast<std::size_t>(tour_[static_cast<std::size_t>(pj)])] = pj;
        }
    }

    void accept(Weight delta) {
        length_ += delta;
        if (stats_) {
            ++stats_->moves;
            stats_->lengths.push_back(length_);
            if (cycle_length(m_, tour_) != length_) stats_->consistent = false;
        }
    }

    bool two_opt(NodeId a) {
        // Successor side: replace (a, b) and (c, d) by (a, c) and (b, d).
        for (int dir = 0; dir < 2; ++dir) {
            const NodeId b = dir == 0 ? next(a) : prev(a);
            const Weight ab = w(a, b);
            if (ab == 0) continue;
            for (NodeId c = 0; c < n_; ++c) {
                if (c == a || c == b) continue;
                const Weight ac = w(a, c);
                if (ac >= ab) continue;
                const NodeId d = dir == 0 ? next(c) : prev(c);
                if (d == a) continue;
                const Weight delta = ac + w(b, d) - ab - w(c, d);
                if (delta < 0) {
                    if (dir == 0) {
                        reverse_positions(pos(b), pos(c));
                    } else {
                        reverse_positions(pos(c), pos(b));
                    }
                    touched_.insert(touched_.end(), {b, c, d});
                    accept(delta);
                    return true;
                }
            }
        }
        return false;
    }

    bool or_opt(NodeId a) {
        for (int len = 1; len <= 3 && len <= n_ - 3; ++len) {
            const NodeId first = a;
            const NodeId last = at(pos(a) + len - 1);
            const NodeId p = prev(first);
            const NodeId nx = next(last);
            const Weight removal = w(p, first) + w(last, nx) - w(p, nx);
            if (removal <= 0) continue;
            for (NodeId c = 0; c < n_; ++c) {
                // c must lie outside the segment and not be its predecessor.
                const int offset = ((pos(c) - pos(first)) % n_ + n_) % n_;
                if (offset < len || c == p) continue;
                const NodeId d = next(c);
                const Weight base = w(c, d);
                const Weight fwd = w(c, first) + w(last, d) - base;
                const Weight rev = w(c, last) + w(first, d) - base;
                const bool reversed = rev < fwd;
                const Weight insertion = reversed ? rev : fwd;
                if (insertion - removal < 0) {
                    move_segment(first, len, c, reversed);
                    touched_.insert(touched_.end(), {p, nx, c, d, last});
                    accept(insertion - removal);
                    return true;
                }
            }
        }
        return false;
    }

    void move_segment(NodeId first, int len, NodeId after, bool reversed) {
        std::vector<NodeId> segment;
        for (int k = 0; k < len; ++k) segment.push_back(at(pos(first) + k));
        if (reversed) std::reverse(segment.begin(), segment.end());
        std::vector<NodeId> rebuilt;
        rebuilt.reserve(static_cast<std::size_t>(n_));
        // Walk the cycle from just after the segment, splicing it in after `after`.
        NodeId u = at(pos(first) + len);
        for (int k = 0; k < n_ - len; ++k) {
            rebuilt.push_back(u);
            if (u == after) rebuilt.insert(rebuilt.end(), segment.begin(), segment.end());
            u = next(u);
        }
        tour_ = std::move(rebuilt);
        for (int i = 0; i < n_; ++i) pos_[static_cast<std::size_t>(tour_[static_cast<std::size_t>(i)])] = i;
    }

    const TspMatrix& m_;
    int n_;
    std::vector<NodeId> tour_;
    std::vector<int> pos_;
    LocalSearchStats* stats_;
    Weight length_ = 0;
    std::vector<NodeId> touched_;
};

std::vector<NodeId> randomized_greedy(const TspMatrix& m, Rng& rng) {
    const int n = m.size();
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    std::vector<NodeId> order;
    order.reserve(static_cast<std::size_t>(n));
    NodeId cur = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
    visited[static_cast<std::size_t>(cur)] = 1;
    order.push_back(cur);
    std::vector<NodeId> ties;
    for (int step = 1; step < n; ++step) {
        Weight best = std::numeric_limits<Weight>::max();
        ties.clear();
        for (NodeId v = 0; v < n; ++v) {
            if (visited[static_cast<std::size_t>(v)]) continue;
            const Weight d = m.at(cur, v);
            if (d < best) {
                best = d;
                ties.assign(1, v);
            } else if (d == best) {
                ties.push_back(v);
            }
        }
        cur = ties[rng.below(ties.size())];
        visited[static_cast<std::size_t>(cur)] = 1;
        order.push_back(cur);
    }
    return order;
}

}  // namespace

Tour improve_tour(const TspMatrix& m, std::vector<NodeId> order, LocalSearchStats* stats) {
    check_permutation(m.size(), order);
    return LocalSearch(m, std::move(order), stats).run();
}

Tour lk_search(const TspMatrix& m, int restarts, std::uint64_t seed) {
    if (restarts < 1) throw ContractError("lk_search: restarts must be >= 1");
    const Rng root(seed);
    Tour best;
    bool have = false;
    for (int r = 0; r < restarts; ++r) {
        Rng rng = root.split(static_cast<std::uint64_t>(r));
        Tour t = m.size() == 0 ? Tour{} : LocalSearch(m, randomized_greedy(m, rng), nullptr).run();
        if (!have || t.length < best.length) {
            best = std::move(t);
            have = true;
        }
        if (best.length == 0) break;
    }
    return best;
}

std::string_view to_string(TspHeuristic h) {
    switch (h) {
        case TspHeuristic::nn: return "nn";
        case TspHeuristic::fi: return "fi";
        case TspHeuristic::lk_fast: return "lk_fast";
        case TspHeuristic::lk_accu: return "lk_accu";
    }
    return "?";
}

Tour solve_tsp(const TspMatrix& m, TspHeuristic h, std::uint64_t seed) {
    switch (h) {
        case TspHeuristic::nn: return nearest_neighbor(m, 0);
        case TspHeuristic::fi: return farthest_insertion(m);
        case TspHeuristic::lk_fast: return lk_search(m, kLkFastRestarts, seed);
        case TspHeuristic::lk_accu: return lk_search(m, kLkAccurateRestarts, seed);
    }
    throw ContractError("unknown tsp heuristic");
}

}  // namespace bihyb

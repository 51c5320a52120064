#include "bihyb/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "bihyb/error.hpp"
#include "bihyb/rng.hpp"

namespace bihyb {

namespace {

// Mean of min_nodes + G, G ~ Geometric(p) on {0, 1, ...}, conditioned on the
// sum not exceeding max_nodes.
double truncated_mean(double p, int lo, int hi) {
    double mass = 0.0;
    double first = 0.0;
    double prob = p;
    for (int k = 0; k <= hi - lo; ++k) {
        mass += prob;
        first += prob * k;
        prob *= 1.0 - p;
    }
    return lo + first / mass;
}

}  // namespace

double job_size_parameter(const DagGenOptions& opts) {
    if (opts.min_nodes < 1 || opts.max_nodes < opts.min_nodes) throw ContractError("bad job size range");
    const double target = opts.mean_nodes;
    if (target <= opts.min_nodes || target >= 0.5 * (opts.min_nodes + opts.max_nodes)) {
        throw ContractError("mean node count not reachable by a truncated geometric law");
    }
    // The truncated mean decreases monotonically in p.
    double lo = 1e-9;
    double hi = 1.0 - 1e-9;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (truncated_mean(mid, opts.min_nodes, opts.max_nodes) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

DagInstance generate_job_dag(std::uint64_t seed, const DagGenOptions& opts) {
    Rng rng(seed);
    const double p = job_size_parameter(opts);
    int n = 0;
    do {
        int extra = 0;
        while (rng.uniform01() >= p) ++extra;  // failures before first success
        n = opts.min_nodes + extra;
    } while (n > opts.max_nodes);

    // Layer 0 holds the sources; each later layer is non-empty.
    const int layers = static_cast<int>(rng.uniform_int(2, std::min(n, 6)));
    std::vector<int> layer_of(static_cast<std::size_t>(n));
    for (int i = 0; i < layers; ++i) layer_of[static_cast<std::size_t>(i)] = i;
    for (int i = layers; i < n; ++i) layer_of[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_int(0, layers - 1));
    std::sort(layer_of.begin(), layer_of.end());

    DagInstance inst;
    inst.graph = WeightedDigraph(n);
    inst.capacity = opts.capacity;
    for (int v = 0; v < n; ++v) {
        const int layer = layer_of[static_cast<std::size_t>(v)];
        if (layer > 0) {
            std::vector<NodeId> prev_layer;
            std::vector<NodeId> earlier;
            for (int u = 0; u < v; ++u) {
                if (layer_of[static_cast<std::size_t>(u)] == layer - 1) prev_layer.push_back(u);
                if (layer_of[static_cast<std::size_t>(u)] < layer) earlier.push_back(u);
            }
            const NodeId parent = prev_layer[rng.below(prev_layer.size())];
            inst.graph.add_edge(parent, v);
            if (earlier.size() > 1 && rng.uniform01() < 0.25) {
                const NodeId extra = earlier[rng.below(earlier.size())];
                if (extra != parent) inst.graph.add_edge(extra, v);
            }
        }
        const double log_lo = std::log(opts.min_duration_s);
        const double log_hi = std::log(opts.max_duration_s);
        const double seconds = std::exp(log_lo + (log_hi - log_lo) * rng.uniform01());
        const auto us = static_cast<Micros>(std::llround(seconds * static_cast<double>(kMicrosPerSecond)));
        inst.duration.push_back(std::clamp(us, static_cast<Micros>(std::llround(opts.min_duration_s * 1e6)),
                                           static_cast<Micros>(std::llround(opts.max_duration_s * 1e6))));
        inst.resource.push_back(static_cast<int>(rng.uniform_int(opts.min_resource, opts.max_resource)));
    }
    return inst;
}

DagInstance generate_dag_instance(int n_dags, std::uint64_t seed, const DagGenOptions& opts) {
    if (n_dags < 1) throw ContractError("n_dags must be >= 1");
    const Rng root(seed);
    std::vector<DagInstance> jobs;
    int total = 0;
    for (int j = 0; j < n_dags; ++j) {
        jobs.push_back(generate_job_dag(root.split(static_cast<std::uint64_t>(j)).next(), opts));
        total += jobs.back().node_count();
    }
    DagInstance inst;
    inst.graph = WeightedDigraph(total);
    inst.capacity = opts.capacity;
    int offset = 0;
    for (const auto& job : jobs) {
        for (const Edge& e : job.graph.edges()) inst.graph.add_edge(e.src + offset, e.dst + offset);
        inst.duration.insert(inst.duration.end(), job.duration.begin(), job.duration.end());
        inst.resource.insert(inst.resource.end(), job.resource.begin(), job.resource.end());
        offset += job.node_count();
    }
    return inst;
}

std::vector<DagInstance> generate_dag_set(int count, int n_dags, std::uint64_t seed, const DagGenOptions& opts) {
    const Rng root = Rng(seed).split("dag-set");
    std::vector<DagInstance> out;
    for (int i = 0; i < count; ++i) out.push_back(generate_dag_instance(n_dags, root.split(static_cast<std::uint64_t>(i)).next(), opts));
    return out;
}

namespace {

int draw_label(Rng& rng, int label_types) {
    // Carbon-heavy frequencies: label 0 about half the time, then a decaying tail.
    if (label_types <= 1) return 0;
    if (rng.uniform01() < 0.5) return 0;
    double total = 0.0;
    for (int l = 1; l < label_types; ++l) total += 1.0 / l;
    double u = rng.uniform01() * total;
    for (int l = 1; l < label_types; ++l) {
        u -= 1.0 / l;
        if (u < 0.0) return l;
    }
    return label_types - 1;
}

constexpr int kMaxValence = 4;

bool try_add_edge(LabeledGraph& g, NodeId u, NodeId v) {
    if (u == v || g.has_edge(u, v) || g.degree(u) >= kMaxValence || g.degree(v) >= kMaxValence) return false;
    g.add_edge(u, v);
    return true;
}

}  // namespace

LabeledGraph generate_molecule(int n, int label_types, std::uint64_t seed) {
    if (n < 0) throw ContractError("negative node count");
    Rng rng(seed);
    std::vector<int> labels;
    for (int i = 0; i < n; ++i) labels.push_back(draw_label(rng, label_types));
    LabeledGraph g(std::move(labels));
    for (NodeId v = 1; v < n; ++v) {
        for (int attempt = 0; attempt < 32; ++attempt) {
            const auto u = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(v)));
            if (try_add_edge(g, u, v)) break;
        }
    }
    const int rings = n / 6;
    for (int r = 0; r < rings; ++r) {
        for (int attempt = 0; attempt < 32; ++attempt) {
            const auto u = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
            const auto v = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
            if (try_add_edge(g, u, v)) break;
        }
    }
    return g;
}

GedPair generate_ged_pair(std::uint64_t seed, const GedGenOptions& opts) {
    if (opts.min_nodes < 0 || opts.max_nodes < opts.min_nodes) throw ContractError("bad node range");
    Rng rng(seed);
    const int n = static_cast<int>(rng.uniform_int(opts.min_nodes, opts.max_nodes));
    LabeledGraph g1 = generate_molecule(n, opts.label_types, rng.next());

    // Edit a working copy kept as label list + edge set so nodes can come and go.
    std::vector<int> labels = g1.labels();
    std::set<std::pair<NodeId, NodeId>> edges;
    for (const auto& e : g1.edges()) edges.insert(e);
    const int edits = opts.edits >= 0 ? opts.edits : static_cast<int>(rng.uniform_int(n / 2, std::max(n / 2, n)));

    auto toggle = [&](NodeId u, NodeId v) {
        if (u == v) return false;
        auto e = std::minmax(u, v);
        auto key = std::pair<NodeId, NodeId>(e.first, e.second);
        if (!edges.erase(key)) edges.insert(key);
        return true;
    };
    for (int done = 0; done < edits;) {
        const int size = static_cast<int>(labels.size());
        const double r = opts.edge_edits_only ? 0.0 : rng.uniform01();
        if (r < 0.45) {
            if (size < 2) break;
            const auto u = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(size)));
            const auto v = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(size)));
            if (toggle(u, v)) ++done;
        } else if (r < 0.75) {
            if (size == 0 || opts.label_types < 2) continue;
            const auto u = rng.below(static_cast<std::uint64_t>(size));
            const int old = labels[u];
            int fresh = draw_label(rng, opts.label_types);
            if (fresh == old) fresh = (old + 1) % opts.label_types;
            labels[u] = fresh;
            ++done;
        } else if (r < 0.875) {
            if (size <= opts.min_nodes || size == 0) continue;
            const auto u = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(size)));
            std::set<std::pair<NodeId, NodeId>> kept;
            for (auto [a, b] : edges) {
                if (a == u || b == u) continue;
                kept.emplace(a > u ? a - 1 : a, b > u ? b - 1 : b);
            }
            edges.swap(kept);
            labels.erase(labels.begin() + u);
            ++done;
        } else {
            if (size >= opts.max_nodes) continue;
            labels.push_back(draw_label(rng, opts.label_types));
            if (size > 0) toggle(static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(size))), size);
            ++done;
        }
    }

    const int n2 = static_cast<int>(labels.size());
    std::vector<NodeId> perm(static_cast<std::size_t>(n2));
    std::iota(perm.begin(), perm.end(), 0);
    if (opts.shuffle) rng.shuffle(perm);
    std::vector<int> shuffled(static_cast<std::size_t>(n2));
    for (int i = 0; i < n2; ++i) shuffled[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = labels[static_cast<std::size_t>(i)];
    LabeledGraph g2(std::move(shuffled));
    for (auto [a, b] : edges) g2.add_edge(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
    return GedPair{std::move(g1), std::move(g2)};
}

std::vector<GedPair> generate_ged_set(int count, std::uint64_t seed, const GedGenOptions& opts) {
    const Rng root = Rng(seed).split("ged-set");
    std::vector<GedPair> out;
    for (int i = 0; i < count; ++i) out.push_back(generate_ged_pair(root.split(static_cast<std::uint64_t>(i)).next(), opts));
    return out;
}

PlantedHcp generate_planted_hcp(int n, double noise_factor, std::uint64_t seed) {
    if (n < 3) throw ContractError("planted HCP needs n >= 3");
    if (noise_factor < 0.0) throw ContractError("noise factor must be >= 0");
    Rng rng(seed);
    PlantedHcp out;
    out.witness.resize(static_cast<std::size_t>(n));
    std::iota(out.witness.begin(), out.witness.end(), 0);
    rng.shuffle(out.witness);
    std::set<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i < n; ++i) {
        auto e = std::minmax(out.witness[static_cast<std::size_t>(i)], out.witness[static_cast<std::size_t>((i + 1) % n)]);
        edges.emplace(e.first, e.second);
    }
    const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
    const long long target = std::min<long long>(max_edges, static_cast<long long>(edges.size()) +
                                                                std::llround(noise_factor * n));
    while (static_cast<long long>(edges.size()) < target) {
        const auto u = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
        const auto v = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
        if (u == v) continue;
        auto e = std::minmax(u, v);
        edges.emplace(e.first, e.second);
    }
    out.instance = HcpInstance::from_edges(n, {edges.begin(), edges.end()});
    return out;
}

std::vector<PlantedHcp> generate_hcp_set(int count, int n, double noise_factor, std::uint64_t seed) {
    const Rng root = Rng(seed).split("hcp-set");
    std::vector<PlantedHcp> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(generate_planted_hcp(n, noise_factor, root.split(static_cast<std::uint64_t>(i)).next()));
    }
    return out;
}

}  // namespace bihyb

#include "bihyb/env.hpp"

#include <algorithm>

#include "bihyb/error.hpp"
#include "bihyb/rng.hpp"

namespace bihyb {

namespace {

thread_local std::int64_t g_lower_solves = 0;

constexpr std::array<std::pair<LowerHeuristic, std::string_view>, 8> kHeuristicNames{{
    {LowerHeuristic::critical_path, "critical_path"},
    {LowerHeuristic::sjf, "sjf"},
    {LowerHeuristic::hungarian, "hungarian"},
    {LowerHeuristic::ipfp, "ipfp"},
    {LowerHeuristic::nn, "nn"},
    {LowerHeuristic::fi, "fi"},
    {LowerHeuristic::lk_fast, "lk_fast"},
    {LowerHeuristic::lk_accu, "lk_accu"},
}};

}  // namespace

std::int64_t lower_solve_counter() noexcept { return g_lower_solves; }

std::string_view to_string(LowerHeuristic h) {
    for (const auto& [value, name] : kHeuristicNames)
        if (value == h) return name;
    return "?";
}

LowerHeuristic heuristic_from_string(std::string_view name) {
    for (const auto& [value, n] : kHeuristicNames)
        if (n == name) return value;
    throw ContractError("unknown heuristic '" + std::string(name) + "'");
}

ProblemKind problem_of(LowerHeuristic h) {
    switch (h) {
        case LowerHeuristic::critical_path:
        case LowerHeuristic::sjf: return ProblemKind::dag;
        case LowerHeuristic::hungarian:
        case LowerHeuristic::ipfp: return ProblemKind::ged;
        default: return ProblemKind::hcp;
    }
}

LowerHeuristic default_heuristic(ProblemKind p) {
    switch (p) {
        case ProblemKind::dag: return LowerHeuristic::critical_path;
        case ProblemKind::ged: return LowerHeuristic::ipfp;
        case ProblemKind::hcp: return LowerHeuristic::lk_fast;
    }
    return LowerHeuristic::critical_path;
}

int default_horizon(ProblemKind p) {
    switch (p) {
        case ProblemKind::dag: return 20;
        case ProblemKind::ged: return 10;
        case ProblemKind::hcp: return 8;
    }
    return 1;
}

EnvConfig EnvConfig::defaults(ProblemKind p, std::uint64_t seed) {
    EnvConfig cfg;
    cfg.problem = p;
    cfg.K = default_horizon(p);
    cfg.heuristic = default_heuristic(p);
    cfg.seed = seed;
    return cfg;
}

void EnvConfig::validate() const {
    if (K < 1) throw ContractError("K must be >= 1");
    if (problem_of(heuristic) != problem) {
        throw ContractError("heuristic '" + std::string(to_string(heuristic)) + "' does not solve " +
                            std::string(to_string(problem)) + " instances");
    }
}

namespace {

DagHeuristic dag_heuristic(LowerHeuristic h) {
    return h == LowerHeuristic::sjf ? DagHeuristic::sjf : DagHeuristic::critical_path;
}

TspHeuristic tsp_heuristic(LowerHeuristic h) {
    switch (h) {
        case LowerHeuristic::nn: return TspHeuristic::nn;
        case LowerHeuristic::fi: return TspHeuristic::fi;
        case LowerHeuristic::lk_accu: return TspHeuristic::lk_accu;
        default: return TspHeuristic::lk_fast;
    }
}

Solution solve_lower(const EnvState& s) {
    ++g_lower_solves;
    const auto& cfg = s.config;
    switch (cfg.problem) {
        case ProblemKind::dag: {
            const auto& inst = std::get<DagInstance>(*s.original);
            return solve_dag(inst, std::get<WeightedDigraph>(s.current), dag_heuristic(cfg.heuristic)).schedule;
        }
        case ProblemKind::ged: {
            const auto& pair = std::get<GedPair>(*s.original);
            const auto h = cfg.heuristic == LowerHeuristic::hungarian ? GedHeuristic::hungarian : GedHeuristic::ipfp;
            return solve_ged(std::get<LabeledGraph>(s.current), pair.g2, h, cfg.ged_costs).mapping;
        }
        case ProblemKind::hcp: {
            const std::uint64_t seed = hash_combine(cfg.seed, s.history_hash);
            return solve_tsp(std::get<TspMatrix>(s.current), tsp_heuristic(cfg.heuristic), seed);
        }
    }
    throw ContractError("unknown problem");
}

ProblemKind problem_of(const Instance& inst) { return kind_of(inst); }

bool has_any_legal(const EnvState& s) { return !ActionSpace(s).empty(); }

void check_dag_action(const EnvState& s, ActionPair a) {
    const auto& g = std::get<WeightedDigraph>(s.current);
    if (a.a1 < 0 || a.a2 < 0 || a.a1 >= g.node_count() || a.a2 >= g.node_count()) {
        throw InvalidAction("node id out of range");
    }
    if (a.a1 == a.a2) throw InvalidAction("a1 == a2");
    if (g.has_edge(a.a1, a.a2)) throw InvalidAction("edge already present");
    if (would_create_cycle(g, a.a1, a.a2)) throw InvalidAction("edge would create a cycle");
}

}  // namespace

Objective upper_objective(const Instance& original, const Solution& x) {
    switch (kind_of(original)) {
        case ProblemKind::dag: {
            const auto& inst = std::get<DagInstance>(original);
            const auto& sched = std::get<Schedule>(x);
            return simulate_list_schedule(inst, PriorityOrder{sched.start_sequence}, inst.graph).makespan;
        }
        case ProblemKind::ged: {
            const auto& pair = std::get<GedPair>(original);
            return edit_cost(pair.g1, pair.g2, std::get<NodeMapping>(x));
        }
        case ProblemKind::hcp: {
            const auto& h = std::get<HcpInstance>(original);
            const auto pristine = hcp_to_tsp(h);
            return tour_length(pristine, std::get<Tour>(x).order);
        }
    }
    throw ContractError("unknown problem");
}

Solution upper_solution(const Instance& original, const Solution& x) {
    if (const auto* inst = std::get_if<DagInstance>(&original)) {
        const auto& sched = std::get<Schedule>(x);
        return simulate_list_schedule(*inst, PriorityOrder{sched.start_sequence}, inst->graph);
    }
    return x;
}

namespace {

// Same as upper_objective but uses the cached pristine matrix and the
// configured GED cost model.
std::pair<Objective, Solution> evaluate(const EnvState& s, const Solution& x) {
    switch (s.config.problem) {
        case ProblemKind::dag: {
            const auto& inst = std::get<DagInstance>(*s.original);
            auto replay = simulate_list_schedule(inst, PriorityOrder{std::get<Schedule>(x).start_sequence}, inst.graph);
            const Objective obj = replay.makespan;
            return {obj, std::move(replay)};
        }
        case ProblemKind::ged: {
            const auto& pair = std::get<GedPair>(*s.original);
            return {edit_cost(pair.g1, pair.g2, std::get<NodeMapping>(x), s.config.ged_costs), x};
        }
        case ProblemKind::hcp:
            return {tour_length(*s.pristine, std::get<Tour>(x).order), x};
    }
    throw ContractError("unknown problem");
}

}  // namespace

EnvState reset(std::shared_ptr<const Instance> instance, const EnvConfig& cfg) {
    cfg.validate();
    if (!instance) throw ContractError("null instance");
    if (problem_of(*instance) != cfg.problem) throw ContractError("instance kind does not match config");

    EnvState s;
    s.original = instance;
    s.config = cfg;
    switch (cfg.problem) {
        case ProblemKind::dag: {
            const auto& inst = std::get<DagInstance>(*instance);
            inst.validate();
            s.current = inst.graph;
            break;
        }
        case ProblemKind::ged:
            s.current = std::get<GedPair>(*instance).g1;
            break;
        case ProblemKind::hcp: {
            auto pristine = std::make_shared<const TspMatrix>(hcp_to_tsp(std::get<HcpInstance>(*instance)));
            s.current = *pristine;
            s.pristine = std::move(pristine);
            break;
        }
    }
    s.history_hash = hash_name("bihyb-episode");
    s.last_solution = solve_lower(s);
    s.lower_solves = 1;
    auto [obj, evaluated] = evaluate(s, s.last_solution);
    s.last_objective = obj;
    s.incumbent_objective = obj;
    s.incumbent_solution = std::move(evaluated);
    s.done = !has_any_legal(s);
    return s;
}

EnvState reset(const Instance& instance, const EnvConfig& cfg) {
    return reset(std::make_shared<const Instance>(instance), cfg);
}

ActionSpace::ActionSpace(const EnvState& s) {
    std::vector<std::vector<NodeId>> per_node;
    switch (s.config.problem) {
        case ProblemKind::dag: {
            const auto& g = std::get<WeightedDigraph>(s.current);
            const int n = g.node_count();
            const Reachability reach(g);
            per_node.resize(static_cast<std::size_t>(n));
            for (NodeId u = 0; u < n; ++u) {
                const auto out = g.out(u);
                std::size_t e = 0;
                for (NodeId v = 0; v < n; ++v) {
                    while (e < out.size() && out[e].dst < v) ++e;
                    if (v == u || (e < out.size() && out[e].dst == v)) continue;
                    if (reach.reached_by(u, v)) continue;  // v reaches u: cycle
                    per_node[static_cast<std::size_t>(u)].push_back(v);
                }
            }
            break;
        }
        case ProblemKind::ged: {
            const int n = std::get<LabeledGraph>(s.current).node_count();
            per_node.resize(static_cast<std::size_t>(n));
            if (n >= 2) {
                for (NodeId u = 0; u < n; ++u)
                    for (NodeId v = 0; v < n; ++v)
                        if (u != v) per_node[static_cast<std::size_t>(u)].push_back(v);
            }
            break;
        }
        case ProblemKind::hcp: {
            const auto& order = std::get<Tour>(s.last_solution).order;
            const std::size_t n = order.size();
            per_node.resize(n);
            if (n >= 3) {
                for (std::size_t i = 0; i < n; ++i) {
                    const NodeId u = order[i];
                    const NodeId p = order[(i + n - 1) % n];
                    const NodeId q = order[(i + 1) % n];
                    per_node[static_cast<std::size_t>(u)] = {std::min(p, q), std::max(p, q)};
                }
            }
            break;
        }
    }
    offsets_.push_back(0);
    for (std::size_t u = 0; u < per_node.size(); ++u) {
        if (per_node[u].empty()) continue;
        firsts_.push_back(static_cast<NodeId>(u));
        offsets_.push_back(offsets_.back() + per_node[u].size());
        seconds_.push_back(std::move(per_node[u]));
    }
}

std::span<const NodeId> ActionSpace::seconds(NodeId a1) const {
    auto it = std::lower_bound(firsts_.begin(), firsts_.end(), a1);
    if (it == firsts_.end() || *it != a1) return {};
    return seconds_[static_cast<std::size_t>(it - firsts_.begin())];
}

ActionPair ActionSpace::pair_at(std::size_t index) const {
    if (index >= pair_count()) throw ContractError("action index out of range");
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
    const auto slot = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return {firsts_[slot], seconds_[slot][index - offsets_[slot]]};
}

bool ActionSpace::contains(ActionPair a) const {
    const auto sec = seconds(a.a1);
    return std::binary_search(sec.begin(), sec.end(), a.a2);
}

std::vector<NodeId> legal_actions(const EnvState& s, std::optional<NodeId> a1) {
    if (s.done) throw ContractError("episode is done");
    const ActionSpace space(s);
    if (!a1) return space.firsts();
    const auto sec = space.seconds(*a1);
    return {sec.begin(), sec.end()};
}

StepOutcome step(const EnvState& s, ActionPair a) {
    if (s.done) throw ContractError("episode is done");
    EnvState next = s;
    switch (s.config.problem) {
        case ProblemKind::dag:
            check_dag_action(s, a);
            std::get<WeightedDigraph>(next.current).add_edge(a.a1, a.a2);
            break;
        case ProblemKind::ged: {
            auto& g1 = std::get<LabeledGraph>(next.current);
            if (a.a1 < 0 || a.a2 < 0 || a.a1 >= g1.node_count() || a.a2 >= g1.node_count() || a.a1 == a.a2) {
                throw InvalidAction("illegal GED edge toggle");
            }
            g1.toggle_edge(a.a1, a.a2);
            break;
        }
        case ProblemKind::hcp: {
            const auto& order = std::get<Tour>(s.last_solution).order;
            const auto n = order.size();
            auto it = std::find(order.begin(), order.end(), a.a1);
            if (it == order.end()) throw InvalidAction("a1 is not on the tour");
            const auto i = static_cast<std::size_t>(it - order.begin());
            if (a.a2 != order[(i + 1) % n] && a.a2 != order[(i + n - 1) % n]) {
                throw InvalidAction("a2 is not a tour neighbour of a1");
            }
            std::get<TspMatrix>(next.current).add(a.a1, a.a2, kEdgePenalty);
            break;
        }
    }
    next.k = s.k + 1;
    next.history.push_back(a);
    next.history_hash = hash_combine(hash_combine(s.history_hash, static_cast<std::uint64_t>(a.a1)),
                                     static_cast<std::uint64_t>(a.a2));
    next.last_solution = solve_lower(next);
    ++next.lower_solves;
    auto [obj, evaluated] = evaluate(next, next.last_solution);
    next.last_objective = obj;
    if (obj < next.incumbent_objective) {
        next.incumbent_objective = obj;
        next.incumbent_solution = std::move(evaluated);
    }
    next.done = next.k >= next.config.K || !has_any_legal(next);

    StepOutcome out;
    out.reward = s.last_objective - next.last_objective;
    out.done = next.done;
    out.solution = next.last_solution;
    out.state = std::move(next);
    return out;
}

EpisodeResult run_episode(const Instance& instance, const EnvConfig& cfg, const Policy& policy) {
    EpisodeResult result;
    EnvState s = reset(instance, cfg);
    result.initial_objective = s.last_objective;
    while (!s.done) {
        const ActionSpace space(s);
        const auto action = policy(s, space);
        if (!action) break;
        if (!space.contains(*action)) {
            throw InvalidAction("policy chose illegal action (" + std::to_string(action->a1) + ", " +
                                std::to_string(action->a2) + ") at step " + std::to_string(s.k) + "; " +
                                std::to_string(space.pair_count()) + " legal pairs");
        }
        auto out = step(s, *action);
        result.rewards.push_back(out.reward);
        s = std::move(out.state);
    }
    result.final_objective = s.last_objective;
    result.incumbent_objective = s.incumbent_objective;
    result.incumbent_solution = s.incumbent_solution;
    result.final_state = std::move(s);
    return result;
}

Observation observe(const EnvState& s) {
    Observation obs;
    obs.problem = s.config.problem;
    obs.k = s.k;
    obs.K = s.config.K;
    obs.done = s.done;
    obs.objective = s.last_objective;
    obs.incumbent = s.incumbent_objective;
    switch (s.config.problem) {
        case ProblemKind::dag: {
            const auto& inst = std::get<DagInstance>(*s.original);
            const auto& g = std::get<WeightedDigraph>(s.current);
            const auto& sched = std::get<Schedule>(s.last_solution);
            FeatureTable t;
            t.columns = {"duration_us", "resource", "finish_us"};
            for (NodeId u = 0; u < inst.node_count(); ++u) {
                t.rows.push_back({inst.duration[static_cast<std::size_t>(u)], inst.resource[static_cast<std::size_t>(u)],
                                  sched.finish(inst, u)});
            }
            for (const Edge& e : g.edges()) {
                t.edges.push_back({e.src, e.dst, e.weight});
                obs.reversed_edges.push_back({e.dst, e.src, e.weight});
            }
            std::sort(obs.reversed_edges.begin(), obs.reversed_edges.end());
            obs.graphs.push_back(std::move(t));
            break;
        }
        case ProblemKind::ged: {
            const auto& pair = std::get<GedPair>(*s.original);
            const auto& g1 = std::get<LabeledGraph>(s.current);
            const auto& m = std::get<NodeMapping>(s.last_solution);
            // Per-node costs are those of the lower-level mapping on the current graphs.
            const auto [c1, c2] = node_edit_costs(g1, pair.g2, m, s.config.ged_costs);
            int labels = 0;
            for (int l : pair.g1.labels()) labels = std::max(labels, l + 1);
            for (int l : pair.g2.labels()) labels = std::max(labels, l + 1);
            auto table = [&](const LabeledGraph& g, const std::vector<Cost>& costs) {
                FeatureTable t;
                for (int l = 0; l < labels; ++l) t.columns.push_back("label_" + std::to_string(l));
                t.columns.emplace_back("matched_cost");
                for (NodeId u = 0; u < g.node_count(); ++u) {
                    std::vector<std::int64_t> row(static_cast<std::size_t>(labels) + 1, 0);
                    row[static_cast<std::size_t>(g.label(u))] = 1;
                    row.back() = costs[static_cast<std::size_t>(u)];
                    t.rows.push_back(std::move(row));
                }
                for (const auto& [u, v] : g.edges()) t.edges.push_back({u, v, 1});
                return t;
            };
            obs.graphs.push_back(table(g1, c1));
            obs.graphs.push_back(table(pair.g2, c2));
            break;
        }
        case ProblemKind::hcp: {
            const auto& h = std::get<HcpInstance>(*s.original);
            const auto& w = std::get<TspMatrix>(s.current);
            const auto& tour = std::get<Tour>(s.last_solution);
            std::vector<std::int64_t> degree(static_cast<std::size_t>(h.n), 0);
            for (const auto& [u, v] : h.edges) {
                ++degree[static_cast<std::size_t>(u)];
                ++degree[static_cast<std::size_t>(v)];
            }
            std::vector<std::int64_t> incidence(static_cast<std::size_t>(h.n), 0);
            const auto n = tour.order.size();
            for (std::size_t i = 0; i < n; ++i) {
                const NodeId u = tour.order[i];
                const NodeId v = tour.order[(i + 1) % n];
                if (s.pristine->at(u, v) == 0) {
                    ++incidence[static_cast<std::size_t>(u)];
                    ++incidence[static_cast<std::size_t>(v)];
                }
            }
            FeatureTable t;
            t.columns = {"degree", "tour_incidence"};
            for (NodeId u = 0; u < h.n; ++u)
                t.rows.push_back({degree[static_cast<std::size_t>(u)], incidence[static_cast<std::size_t>(u)]});
            // Graph edges with their current weight, plus any penalised non-edge.
            for (NodeId u = 0; u < h.n; ++u) {
                for (NodeId v = u + 1; v < h.n; ++v) {
                    const Weight cur = w.at(u, v);
                    if (s.pristine->at(u, v) == 0 || cur != s.pristine->at(u, v)) t.edges.push_back({u, v, cur});
                }
            }
            obs.graphs.push_back(std::move(t));
            obs.tour = tour.order;
            break;
        }
    }
    return obs;
}

}  // namespace bihyb

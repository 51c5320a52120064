#include "bihyb/policies.hpp"

#include <algorithm>
#include <unordered_set>

#include "bihyb/error.hpp"

namespace bihyb {

std::string_view to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::random: return "random";
        case PolicyKind::greedy: return "greedy";
        case PolicyKind::beam: return "beam";
    }
    return "?";
}

void PolicyConfig::validate() const {
    if (beam_width < 1) throw ContractError("beam width must be >= 1");
    if (candidate_budget < beam_width) throw ContractError("candidate budget must be >= beam width");
}

int default_beam_width(ProblemKind p) { return p == ProblemKind::hcp ? 12 : 3; }

std::optional<ActionPair> random_policy(const ActionSpace& space, Rng& rng) {
    if (space.empty()) return std::nullopt;
    const auto& firsts = space.firsts();
    const NodeId a1 = firsts[rng.below(firsts.size())];
    const auto seconds = space.seconds(a1);
    return ActionPair{a1, seconds[rng.below(seconds.size())]};
}

std::vector<ActionPair> sample_candidates(const ActionSpace& space, std::size_t count, Rng& rng) {
    const std::size_t total = space.pair_count();
    count = std::min(count, total);
    std::vector<std::size_t> picked;
    picked.reserve(count);
    if (count == total) {
        for (std::size_t i = 0; i < total; ++i) picked.push_back(i);
    } else {
        // Floyd's algorithm: exactly uniform over count-subsets.
        std::unordered_set<std::size_t> chosen;
        for (std::size_t j = total - count; j < total; ++j) {
            const std::size_t t = rng.below(j + 1);
            if (!chosen.insert(t).second) chosen.insert(j);
        }
        picked.assign(chosen.begin(), chosen.end());
        std::sort(picked.begin(), picked.end());
    }
    std::vector<ActionPair> result;
    result.reserve(picked.size());
    for (std::size_t idx : picked) result.push_back(space.pair_at(idx));
    return result;
}

std::vector<Candidate> evaluate_candidates(const EnvState& s, std::size_t budget, Rng& rng) {
    std::vector<Candidate> result;
    if (s.done) return result;
    const ActionSpace space(s);
    for (const ActionPair a : sample_candidates(space, budget, rng)) {
        result.push_back({a, step(s, a)});
    }
    return result;
}

std::optional<Candidate> greedy_policy(const EnvState& s, std::size_t budget, Rng& rng) {
    auto candidates = evaluate_candidates(s, budget, rng);
    if (candidates.empty()) return std::nullopt;
    // Candidates arrive in lexicographic order, so the first maximum wins ties.
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (candidates[i].outcome.reward > candidates[best].outcome.reward) best = i;
    return std::move(candidates[best]);
}

Rng candidate_rng(std::uint64_t policy_seed, const std::vector<ActionPair>& lineage) {
    std::uint64_t h = hash_name("candidates");
    for (const ActionPair& a : lineage) {
        h = hash_combine(hash_combine(h, static_cast<std::uint64_t>(a.a1)), static_cast<std::uint64_t>(a.a2));
    }
    return Rng(policy_seed).split(h);
}

namespace {

struct BeamNode {
    EnvState state;
    Objective score() const { return state.incumbent_objective; }
};

bool beam_less(const BeamNode& a, const BeamNode& b) {
    if (a.score() != b.score()) return a.score() < b.score();
    if (a.state.last_objective != b.state.last_objective) return a.state.last_objective < b.state.last_objective;
    return a.state.history < b.state.history;
}

SearchResult start_result(const EnvState& root) {
    SearchResult r;
    r.baseline_objective = root.last_objective;
    r.incumbent_objective = root.incumbent_objective;
    r.incumbent_solution = root.incumbent_solution;
    r.lower_solves = root.lower_solves;
    return r;
}

void absorb(SearchResult& r, const EnvState& s) {
    if (s.incumbent_objective < r.incumbent_objective) {
        r.incumbent_objective = s.incumbent_objective;
        r.incumbent_solution = s.incumbent_solution;
        // The lineage prefix that produced the incumbent.
        r.incumbent_lineage = s.history;
    }
}

}  // namespace

SearchResult beam_search(const Instance& instance, const EnvConfig& env_cfg, const PolicyConfig& pol_cfg) {
    pol_cfg.validate();
    const EnvState root = reset(instance, env_cfg);
    SearchResult result = start_result(root);
    std::vector<BeamNode> beam{BeamNode{root}};
    const auto width = static_cast<std::size_t>(pol_cfg.beam_width);
    const auto budget = static_cast<std::size_t>(pol_cfg.candidate_budget);

    for (int depth = 0; depth < env_cfg.K; ++depth) {
        std::vector<BeamNode> children;
        for (const BeamNode& node : beam) {
            if (node.state.done) continue;
            Rng rng = candidate_rng(pol_cfg.seed, node.state.history);
            for (Candidate& c : evaluate_candidates(node.state, budget, rng)) {
                ++result.lower_solves;
                absorb(result, c.outcome.state);
                children.push_back(BeamNode{std::move(c.outcome.state)});
            }
        }
        if (children.empty()) break;
        const std::size_t keep = std::min(width, children.size());
        std::partial_sort(children.begin(), children.begin() + static_cast<std::ptrdiff_t>(keep), children.end(),
                          beam_less);
        children.resize(keep);
        beam = std::move(children);
    }
    return result;
}

SearchResult greedy_search(const Instance& instance, const EnvConfig& env_cfg, std::size_t budget, std::uint64_t seed) {
    PolicyConfig cfg;
    cfg.kind = PolicyKind::greedy;
    cfg.beam_width = 1;
    cfg.candidate_budget = static_cast<int>(std::max<std::size_t>(budget, 1));
    cfg.seed = seed;
    return beam_search(instance, env_cfg, cfg);
}

SearchResult random_search(const Instance& instance, const EnvConfig& env_cfg, std::uint64_t seed) {
    Rng rng = Rng(seed).split("random-policy");
    EnvState s = reset(instance, env_cfg);
    SearchResult result = start_result(s);
    while (!s.done) {
        const ActionSpace space(s);
        const auto a = random_policy(space, rng);
        if (!a) break;
        s = step(s, *a).state;
        ++result.lower_solves;
        absorb(result, s);
    }
    return result;
}

SearchResult run_policy(const Instance& instance, const EnvConfig& env_cfg, const PolicyConfig& pol_cfg) {
    switch (pol_cfg.kind) {
        case PolicyKind::random: return random_search(instance, env_cfg, pol_cfg.seed);
        case PolicyKind::greedy:
            return greedy_search(instance, env_cfg, static_cast<std::size_t>(pol_cfg.candidate_budget), pol_cfg.seed);
        case PolicyKind::beam: return beam_search(instance, env_cfg, pol_cfg);
    }
    throw ContractError("unknown policy kind");
}

}  // namespace bihyb

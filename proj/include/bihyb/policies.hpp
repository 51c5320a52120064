#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bihyb/env.hpp"
#include "bihyb/rng.hpp"

namespace bihyb {

enum class PolicyKind { random, greedy, beam };
std::string_view to_string(PolicyKind k);

struct PolicyConfig {
    PolicyKind kind = PolicyKind::beam;
    int beam_width = 3;        ///< W
    int candidate_budget = 20; ///< C, lower-level solves per expanded node
    std::uint64_t seed = 0;

    /// Throws ContractError unless W >= 1 and C >= W.
    void validate() const;
};

/// Beam widths used for evaluation: 3 (DAG), 3 (GED), 12 (HCP).
int default_beam_width(ProblemKind p);

/// a1 uniform over legal first nodes, then a2 uniform over its legal seconds.
/// nullopt when the space is empty.
std::optional<ActionPair> random_policy(const ActionSpace& space, Rng& rng);

/// min(count, pair_count) distinct pairs drawn uniformly without replacement,
/// returned in lexicographic order.
std::vector<ActionPair> sample_candidates(const ActionSpace& space, std::size_t count, Rng& rng);

struct Candidate {
    ActionPair action;
    StepOutcome outcome;
};

/// Samples and evaluates (one lower-level solve each) candidate actions.
std::vector<Candidate> evaluate_candidates(const EnvState& s, std::size_t budget, Rng& rng);

/// Best-reward candidate, ties to the lexicographically smallest pair.
/// nullopt if no legal action exists.
std::optional<Candidate> greedy_policy(const EnvState& s, std::size_t budget, Rng& rng);

struct SearchResult {
    Objective baseline_objective = 0;  ///< lower-level heuristic on the unmodified graph
    Objective incumbent_objective = 0;
    Solution incumbent_solution;
    std::vector<ActionPair> incumbent_lineage;
    std::int64_t lower_solves = 0;     ///< including the initial solve
};

/// Candidate stream for the node reached by `lineage`. Shared prefixes see
/// identical candidates regardless of beam width.
Rng candidate_rng(std::uint64_t policy_seed, const std::vector<ActionPair>& lineage);

/// Beam search over graph modifications. Every depth expands each of the W
/// kept states with C sampled candidates and keeps the global top W ranked by
/// (incumbent, current objective, lineage). Returns the best incumbent seen
/// anywhere in the tree. Uses at most K * W * C lower-level solves after the
/// initial one.
SearchResult beam_search(const Instance& instance, const EnvConfig& env_cfg, const PolicyConfig& pol_cfg);

/// Greedy rollout (beam search with W = 1).
SearchResult greedy_search(const Instance& instance, const EnvConfig& env_cfg, std::size_t budget, std::uint64_t seed);

/// One episode driven by random_policy.
SearchResult random_search(const Instance& instance, const EnvConfig& env_cfg, std::uint64_t seed);

/// Dispatches on pol_cfg.kind.
SearchResult run_policy(const Instance& instance, const EnvConfig& env_cfg, const PolicyConfig& pol_cfg);

}  // namespace bihyb

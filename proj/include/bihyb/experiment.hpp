#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bihyb/env.hpp"
#include "bihyb/policies.hpp"

namespace bihyb {

/// A baseline heuristic, or a bi-level search driven by a policy.
struct MethodSpec {
    std::string name;                      ///< label in the CSV; unique within a spec
    std::optional<LowerHeuristic> baseline;
    std::optional<PolicyKind> policy;
    LowerHeuristic lower = LowerHeuristic::critical_path;
    int K = 20;
    int beam_width = 1;
    int budget = 20;

    static MethodSpec heuristic(LowerHeuristic h);
    /// Method names: any heuristic name, "random", "random_bihyb" (greedy over
    /// `budget` random candidates per step), "greedy" (same) or "beam".
    static MethodSpec parse(std::string_view name, ProblemKind problem);
};

struct ExperimentSpec {
    ProblemKind problem = ProblemKind::dag;
    std::vector<std::filesystem::path> instances;
    std::vector<MethodSpec> methods;
    std::vector<std::uint64_t> seeds{0};
    std::string baseline;   ///< defaults to the first method
    bool record_time = true;
    int threads = 0;        ///< 0 = hardware concurrency

    /// Throws ValidationError on empty methods/seeds/instances, duplicate
    /// method names, a baseline that is not a method, or a method that does not
    /// belong to the problem.
    void validate() const;
};

/// Reads a JSON spec file; relative instance paths resolve against its directory.
ExperimentSpec load_spec(const std::filesystem::path& path);

/// Expands directories into their instance files (sorted by name).
std::vector<std::filesystem::path> expand_instance_paths(const std::vector<std::filesystem::path>& inputs);

struct CellResult {
    std::string method;
    std::string instance;
    std::uint64_t seed = 0;
    Objective objective = 0;
    std::int64_t time_ms = 0;
    std::int64_t lower_solves = 0;
    friend bool operator==(const CellResult&, const CellResult&) = default;
};

struct ResultRow {
    std::string method;
    double mean = 0.0;
    double std = 0.0;        ///< population standard deviation over cells
    double relative = 0.0;   ///< percent vs the baseline mean
    double time_ms = 0.0;    ///< mean per cell
    std::int64_t lower_solves = 0;  ///< total
};

struct ExperimentResult {
    std::vector<CellResult> cells;  ///< method-major, then instance, then seed
    std::vector<ResultRow> rows;
};

/// Solves every method x instance x seed cell. All instance files are loaded
/// before any solving, so a missing or malformed file fails fast.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Solves one cell.
CellResult run_cell(const Instance& inst, const MethodSpec& method, std::uint64_t seed);

/// Rows in first-appearance order of the methods. With `best_of_seeds`, each
/// (method, instance) contributes the minimum over its seeds.
std::vector<ResultRow> aggregate(const std::vector<CellResult>& cells, const std::string& baseline,
                                 bool best_of_seeds = false);

void write_cells_csv(std::ostream& out, const std::vector<CellResult>& cells);
/// Throws ParseError on a malformed file.
std::vector<CellResult> read_cells_csv(std::istream& in);
void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void print_table(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace bihyb

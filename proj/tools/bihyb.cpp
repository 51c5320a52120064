#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bihyb/error.hpp"
#include "bihyb/experiment.hpp"
#include "bihyb/generators.hpp"
#include "bihyb/instance_io.hpp"
#include "bihyb/protocol.hpp"

namespace fs = std::filesystem;
using namespace bihyb;

namespace {

constexpr int kExitValidation = 2;

std::string numbered(const std::string& prefix, int i, int count) {
    const int digits = static_cast<int>(std::to_string(std::max(count - 1, 0)).size());
    std::ostringstream ss;
    ss << prefix << '_' << std::setw(digits) << std::setfill('0') << i;
    return ss.str();
}

struct GenerateArgs {
    std::string problem = "dag";
    int count = 10;
    std::uint64_t seed = 0;
    std::string out = "instances";
    int dags = 50;
    int min_nodes = 20;
    int max_nodes = 30;
    int edits = -1;
    int nodes = 100;
    double noise = 0.3;
    bool fhcp = false;
};

int run_generate(const GenerateArgs& a) {
    const ProblemKind p = problem_from_string(a.problem);
    if (a.count < 1) throw ValidationError("--count must be >= 1");
    fs::create_directories(a.out);
    const fs::path dir = a.out;
    switch (p) {
        case ProblemKind::dag: {
            const auto set = generate_dag_set(a.count, a.dags, a.seed);
            for (int i = 0; i < a.count; ++i) save_instance(dir / (numbered("dag", i, a.count) + ".json"), set[i]);
            break;
        }
        case ProblemKind::ged: {
            GedGenOptions opts;
            opts.min_nodes = a.min_nodes;
            opts.max_nodes = a.max_nodes;
            opts.edits = a.edits;
            const auto set = generate_ged_set(a.count, a.seed, opts);
            for (int i = 0; i < a.count; ++i) save_instance(dir / (numbered("ged", i, a.count) + ".json"), set[i]);
            break;
        }
        case ProblemKind::hcp: {
            const auto set = generate_hcp_set(a.count, a.nodes, a.noise, a.seed);
            for (int i = 0; i < a.count; ++i) {
                const std::string stem = numbered("hcp", i, a.count);
                save_instance(dir / (stem + (a.fhcp ? ".hcp" : ".json")), set[i].instance);
                std::ofstream w(dir / (stem + ".witness.json"));
                w << nlohmann::json{{"witness", set[i].witness}}.dump() << '\n';
            }
            break;
        }
    }
    std::cout << "wrote " << a.count << ' ' << to_string(p) << " instances to " << dir.string() << '\n';
    return 0;
}

struct RunArgs {
    std::string spec_file;
    std::string problem = "dag";
    std::vector<std::string> instances;
    std::vector<std::string> methods;
    std::string heuristic;
    int beam_width = -1;
    int budget = -1;
    int K = -1;
    std::vector<std::uint64_t> seeds{0};
    std::string baseline;
    std::string out;
    bool deterministic = false;
    int threads = 0;
};

ExperimentSpec build_spec(const RunArgs& a, bool bilevel) {
    if (!a.spec_file.empty()) {
        ExperimentSpec spec = load_spec(a.spec_file);
        if (a.deterministic) spec.record_time = false;
        if (a.threads > 0) spec.threads = a.threads;
        return spec;
    }
    ExperimentSpec spec;
    spec.problem = problem_from_string(a.problem);
    std::vector<fs::path> inputs(a.instances.begin(), a.instances.end());
    spec.instances = expand_instance_paths(inputs);
    std::vector<std::string> methods = a.methods;
    if (methods.empty()) {
        methods.push_back(std::string(to_string(default_heuristic(spec.problem))));
        if (bilevel) methods.push_back("beam");
    }
    for (const auto& name : methods) {
        MethodSpec m = MethodSpec::parse(name, spec.problem);
        if (m.policy) {
            if (!a.heuristic.empty()) m.lower = heuristic_from_string(a.heuristic);
            if (a.beam_width > 0) m.beam_width = a.beam_width;
            if (a.budget > 0) m.budget = a.budget;
            if (a.K > 0) m.K = a.K;
        } else if (bilevel && a.methods.empty() && !a.heuristic.empty()) {
            m = MethodSpec::heuristic(heuristic_from_string(a.heuristic));
        }
        spec.methods.push_back(std::move(m));
    }
    spec.seeds = a.seeds;
    spec.baseline = a.baseline;
    spec.record_time = !a.deterministic;
    spec.threads = a.threads;
    return spec;
}

int run_solve(const RunArgs& a, bool bilevel) {
    const ExperimentSpec spec = build_spec(a, bilevel);
    const ExperimentResult r = run_experiment(spec);
    if (!a.out.empty()) {
        std::ofstream out(a.out, std::ios::binary);
        if (!out) throw ValidationError("cannot write " + a.out);
        write_cells_csv(out, r.cells);
    }
    print_table(std::cout, r.rows);
    return 0;
}

struct ReportArgs {
    std::string in;
    std::string baseline;
    std::string out;
    bool best_of_seeds = false;
};

int run_report(const ReportArgs& a) {
    std::ifstream in(a.in);
    if (!in) throw ValidationError("cannot open " + a.in);
    const auto cells = read_cells_csv(in);
    if (cells.empty()) throw ValidationError(a.in + " has no rows");
    const auto rows = aggregate(cells, a.baseline.empty() ? cells.front().method : a.baseline, a.best_of_seeds);
    print_table(std::cout, rows);
    if (!a.out.empty()) {
        std::ofstream out(a.out, std::ios::binary);
        write_rows_csv(out, rows);
    }
    return 0;
}

int run_serve(const std::string& listen) {
    if (listen == "stdio") {
        protocol::serve(std::cin, std::cout);
        return 0;
    }
    if (listen.rfind("tcp:", 0) != 0) throw ValidationError("--listen must be stdio or tcp:PORT");
    const int port = std::stoi(listen.substr(4));
    if (port < 0 || port > 65535) throw ValidationError("port out of range");
    protocol::serve_tcp(static_cast<std::uint16_t>(port), [](std::uint16_t bound) {
        std::fprintf(stderr, "listening on 127.0.0.1:%u\n", static_cast<unsigned>(bound));
    });
    return 0;
}

void add_run_options(CLI::App* cmd, RunArgs& a) {
    cmd->add_option("--spec", a.spec_file, "JSON experiment spec; replaces the other options");
    cmd->add_option("--problem", a.problem, "dag | ged | hcp");
    cmd->add_option("--instances", a.instances, "instance files or directories");
    cmd->add_option("--method", a.methods, "heuristic names, random, random_bihyb, greedy or beam")->delimiter(',');
    cmd->add_option("--heuristic", a.heuristic, "lower-level heuristic for bi-level methods");
    cmd->add_option("--beam-width", a.beam_width, "beam width W");
    cmd->add_option("--budget", a.budget, "lower-level solves per expanded state");
    cmd->add_option("--K", a.K, "maximum modifications per episode");
    cmd->add_option("--seeds,--seed", a.seeds, "seeds")->delimiter(',');
    cmd->add_option("--baseline", a.baseline, "method used for the relative column (default: first)");
    cmd->add_option("--out", a.out, "per-cell CSV output");
    cmd->add_flag("--deterministic", a.deterministic, "write time_ms = 0 so the CSV is reproducible byte-for-byte");
    cmd->add_option("--threads", a.threads, "worker threads (default: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bi-level graph-modification search for DAG scheduling, GED and HCP"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "write a synthetic instance set");
    generate->add_option("--problem", gen.problem, "dag | ged | hcp")->required();
    generate->add_option("--count", gen.count, "number of instances");
    generate->add_option("--seed", gen.seed, "generator seed");
    generate->add_option("--out", gen.out, "output directory");
    generate->add_option("--dags", gen.dags, "DAG: jobs per instance");
    generate->add_option("--min-nodes", gen.min_nodes, "GED: smallest graph");
    generate->add_option("--max-nodes", gen.max_nodes, "GED: largest graph");
    generate->add_option("--edits", gen.edits, "GED: edit operations per pair (-1: random in [n/2, n])");
    generate->add_option("--nodes", gen.nodes, "HCP: node count");
    generate->add_option("--noise", gen.noise, "HCP: extra edges per node");
    generate->add_flag("--fhcp", gen.fhcp, "HCP: write FHCP text instead of JSON");

    RunArgs solve_args;
    auto* solve = app.add_subcommand("solve", "run baseline heuristics");
    add_run_options(solve, solve_args);

    RunArgs bihyb_args;
    auto* bihyb = app.add_subcommand("bihyb", "run bi-level search next to its baseline");
    add_run_options(bihyb, bihyb_args);

    std::string listen = "stdio";
    auto* serve = app.add_subcommand("serve", "environment protocol server");
    serve->add_option("--listen", listen, "stdio or tcp:PORT");

    ReportArgs rep;
    auto* report = app.add_subcommand("report", "aggregate a per-cell CSV");
    report->add_option("--in", rep.in, "per-cell CSV")->required();
    report->add_option("--baseline", rep.baseline, "baseline method");
    report->add_option("--out", rep.out, "aggregated CSV output");
    report->add_flag("--best-of-seeds", rep.best_of_seeds, "use the best seed per instance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*generate) return run_generate(gen);
        if (*solve) return run_solve(solve_args, false);
        if (*bihyb) return run_solve(bihyb_args, true);
        if (*serve) return run_serve(listen);
        if (*report) return run_report(rep);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const CycleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

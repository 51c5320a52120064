#include "bihyb/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bihyb/error.hpp"

namespace bihyb {

namespace fs = std::filesystem;

MethodSpec MethodSpec::heuristic(LowerHeuristic h) {
    MethodSpec m;
    m.name = std::string(to_string(h));
    m.baseline = h;
    m.lower = h;
    return m;
}

MethodSpec MethodSpec::parse(std::string_view name, ProblemKind problem) {
    MethodSpec m;
    m.name = std::string(name);
    m.lower = default_heuristic(problem);
    m.K = default_horizon(problem);
    m.budget = 20;
    if (name == "random") {
        m.policy = PolicyKind::random;
    } else if (name == "random_bihyb" || name == "greedy") {
        m.policy = PolicyKind::greedy;
    } else if (name == "beam") {
        m.policy = PolicyKind::beam;
        m.beam_width = default_beam_width(problem);
    } else {
        LowerHeuristic h;
        try {
            h = heuristic_from_string(name);
        } catch (const ContractError&) {
            throw ValidationError("unknown method '" + std::string(name) + "'");
        }
        m = heuristic(h);
    }
    return m;
}

void ExperimentSpec::validate() const {
    if (methods.empty()) throw ValidationError("experiment needs at least one method");
    if (seeds.empty()) throw ValidationError("experiment needs at least one seed");
    if (instances.empty()) throw ValidationError("experiment needs at least one instance");
    std::set<std::string> names;
    for (const auto& m : methods) {
        if (!names.insert(m.name).second) throw ValidationError("duplicate method name '" + m.name + "'");
        if (problem_of(m.lower) != problem) {
            throw ValidationError("method '" + m.name + "' uses heuristic " + std::string(to_string(m.lower)) +
                                  " which does not solve " + std::string(to_string(problem)));
        }
        if (m.policy) {
            if (m.K < 1) throw ValidationError("method '" + m.name + "': K must be >= 1");
            try {
                PolicyConfig{*m.policy, m.beam_width, m.budget, 0}.validate();
            } catch (const ContractError& e) {
                throw ValidationError("method '" + m.name + "': " + e.what());
            }
        }
    }
    if (!baseline.empty() && !names.contains(baseline)) {
        throw ValidationError("baseline '" + baseline + "' is not one of the methods");
    }
}

std::vector<fs::path> expand_instance_paths(const std::vector<fs::path>& inputs) {
    std::vector<fs::path> out;
    for (const auto& p : inputs) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(p)) {
                const auto ext = entry.path().extension();
                if (entry.is_regular_file() && (ext == ".json" || ext == ".hcp")) files.push_back(entry.path());
            }
            std::sort(files.begin(), files.end());
            out.insert(out.end(), files.begin(), files.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

ExperimentSpec load_spec(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open spec file " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string(), e.what());
    }
    try {
        ExperimentSpec spec;
        spec.problem = problem_from_string(j.at("problem").get<std::string>());
        const fs::path base = path.parent_path();
        std::vector<fs::path> inputs;
        for (const auto& p : j.at("instances")) {
            fs::path ip = p.get<std::string>();
            inputs.push_back(ip.is_absolute() ? ip : base / ip);
        }
        spec.instances = expand_instance_paths(inputs);
        for (const auto& mj : j.at("methods")) {
            const std::string kind = mj.is_string() ? mj.get<std::string>() : mj.at("method").get<std::string>();
            MethodSpec m = MethodSpec::parse(kind, spec.problem);
            if (mj.is_object()) {
                m.name = mj.value("name", m.name);
                if (mj.contains("heuristic")) m.lower = heuristic_from_string(mj["heuristic"].get<std::string>());
                m.K = mj.value("K", m.K);
                m.beam_width = mj.value("beam_width", m.beam_width);
                m.budget = mj.value("budget", m.budget);
            }
            spec.methods.push_back(std::move(m));
        }
        if (j.contains("seeds")) spec.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        spec.baseline = j.value("baseline", std::string{});
        spec.record_time = j.value("timing", true);
        spec.threads = j.value("threads", 0);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string(), e.what());
    } catch (const ContractError& e) {
        throw ValidationError(e.what());
    }
}

CellResult run_cell(const Instance& inst, const MethodSpec& method, std::uint64_t seed) {
    CellResult cell;
    cell.method = method.name;
    cell.seed = seed;
    EnvConfig env;
    env.problem = kind_of(inst);
    env.heuristic = method.lower;
    env.K = method.K;
    env.seed = seed;
    if (!method.policy) {
        const std::int64_t before = lower_solve_counter();
        const EnvState s = reset(inst, env);
        cell.objective = s.incumbent_objective;
        cell.lower_solves = lower_solve_counter() - before;
        return cell;
    }
    PolicyConfig pol{*method.policy, method.beam_width, method.budget, hash_combine(seed, 0x70)};
    const SearchResult r = run_policy(inst, env, pol);
    cell.objective = r.incumbent_objective;
    cell.lower_solves = r.lower_solves;
    return cell;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<Instance> instances;
    std::vector<std::string> names;
    for (const auto& p : spec.instances) {
        if (!fs::exists(p)) throw ValidationError("missing instance file " + p.string());
    }
    for (const auto& p : spec.instances) {
        Instance inst = load_instance(p);
        if (kind_of(inst) != spec.problem) {
            throw ValidationError(p.string() + " is a " + std::string(to_string(kind_of(inst))) + " instance, expected " +
                                  std::string(to_string(spec.problem)));
        }
        instances.push_back(std::move(inst));
        names.push_back(p.stem().string());
    }

    const std::size_t n_inst = instances.size();
    const std::size_t n_seed = spec.seeds.size();
    ExperimentResult result;
    result.cells.resize(spec.methods.size() * n_inst * n_seed);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < result.cells.size(); i = next++) {
            const std::size_t m = i / (n_inst * n_seed);
            const std::size_t k = (i / n_seed) % n_inst;
            const std::size_t s = i % n_seed;
            const auto t0 = std::chrono::steady_clock::now();
            CellResult cell = run_cell(instances[k], spec.methods[m], spec.seeds[s]);
            const auto t1 = std::chrono::steady_clock::now();
            cell.instance = names[k];
            cell.time_ms =
                spec.record_time ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() : 0;
            result.cells[i] = std::move(cell);
        }
    };
    unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(1, result.cells.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    result.rows = aggregate(result.cells, spec.baseline.empty() ? spec.methods.front().name : spec.baseline);
    return result;
}

std::vector<ResultRow> aggregate(const std::vector<CellResult>& cells, const std::string& baseline,
                                 bool best_of_seeds) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const CellResult*>> by_method;
    for (const auto& c : cells) {
        auto& v = by_method[c.method];
        if (v.empty()) order.push_back(c.method);
        v.push_back(&c);
    }
    std::vector<ResultRow> rows;
    for (const auto& name : order) {
        const auto& group = by_method[name];
        std::vector<double> values;
        ResultRow row;
        row.method = name;
        if (best_of_seeds) {
            std::vector<std::string> inst_order;
            std::map<std::string, Objective> best;
            for (const auto* c : group) {
                auto [it, fresh] = best.try_emplace(c->instance, c->objective);
                if (fresh) inst_order.push_back(c->instance);
                it->second = std::min(it->second, c->objective);
            }
            for (const auto& i : inst_order) values.push_back(static_cast<double>(best[i]));
        } else {
            for (const auto* c : group) values.push_back(static_cast<double>(c->objective));
        }
        double sum = 0.0;
        double time = 0.0;
        for (double v : values) sum += v;
        for (const auto* c : group) {
            time += static_cast<double>(c->time_ms);
            row.lower_solves += c->lower_solves;
        }
        row.mean = sum / static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - row.mean) * (v - row.mean);
        row.std = std::sqrt(var / static_cast<double>(values.size()));
        row.time_ms = time / static_cast<double>(group.size());
        rows.push_back(row);
    }
    const auto base = std::find_if(rows.begin(), rows.end(), [&](const ResultRow& r) { return r.method == baseline; });
    if (base == rows.end()) throw ValidationError("baseline '" + baseline + "' has no results");
    const double base_mean = base->mean;
    for (auto& r : rows) {
        if (base_mean != 0.0) {
            r.relative = 100.0 * (r.mean - base_mean) / base_mean;
        } else {
            r.relative = r.mean == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return rows;
}

void write_cells_csv(std::ostream& out, const std::vector<CellResult>& cells) {
    out << "method,instance,seed,objective,time_ms,lower_solves\n";
    for (const auto& c : cells) {
        out << c.method << ',' << c.instance << ',' << c.seed << ',' << c.objective << ',' << c.time_ms << ','
            << c.lower_solves << '\n';
    }
}

std::vector<CellResult> read_cells_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "method,instance,seed,objective,time_ms,lower_solves") {
        throw ParseError("line 1", "unexpected CSV header");
    }
    std::vector<CellResult> cells;
    for (int lineno = 2; std::getline(in, line); ++lineno) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        const std::string where = "line " + std::to_string(lineno);
        if (fields.size() != 6) throw ParseError(where, "expected 6 fields");
        CellResult c;
        c.method = fields[0];
        c.instance = fields[1];
        try {
            std::size_t pos = 0;
            c.seed = std::stoull(fields[2], &pos);
            if (pos != fields[2].size()) throw std::invalid_argument("seed");
            c.objective = std::stoll(fields[3], &pos);
            if (pos != fields[3].size()) throw std::invalid_argument("objective");
            c.time_ms = std::stoll(fields[4], &pos);
            if (pos != fields[4].size()) throw std::invalid_argument("time_ms");
            c.lower_solves = std::stoll(fields[5], &pos);
            if (pos != fields[5].size()) throw std::invalid_argument("lower_solves");
        } catch (const std::logic_error&) {
            throw ParseError(where, "bad numeric field");
        }
        cells.push_back(std::move(c));
    }
    return cells;
}

namespace {

std::string fixed(double v, int digits) {
    if (std::isnan(v)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "method,mean,std,relative_pct,time_ms,lower_solves\n";
    for (const auto& r : rows) {
        out << r.method << ',' << fixed(r.mean, 3) << ',' << fixed(r.std, 3) << ',' << fixed(r.relative, 3) << ','
            << fixed(r.time_ms, 1) << ',' << r.lower_solves << '\n';
    }
}

void print_table(std::ostream& out, const std::vector<ResultRow>& rows) {
    const std::vector<std::string> header{"method", "objective", "std", "relative", "time_ms", "lower_solves"};
    std::vector<std::vector<std::string>> body;
    for (const auto& r : rows) {
        body.push_back({r.method, fixed(r.mean, 3), fixed(r.std, 3), fixed(r.relative, 1) + "%", fixed(r.time_ms, 1),
                        std::to_string(r.lower_solves)});
    }
    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) {
        width[i] = header[i].size();
        for (const auto& b : body) width[i] = std::max(width[i], b[i].size());
    }
    auto emit = [&](const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i == 0) {
                out << std::left << std::setw(static_cast<int>(width[i])) << cols[i];
            } else {
                out << "  " << std::right << std::setw(static_cast<int>(width[i])) << cols[i];
            }
        }
        out << '\n';
    };
    emit(header);
    for (const auto& b : body) emit(b);
}

}  // namespace bihyb

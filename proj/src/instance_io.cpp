#include "bihyb/instance_io.hpp"

#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bihyb/error.hpp"

namespace bihyb {

using nlohmann::json;

std::string_view to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::dag: return "dag";
        case ProblemKind::ged: return "ged";
        case ProblemKind::hcp: return "hcp";
    }
    return "?";
}

ProblemKind problem_from_string(std::string_view name) {
    if (name == "dag") return ProblemKind::dag;
    if (name == "ged") return ProblemKind::ged;
    if (name == "hcp") return ProblemKind::hcp;
    throw ContractError("unknown problem kind '" + std::string(name) + "'");
}

ProblemKind kind_of(const Instance& inst) {
    return static_cast<ProblemKind>(inst.index());
}

namespace {

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path, "expected object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + "/" + key, "missing field");
    return *it;
}

std::int64_t as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError(path, "expected integer");
    return v.get<std::int64_t>();
}

int as_node(const json& v, int n, const std::string& path) {
    const auto id = as_int(v, path);
    if (id < 0 || id >= n) throw ValidationError(path + ": node id " + std::to_string(id) + " out of range");
    return static_cast<int>(id);
}

const json& as_array(const json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path, "expected array");
    return v;
}

std::pair<int, int> as_pair(const json& v, int n, const std::string& path) {
    if (!v.is_array() || v.size() != 2) throw ParseError(path, "expected [u, v]");
    return {as_node(v[0], n, path + "/0"), as_node(v[1], n, path + "/1")};
}

Micros seconds_to_micros(const json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError(path, "expected number");
    const double s = v.get<double>();
    if (!std::isfinite(s)) throw ParseError(path, "non-finite number");
    return static_cast<Micros>(std::llround(s * static_cast<double>(kMicrosPerSecond)));
}

json micros_to_seconds(Micros us) {
    if (us % kMicrosPerSecond == 0) return us / kMicrosPerSecond;
    return static_cast<double>(us) / static_cast<double>(kMicrosPerSecond);
}

DagInstance parse_dag(const json& doc) {
    DagInstance inst;
    const auto cap = as_int(field(doc, "capacity", ""), "/capacity");
    if (cap < 1 || cap > std::numeric_limits<int>::max()) throw ValidationError("/capacity: must be >= 1");
    inst.capacity = static_cast<int>(cap);
    const auto& nodes = as_array(field(doc, "nodes", ""), "/nodes");
    const int n = static_cast<int>(nodes.size());
    inst.graph = WeightedDigraph(n);
    for (int i = 0; i < n; ++i) {
        const std::string p = "/nodes/" + std::to_string(i);
        inst.duration.push_back(seconds_to_micros(field(nodes[static_cast<std::size_t>(i)], "dur", p), p + "/dur"));
        const auto res = as_int(field(nodes[static_cast<std::size_t>(i)], "res", p), p + "/res");
        if (res < 0 || res > std::numeric_limits<int>::max()) throw ValidationError(p + "/res: out of range");
        inst.resource.push_back(static_cast<int>(res));
    }
    const auto& edges = as_array(field(doc, "edges", ""), "/edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string p = "/edges/" + std::to_string(i);
        const auto [u, v] = as_pair(edges[i], n, p);
        if (u == v) throw ValidationError(p + ": self-loop");
        if (inst.graph.has_edge(u, v)) throw ValidationError(p + ": duplicate edge");
        inst.graph.add_edge(u, v);
    }
    inst.validate();
    return inst;
}

LabeledGraph parse_labeled(const json& obj, const std::string& path) {
    const auto& labels_json = as_array(field(obj, "labels", path), path + "/labels");
    std::vector<int> labels;
    for (std::size_t i = 0; i < labels_json.size(); ++i) {
        labels.push_back(static_cast<int>(as_int(labels_json[i], path + "/labels/" + std::to_string(i))));
    }
    LabeledGraph g(std::move(labels));
    const auto& edges = as_array(field(obj, "edges", path), path + "/edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string p = path + "/edges/" + std::to_string(i);
        const auto [u, v] = as_pair(edges[i], g.node_count(), p);
        if (u == v) throw ValidationError(p + ": self-loop");
        if (g.has_edge(u, v)) throw ValidationError(p + ": duplicate edge");
        g.add_edge(u, v);
    }
    return g;
}

HcpInstance parse_hcp(const json& doc) {
    const auto n = as_int(field(doc, "n", ""), "/n");
    if (n < 0 || n > std::numeric_limits<int>::max()) throw ValidationError("/n: out of range");
    const auto& edges = as_array(field(doc, "edges", ""), "/edges");
    std::vector<std::pair<NodeId, NodeId>> list;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string p = "/edges/" + std::to_string(i);
        const auto [u, v] = as_pair(edges[i], static_cast<int>(n), p);
        if (u == v) throw ValidationError(p + ": self-loop");
        list.emplace_back(u, v);
    }
    return HcpInstance::from_edges(static_cast<int>(n), std::move(list));
}

json edges_json(const std::vector<std::pair<NodeId, NodeId>>& edges) {
    json arr = json::array();
    for (const auto& [u, v] : edges) arr.push_back({u, v});
    return arr;
}

json labeled_json(const LabeledGraph& g) {
    return json{{"labels", g.labels()}, {"edges", edges_json(g.edges())}};
}

}  // namespace

Instance parse_instance(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", e.what());
    }
    const auto& kind = field(doc, "kind", "");
    if (!kind.is_string()) throw ParseError("/kind", "expected string");
    const auto name = kind.get<std::string>();
    if (name == "dag") return parse_dag(doc);
    if (name == "ged") {
        return GedPair{parse_labeled(field(doc, "g1", ""), "/g1"), parse_labeled(field(doc, "g2", ""), "/g2")};
    }
    if (name == "hcp") return parse_hcp(doc);
    throw ParseError("/kind", "unknown kind '" + name + "'");
}

Instance parse_instance(std::string_view text, ProblemKind expected) {
    auto inst = parse_instance(text);
    if (kind_of(inst) != expected) {
        throw ParseError("/kind", "expected '" + std::string(to_string(expected)) + "' document");
    }
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    json doc;
    if (const auto* dag = std::get_if<DagInstance>(&inst)) {
        doc["kind"] = "dag";
        doc["capacity"] = dag->capacity;
        json nodes = json::array();
        for (int i = 0; i < dag->node_count(); ++i) {
            nodes.push_back({{"dur", micros_to_seconds(dag->duration[static_cast<std::size_t>(i)])},
                             {"res", dag->resource[static_cast<std::size_t>(i)]}});
        }
        doc["nodes"] = std::move(nodes);
        json edges = json::array();
        for (const Edge& e : dag->graph.edges()) edges.push_back({e.src, e.dst});
        doc["edges"] = std::move(edges);
    } else if (const auto* ged = std::get_if<GedPair>(&inst)) {
        doc["kind"] = "ged";
        doc["g1"] = labeled_json(ged->g1);
        doc["g2"] = labeled_json(ged->g2);
    } else {
        const auto& hcp = std::get<HcpInstance>(inst);
        doc["kind"] = "hcp";
        doc["n"] = hcp.n;
        doc["edges"] = edges_json(hcp.edges);
    }
    return doc.dump();
}

HcpInstance parse_fhcp(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    long dimension = -1;
    std::vector<std::pair<NodeId, NodeId>> edges;
    long max_id = 0;
    bool in_data = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const std::string_view body = std::string_view(line).substr(first);
        if (body.starts_with("EOF")) break;
        if (!in_data) {
            if (body.starts_with("EDGE_DATA_SECTION")) {
                in_data = true;
                continue;
            }
            const auto colon = body.find(':');
            if (colon != std::string_view::npos) {
                std::string key(body.substr(0, colon));
                key.erase(key.find_last_not_of(" \t") + 1);
                if (key == "DIMENSION") {
                    try {
                        dimension = std::stol(std::string(body.substr(colon + 1)));
                    } catch (const std::exception&) {
                        throw ParseError("line " + std::to_string(line_no), "bad DIMENSION");
                    }
                }
                continue;
            }
            if (!(body[0] >= '0' && body[0] <= '9') && body[0] != '-') continue;
            in_data = true;  // header-less file
        }
        std::istringstream nums{std::string(body)};
        long u = 0;
        if (!(nums >> u)) throw ParseError("line " + std::to_string(line_no), "expected node id");
        if (u == -1) break;
        long v = 0;
        if (!(nums >> v)) throw ParseError("line " + std::to_string(line_no), "expected 'u v' pair");
        if (u < 1 || v < 1) throw ValidationError("line " + std::to_string(line_no) + ": ids are 1-indexed");
        if (u == v) throw ValidationError("line " + std::to_string(line_no) + ": self-loop");
        max_id = std::max({max_id, u, v});
        edges.emplace_back(static_cast<NodeId>(u - 1), static_cast<NodeId>(v - 1));
    }
    if (dimension >= 0 && max_id > dimension) {
        throw ValidationError("edge endpoint exceeds DIMENSION");
    }
    const int n = static_cast<int>(dimension >= 0 ? dimension : max_id);
    return HcpInstance::from_edges(n, std::move(edges));
}

std::string serialize_fhcp(const HcpInstance& h, std::string_view name) {
    std::ostringstream out;
    out << "NAME : " << name << "\nTYPE : HCP\nDIMENSION : " << h.n
        << "\nEDGE_DATA_FORMAT : EDGE_LIST\nEDGE_DATA_SECTION\n";
    for (const auto& [u, v] : h.edges) out << ' ' << u + 1 << ' ' << v + 1 << '\n';
    out << "-1\nEOF\n";
    return out.str();
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ContractError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Instance load_instance(const std::filesystem::path& path) {
    const auto text = read_file(path);
    if (path.extension() == ".hcp") return parse_fhcp(text);
    return parse_instance(text);
}

void save_instance(const std::filesystem::path& path, const Instance& inst) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ContractError("cannot write " + path.string());
    if (path.extension() == ".hcp") {
        out << serialize_fhcp(std::get<HcpInstance>(inst), path.stem().string());
    } else {
        out << serialize_instance(inst) << '\n';
    }
}

}  // namespace bihyb

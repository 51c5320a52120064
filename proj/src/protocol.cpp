#include "bihyb/protocol.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bihyb/error.hpp"

namespace bihyb::protocol {

using nlohmann::json;

namespace {

class RequestError : public std::runtime_error {
public:
    RequestError(std::string code, const std::string& message, json extra = json::object())
        : std::runtime_error(message), code_(std::move(code)), extra_(std::move(extra)) {}
    const std::string& code() const noexcept { return code_; }
    const json& extra() const noexcept { return extra_; }

private:
    std::string code_;
    json extra_;
};

json error_response(const std::string& code, const std::string& message, const json& extra = json::object()) {
    json body = extra;
    body["code"] = code;
    body["message"] = message;
    return json{{"err", std::move(body)}};
}

std::string render(const json& j) {
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::int64_t int_field(const json& req, const char* key) {
    auto it = req.find(key);
    if (it == req.end()) throw RequestError("bad_request", std::string("missing field '") + key + "'");
    if (!it->is_number_integer()) throw RequestError("bad_request", std::string("field '") + key + "' must be an integer");
    return it->get<std::int64_t>();
}

NodeId node_field(const json& req, const char* key) {
    const auto v = int_field(req, key);
    if (v < std::numeric_limits<NodeId>::min() || v > std::numeric_limits<NodeId>::max()) {
        throw RequestError("bad_request", std::string("field '") + key + "' out of range");
    }
    return static_cast<NodeId>(v);
}

}  // namespace

json to_json(const Observation& obs) {
    json j;
    j["problem"] = std::string(to_string(obs.problem));
    j["k"] = obs.k;
    j["K"] = obs.K;
    j["done"] = obs.done;
    j["objective"] = obs.objective;
    j["incumbent"] = obs.incumbent;
    json graphs = json::array();
    for (const auto& t : obs.graphs) {
        graphs.push_back(json{{"columns", t.columns}, {"nodes", t.rows}, {"edges", t.edges}});
    }
    j["graphs"] = std::move(graphs);
    if (obs.problem == ProblemKind::dag) j["reversed_edges"] = obs.reversed_edges;
    if (obs.problem == ProblemKind::hcp) j["tour"] = obs.tour;
    return j;
}

std::string Session::handle(std::string_view line) {
    json request;
    try {
        request = json::parse(line);
    } catch (const json::exception& e) {
        return render(error_response("parse", "malformed JSON request"));
    }
    try {
        return render(dispatch(request));
    } catch (const RequestError& e) {
        return render(error_response(e.code(), e.what(), e.extra()));
    } catch (const InvalidAction& e) {
        return render(error_response("illegal_action", e.what()));
    } catch (const ParseError& e) {
        return render(error_response("validation", e.what()));
    } catch (const ValidationError& e) {
        return render(error_response("validation", e.what()));
    } catch (const CycleError& e) {
        return render(error_response("validation", e.what()));
    } catch (const ContractError& e) {
        return render(error_response("bad_request", e.what()));
    } catch (const json::exception& e) {
        return render(error_response("bad_request", e.what()));
    } catch (const std::exception& e) {
        return render(error_response("internal", e.what()));
    }
}

json Session::dispatch(const json& request) {
    if (!request.is_object()) throw RequestError("bad_request", "request must be a JSON object");
    auto cmd_it = request.find("cmd");
    if (cmd_it == request.end() || !cmd_it->is_string()) throw RequestError("bad_request", "missing string field 'cmd'");
    const auto cmd = cmd_it->get<std::string>();
    if (cmd == "reset") return do_reset(request);
    if (cmd == "shutdown") {
        finished_ = true;
        return json{{"ok", json::object()}};
    }
    if (cmd != "observe" && cmd != "legal" && cmd != "step") {
        throw RequestError("bad_request", "unknown cmd '" + cmd + "'");
    }
    if (!state_) throw RequestError("state", "no episode; send reset first");
    if (cmd == "observe") return json{{"ok", {{"obs", to_json(observe(*state_))}}}};
    if (cmd == "legal") return do_legal(request);
    return do_step(request);
}

json Session::do_reset(const json& request) {
    std::string instance_text;
    if (auto it = request.find("instance"); it != request.end()) {
        if (!it->is_object()) throw RequestError("bad_request", "'instance' must be an object");
        instance_text = it->dump();
    } else if (auto p = request.find("instance_path"); p != request.end() && p->is_string()) {
        const std::filesystem::path path = p->get<std::string>();
        if (!std::filesystem::exists(path)) throw RequestError("validation", "instance file not found");
        auto inst = std::make_shared<const Instance>(load_instance(path));
        instance_text = serialize_instance(*inst);
    } else {
        throw RequestError("bad_request", "reset needs 'instance' or 'instance_path'");
    }
    auto instance = std::make_shared<const Instance>(parse_instance(instance_text));

    const json config = request.contains("config") ? request.at("config") : json::object();
    if (!config.is_object()) throw RequestError("bad_request", "'config' must be an object");
    ProblemKind problem = kind_of(*instance);
    if (auto it = config.find("problem"); it != config.end()) {
        if (!it->is_string()) throw RequestError("bad_request", "config.problem must be a string");
        problem = problem_from_string(it->get<std::string>());
        if (problem != kind_of(*instance)) throw RequestError("bad_request", "config.problem does not match instance kind");
    }
    EnvConfig cfg = EnvConfig::defaults(problem);
    if (config.contains("K")) cfg.K = static_cast<int>(int_field(config, "K"));
    if (auto it = config.find("heuristic"); it != config.end()) {
        if (!it->is_string()) throw RequestError("bad_request", "config.heuristic must be a string");
        cfg.heuristic = heuristic_from_string(it->get<std::string>());
    }
    if (config.contains("seed")) cfg.seed = static_cast<std::uint64_t>(int_field(config, "seed"));
    cfg.validate();

    state_ = reset(std::move(instance), cfg);
    return json{{"ok", {{"obs", to_json(observe(*state_))}, {"objective", state_->last_objective}}}};
}

json Session::do_legal(const json& request) {
    if (state_->done) throw RequestError("episode_done", "episode is done; send reset");
    std::optional<NodeId> a1;
    if (request.contains("a1") && !request.at("a1").is_null()) a1 = node_field(request, "a1");
    return json{{"ok", {{"nodes", legal_actions(*state_, a1)}}}};
}

json Session::do_step(const json& request) {
    if (state_->done) throw RequestError("episode_done", "episode is done; send reset");
    const ActionPair a{node_field(request, "a1"), node_field(request, "a2")};
    const ActionSpace space(*state_);
    if (!space.contains(a)) {
        throw RequestError("illegal_action",
                           "(" + std::to_string(a.a1) + ", " + std::to_string(a.a2) + ") is not a legal action",
                           json{{"legal_count", space.pair_count()}});
    }
    auto out = step(*state_, a);
    state_ = std::move(out.state);
    return json{{"ok",
                 {{"reward", out.reward},
                  {"objective", state_->last_objective},
                  {"done", out.done},
                  {"obs", to_json(observe(*state_))}}}};
}

void serve(std::istream& in, std::ostream& out) {
    Session session;
    std::string line;
    while (!session.finished() && std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out << session.handle(line) << '\n';
        out.flush();
    }
}

namespace {

void serve_socket(int fd) {
    Session session;
    std::string buffer;
    char chunk[4096];
    while (!session.finished()) {
        const auto got = ::recv(fd, chunk, sizeof chunk, 0);
        if (got <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(got));
        std::size_t nl;
        while (!session.finished() && (nl = buffer.find('\n')) != std::string::npos) {
            std::string line = buffer.substr(0, nl);
            buffer.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::string reply = session.handle(line) + '\n';
            std::size_t sent = 0;
            while (sent < reply.size()) {
                const auto n = ::send(fd, reply.data() + sent, reply.size() - sent, MSG_NOSIGNAL);
                if (n <= 0) {
                    ::close(fd);
                    return;
                }
                sent += static_cast<std::size_t>(n);
            }
        }
    }
    ::close(fd);
}

}  // namespace

void serve_tcp(std::uint16_t port, void (*on_listening)(std::uint16_t), int max_sessions) {
    const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listener < 0) throw std::runtime_error("socket() failed");
    int yes = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listener, 16) != 0) {
        ::close(listener);
        throw std::runtime_error("cannot listen on port " + std::to_string(port));
    }
    socklen_t len = sizeof addr;
    ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
    if (on_listening) on_listening(ntohs(addr.sin_port));

    std::vector<std::thread> sessions;
    for (int served = 0; max_sessions == 0 || served < max_sessions; ++served) {
        const int fd = ::accept(listener, nullptr, nullptr);
        if (fd < 0) break;
        sessions.emplace_back(serve_socket, fd);
    }
    for (auto& t : sessions) t.join();
    ::close(listener);
}

}  // namespace bihyb::protocol

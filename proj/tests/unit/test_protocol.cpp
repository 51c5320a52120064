#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bihyb/generators.hpp"
#include "bihyb/protocol.hpp"
#include "bihyb/rng.hpp"

using namespace bihyb;
using nlohmann::json;

namespace {

const std::string kGoldenRequests = std::string(BIHYB_GOLDEN_DIR) + "/hcp_session.requests.jsonl";
const std::string kGoldenResponses = std::string(BIHYB_GOLDEN_DIR) + "/hcp_session.responses.jsonl";

json reset_request(const Instance& inst, const std::string& problem, int K, std::uint64_t seed) {
    return json{{"cmd", "reset"},
                {"instance", json::parse(serialize_instance(inst))},
                {"config", {{"problem", problem}, {"K", K}, {"seed", seed}}}};
}

json ok(const std::string& line) {
    const json j = json::parse(line);
    REQUIRE(j.contains("ok"));
    return j["ok"];
}

std::string err_code(const std::string& line) {
    const json j = json::parse(line);
    REQUIRE(j.contains("err"));
    return j["err"]["code"].get<std::string>();
}

// Drives a scripted HCP session: reset, observe, then eight steps that each
// take the first legal first node and its first legal partner, one step past
// the end, and shutdown.
std::vector<std::string> scripted_requests(protocol::Session& session, std::vector<std::string>& responses) {
    std::vector<std::string> requests;
    auto send = [&](const json& req) {
        requests.push_back(req.dump());
        responses.push_back(session.handle(requests.back()));
        return responses.back();
    };
    const Instance inst = generate_planted_hcp(12, 1.0, 5).instance;
    send(reset_request(inst, "hcp", 8, 3));
    send(json{{"cmd", "observe"}});
    for (int k = 0; k < 8; ++k) {
        const auto firsts = ok(send(json{{"cmd", "legal"}}))["nodes"];
        const int a1 = firsts.at(0).get<int>();
        const auto seconds = ok(send(json{{"cmd", "legal"}, {"a1", a1}}))["nodes"];
        send(json{{"cmd", "step"}, {"a1", a1}, {"a2", seconds.at(0).get<int>()}});
    }
    send(json{{"cmd", "step"}, {"a1", 0}, {"a2", 1}});
    send(json{{"cmd", "shutdown"}});
    return requests;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("reset returns an observation and the objective") {
    protocol::Session s;
    const Instance inst = generate_dag_instance(2, 1);
    const auto r = ok(s.handle(reset_request(inst, "dag", 5, 0).dump()));
    CHECK(r.contains("obs"));
    CHECK(r["objective"].is_number_integer());
    CHECK(r["obs"]["k"] == 0);
    CHECK(r["obs"]["K"] == 5);
    CHECK(r["obs"]["problem"] == "dag");
}

TEST_CASE("error codes") {
    protocol::Session s;
    CHECK(err_code(s.handle(R"({"cmd":"step","a1":0,"a2":1})")) == "state");
    CHECK(err_code(s.handle(R"({"cmd":"observe"})")) == "state");
    CHECK(err_code(s.handle("not json")) == "parse");
    CHECK(err_code(s.handle(R"([1,2])")) == "bad_request");
    CHECK(err_code(s.handle(R"({"cmd":"dance"})")) == "bad_request");
    CHECK(err_code(s.handle(R"({"cmd":"reset"})")) == "bad_request");
    CHECK(err_code(s.handle(R"({"cmd":"reset","instance_path":"/nonexistent.json"})")) == "validation");
    CHECK(err_code(s.handle(R"({"cmd":"reset","instance":{"kind":"dag","capacity":1,"nodes":[{"dur":1,"res":5}],"edges":[]}})")) ==
          "validation");

    DagInstance chain;
    chain.graph = WeightedDigraph(3);
    chain.graph.add_edge(0, 1);
    chain.graph.add_edge(1, 2);
    chain.duration = {3, 2, 5};
    chain.resource = {1, 1, 1};
    chain.capacity = 10;
    ok(s.handle(reset_request(chain, "dag", 5, 0).dump()));
    CHECK(err_code(s.handle(reset_request(chain, "ged", 5, 0).dump())) == "bad_request");

    const auto illegal = json::parse(s.handle(R"({"cmd":"step","a1":2,"a2":0})"));
    CHECK(illegal["err"]["code"] == "illegal_action");
    CHECK(illegal["err"]["legal_count"] == 1);
    CHECK(err_code(s.handle(R"({"cmd":"step","a1":0})")) == "bad_request");
    CHECK(err_code(s.handle(R"({"cmd":"step","a1":0.5,"a2":2})")) == "bad_request");

    const auto last = ok(s.handle(R"({"cmd":"step","a1":0,"a2":2})"));
    CHECK(last["done"] == true);
    CHECK(last["reward"] == 0);
    CHECK(last["objective"] == 10);
    CHECK(err_code(s.handle(R"({"cmd":"step","a1":0,"a2":2})")) == "episode_done");
    CHECK(err_code(s.handle(R"({"cmd":"legal"})")) == "episode_done");
    CHECK(ok(s.handle(R"({"cmd":"shutdown"})")) == json::object());
    CHECK(s.finished());
}

TEST_CASE("legal responses") {
    protocol::Session s;
    LabeledGraph g({0, 1, 2});
    ok(s.handle(reset_request(GedPair{g, g}, "ged", 3, 0).dump()));
    CHECK(ok(s.handle(R"({"cmd":"legal","a1":0})"))["nodes"] == json::array({1, 2}));
    CHECK(ok(s.handle(R"({"cmd":"legal"})"))["nodes"] == json::array({0, 1, 2}));
    CHECK(ok(s.handle(R"({"cmd":"legal","a1":7})"))["nodes"] == json::array());
}

TEST_CASE("random lines never break the session") {
    Rng rng(99);
    protocol::Session s;
    const std::vector<std::string> fragments{"{", "}", "\"cmd\"", ":", "\"step\"", "\"reset\"", "\"legal\"", ",",
                                             "\"a1\"", "1", "-3", "1e99", "null", "[", "]", "\"instance\"", "\xff",
                                             "\"config\"", "{\"K\":0}", "\"observe\""};
    for (int i = 0; i < 3000; ++i) {
        std::string line;
        const auto len = rng.below(24);
        for (std::uint64_t j = 0; j < len; ++j) {
            if (rng.below(2)) {
                line += fragments[rng.below(fragments.size())];
            } else {
                char c = static_cast<char>(rng.below(256));
                if (c == '\n') c = ' ';
                line += c;
            }
        }
        const std::string reply = s.handle(line);
        REQUIRE(reply.find('\n') == std::string::npos);
        const json j = json::parse(reply);
        REQUIRE((j.contains("ok") != j.contains("err")));
        if (s.finished()) break;
    }
}

TEST_CASE("serve answers every line, one response per request") {
    const Instance inst = generate_ged_pair(2);
    std::stringstream in;
    in << reset_request(inst, "ged", 2, 0).dump() << "\n\ngarbage\r\n{\"cmd\":\"observe\"}\n"
       << R"({"cmd":"shutdown"})" << "\n" << R"({"cmd":"observe"})" << "\n";
    std::stringstream out;
    protocol::serve(in, out);
    std::vector<std::string> lines;
    for (std::string l; std::getline(out, l);) lines.push_back(l);
    REQUIRE(lines.size() == 5);  // nothing after shutdown
    CHECK(err_code(lines[1]) == "parse");
    CHECK(err_code(lines[2]) == "parse");
    CHECK(ok(lines[3]).contains("obs"));
}

TEST_CASE("golden HCP transcript") {
    protocol::Session s;
    std::vector<std::string> responses;
    const auto requests = scripted_requests(s, responses);
    REQUIRE(requests.size() == 2 + 8 * 3 + 2);
    CHECK(err_code(responses[responses.size() - 2]) == "episode_done");

    if (std::getenv("BIHYB_WRITE_GOLDEN") != nullptr) {
        std::ofstream rq(kGoldenRequests, std::ios::binary);
        for (const auto& r : requests) rq << r << '\n';
        std::ofstream rs(kGoldenResponses, std::ios::binary);
        for (const auto& r : responses) rs << r << '\n';
        MESSAGE("golden files written");
    }

    const auto frozen_requests = read_lines(kGoldenRequests);
    const auto frozen_responses = read_lines(kGoldenResponses);
    REQUIRE(frozen_requests.size() == requests.size());
    CHECK(frozen_requests == requests);

    // Replay the frozen requests twice through fresh sessions.
    for (int round = 0; round < 2; ++round) {
        std::stringstream in;
        for (const auto& r : frozen_requests) in << r << '\n';
        std::stringstream out;
        protocol::serve(in, out);
        std::ifstream golden(kGoldenResponses, std::ios::binary);
        std::stringstream expected;
        expected << golden.rdbuf();
        CHECK(out.str() == expected.str());
    }
}

namespace {
std::atomic<int> g_port{0};
}

TEST_CASE("tcp transport") {
    std::thread server([] { protocol::serve_tcp(0, [](std::uint16_t p) { g_port = p; }, 1); });
    while (g_port == 0) std::this_thread::yield();

    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<std::uint16_t>(g_port.load()));
    REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
    const std::string req = "{\"cmd\":\"observe\"}\n{\"cmd\":\"shutdown\"}\n";
    REQUIRE(::send(fd, req.data(), req.size(), 0) == static_cast<ssize_t>(req.size()));
    std::string got;
    char buf[512];
    for (ssize_t n; (n = ::recv(fd, buf, sizeof buf, 0)) > 0;) got.append(buf, static_cast<std::size_t>(n));
    ::close(fd);
    server.join();
    std::istringstream lines(got);
    std::string first;
    std::string second;
    std::getline(lines, first);
    std::getline(lines, second);
    CHECK(err_code(first) == "state");
    CHECK(ok(second) == json::object());
}

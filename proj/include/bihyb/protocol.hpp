#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bihyb/env.hpp"

namespace bihyb::protocol {

/// JSON rendering of an observation. Keys are emitted in sorted order.
nlohmann::json to_json(const Observation& obs);

/// One protocol session: owns at most one episode. Every request line gets
/// exactly one response line, and a malformed request never ends the session.
///
/// Requests:
///   {"cmd":"reset","instance":{...}|"instance_path":"...","config":{"problem":..,"K":..,"heuristic":..,"seed":..}}
///   {"cmd":"observe"}
///   {"cmd":"legal","a1":int?}
///   {"cmd":"step","a1":int,"a2":int}
///   {"cmd":"shutdown"}
/// Responses: {"ok":{...}} or {"err":{"code":..,"message":..}}.
class Session {
public:
    /// Handles one request line and returns the response line (no newline).
    std::string handle(std::string_view line);
    bool finished() const noexcept { return finished_; }
    const std::optional<EnvState>& state() const noexcept { return state_; }

private:
    nlohmann::json dispatch(const nlohmann::json& request);
    nlohmann::json do_reset(const nlohmann::json& request);
    nlohmann::json do_legal(const nlohmann::json& request);
    nlohmann::json do_step(const nlohmann::json& request);

    std::optional<EnvState> state_;
    bool finished_ = false;
};

/// Runs a session over a pair of streams until shutdown or end of input.
void serve(std::istream& in, std::ostream& out);

/// Listens on 127.0.0.1:port (0 picks a free port) and serves one session per
/// connection on its own thread. `on_listening` receives the bound port.
/// Returns only on socket errors or after `max_sessions` sessions (0 = never).
void serve_tcp(std::uint16_t port, void (*on_listening)(std::uint16_t) = nullptr, int max_sessions = 0);

}  // namespace bihyb::protocol

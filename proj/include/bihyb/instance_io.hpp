#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "bihyb/graph.hpp"

namespace bihyb {

enum class ProblemKind { dag, ged, hcp };

std::string_view to_string(ProblemKind kind);
/// Throws ContractError for an unknown name.
ProblemKind problem_from_string(std::string_view name);

using Instance = std::variant<DagInstance, GedPair, HcpInstance>;

ProblemKind kind_of(const Instance& inst);

/// Parses a JSON instance document. The "kind" field selects the layout:
///   {"kind":"dag","capacity":C,"nodes":[{"dur":seconds,"res":units}],"edges":[[u,v]]}
///   {"kind":"ged","g1":{"labels":[..],"edges":[[u,v]]},"g2":{...}}
///   {"kind":"hcp","n":N,"edges":[[u,v]]}
/// Throws ParseError (with a JSON-pointer-like path) on schema problems and
/// ValidationError when the content breaks an instance invariant.
Instance parse_instance(std::string_view text);

/// Same as parse_instance, but fails if the document is of another kind.
Instance parse_instance(std::string_view text, ProblemKind expected);

/// Compact single-line JSON; parse_instance(serialize_instance(x)) == x.
std::string serialize_instance(const Instance& inst);

/// TSPLIB/FHCP-style edge list: "KEY : value" header lines, an optional
/// EDGE_DATA_SECTION marker, then 1-indexed "u v" pairs, terminated by -1,
/// EOF or end of input.
HcpInstance parse_fhcp(std::string_view text);
std::string serialize_fhcp(const HcpInstance& h, std::string_view name = "instance");

/// Reads a file, dispatching on extension: .hcp files use the FHCP parser,
/// everything else is JSON.
Instance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const Instance& inst);

}  // namespace bihyb

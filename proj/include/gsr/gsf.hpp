#pragma once

#include <string>
#include <variant>

#include "gsr/graph.hpp"

namespace gsr {

// Line-oriented Graph Structure Format. `#` starts a comment; blank lines are
// ignored. Records:
//
//   piece <id> [orientable|nonorientable] genus=<n> boundary=<b> ends=<e> cones=<q1,..|none>
//   solidtorus <id> meridian=<ms>,<mf>
//   k2xi <id>
//   edge <id> <pidA>:<slot> <pidB>:<slot> matrix=<a>,<b>,<c>,<d> [reversing]
//   ray <id> attach=<pid>:<slot> period=<k>
//     piece [orientable|nonorientable] genus=.. boundary=2 ends=0 cones=.. matrix=<a>,<b>,<c>,<d>
//     (k indented lines)
//
// Slots are 0-based positions in a piece's boundary order; matrices are rows
// (a,b),(c,d) acting on (section, fiber) column vectors, mapping side-A
// coordinates to side-B coordinates.
struct ParseError {
    int line = 0;
    std::string reason;
};

std::variant<GraphStructure, ParseError> parse_gsf(const std::string& text);

std::string serialize_gsf(const GraphStructure& g);

// Graphviz dump of the dual graph (pieces as nodes, gluing tori as edges).
std::string to_dot(const GraphStructure& g);

} // namespace gsr

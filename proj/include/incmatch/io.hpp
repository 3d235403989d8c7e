#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "incmatch/gadgets.hpp"
#include "incmatch/model.hpp"

namespace incmatch {

// Input problems; the message starts with "line N:" when a line is to blame.
class ParseError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Instance text format:
//   agents: a b c d
//   bipartition: a b | c d      (optional)
//   profile P1:
//   a: c > ( d e )              (one line per agent; omitted agents accept nobody)
//   profile P2:
//   ...
//   matching M1: a-c b-d
//   k: 2
//   forced: a-c                 (optional)
// `#` starts a comment. Agent names may not contain whitespace or any of
// - > ( ) : | # and may not be a section keyword.
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

//   color 1: x1 x2
//   color 2: y1 y2
//   edge: x1 y1
ColoredGraph parse_graph(const std::string& text);
std::string serialize_graph(const ColoredGraph& g);

// Pairs like a-c, whitespace separated, any number of lines; a leading
// "matching ...:" label is allowed.
Matching parse_matching(const std::string& text, const std::vector<std::string>& names);
std::string format_matching(const Matching& m, const std::vector<std::string>& names);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// Pairs by name, each pair and the whole list sorted.
std::vector<std::pair<std::string, std::string>> named_pairs(const Matching& m, const std::vector<std::string>& names);

// Result document for `solve`. feasible means a stable matching within k;
// matching and symmetric_difference are null when P2 has none.
std::string result_json(const Instance& inst, const Outcome& out, const std::string& algorithm, long elapsed_ms);
bool feasible_within_budget(const Instance& inst, const Outcome& out);

std::string enumerate_json(const Instance& inst, const std::vector<Matching>& all);

// Stability and budget report for `verify`.
std::string verify_json(const Instance& inst, const Matching& m2);

}  // namespace incmatch
